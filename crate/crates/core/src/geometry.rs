//! Group law, homogeneous norm, and quadrature over H^n and over the fan.

use crate::error::{Error, Result};
use crate::quad::Rule;
use crate::specfn::{lgamma_pos, LaguerreSweep};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    /// z as (x_1, y_1, ..., x_n, y_n).
    pub z: Vec<f64>,
    pub t: f64,
}

impl HPoint {
    pub fn new(z: Vec<f64>, t: f64) -> Result<Self> {
        if z.len() % 2 != 0 || z.is_empty() {
            return Err(Error::Domain("z needs 2n real coordinates".into()));
        }
        if !t.is_finite() || z.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("HPoint coordinates".into()));
        }
        Ok(Self { z, t })
    }

    pub fn identity(n: usize) -> Self {
        Self { z: vec![0.0; 2 * n], t: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.z.len() / 2
    }

    pub fn inverse(&self) -> Self {
        Self { z: self.z.iter().map(|v| -v).collect(), t: -self.t }
    }

    pub fn z_norm(&self) -> f64 {
        self.z.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Homogeneous dimension 2n + 2.
    pub fn q_dim(&self) -> usize {
        2 * self.dim() + 2
    }

    /// δ_r (z, t) = (r z, r² t).
    pub fn dilate(&self, r: f64) -> Self {
        Self { z: self.z.iter().map(|v| r * v).collect(), t: r * r * self.t }
    }
}

/// (z, t)(w, s) = (z + w, t + s + ½ Im(z·w̄)).
pub fn group_mul(p: &HPoint, q: &HPoint) -> Result<HPoint> {
    if p.z.len() != q.z.len() {
        return Err(Error::Dimension(p.dim(), q.dim()));
    }
    let mut im = 0.0;
    for j in 0..p.dim() {
        let (x, y) = (p.z[2 * j], p.z[2 * j + 1]);
        let (u, v) = (q.z[2 * j], q.z[2 * j + 1]);
        // Im((x+iy)(u-iv)) = yu - xv
        im += y * u - x * v;
    }
    let z = p.z.iter().zip(&q.z).map(|(a, b)| a + b).collect();
    Ok(HPoint { z, t: p.t + q.t + 0.5 * im })
}

/// N(z, t) = (|z|⁴ + 16 t²)^{1/4}.
pub fn homogeneous_norm(p: &HPoint) -> f64 {
    let r = p.z_norm();
    norm_rt(r, p.t)
}

pub fn norm_rt(r: f64, t: f64) -> f64 {
    (r.powi(4) + 16.0 * t * t).sqrt().sqrt()
}

/// Surface area ω_{2n-1} = 2πⁿ/Γ(n) of the unit sphere in C^n.
pub fn sphere_area(n: usize) -> f64 {
    2.0 * PI.powi(n as i32) / lgamma_pos(n as f64).exp()
}

/// Volume of the ball of radius ρ in C^n.
pub fn ball_volume(n: usize, rho: f64) -> f64 {
    (n as f64 * PI.ln() - lgamma_pos(n as f64 + 1.0)).exp() * rho.powi(2 * n as i32)
}

/// Point a = (λ, (2k+n)|λ|) on a ray of the fan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FanPoint {
    pub n: usize,
    pub k: usize,
    pub lambda: f64,
}

impl FanPoint {
    pub fn new(n: usize, k: usize, lambda: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::Domain("fan points need a finite nonzero lambda".into()));
        }
        if n == 0 {
            return Err(Error::Domain("dimension n must be at least 1".into()));
        }
        Ok(Self { n, k, lambda })
    }

    /// Eigenvalue (2k+n)|λ|.
    pub fn ev(&self) -> f64 {
        (2 * self.k + self.n) as f64 * self.lambda.abs()
    }

    /// |a| = (2k+n+1)|λ|.
    pub fn abs_a(&self) -> f64 {
        (2 * self.k + self.n + 1) as f64 * self.lambda.abs()
    }

    /// Density of ν₂ against dλ on this ray: (2π)^{-2n-1} binom(k+n-1,k)² |λ|^{2n}.
    pub fn nu2_density(&self) -> f64 {
        let n = self.n as f64;
        let log_binom = lgamma_pos((self.k + self.n) as f64) - lgamma_pos(self.k as f64 + 1.0) - lgamma_pos(n);
        (-(2.0 * n + 1.0) * (2.0 * PI).ln() + 2.0 * log_binom + 2.0 * n * self.lambda.abs().ln()).exp()
    }

    /// ‖φ_{k,λ}‖² over C^n = (2π)^n |λ|^{-n} binom(k+n-1,k).
    pub fn laguerre_l2(&self) -> f64 {
        let n = self.n as f64;
        let log_binom = lgamma_pos((self.k + self.n) as f64) - lgamma_pos(self.k as f64 + 1.0) - lgamma_pos(n);
        (n * (2.0 * PI / self.lambda.abs()).ln() + log_binom).exp()
    }
}

/// Discretisation parameters; every extent left as `None` is derived from the
/// function being integrated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub r_max: Option<f64>,
    pub r_width: f64,
    pub t_max: Option<f64>,
    pub t_width: f64,
    pub order: usize,
    pub lambda_max: Option<f64>,
    pub lambda_panels: usize,
    pub lambda_order: usize,
    /// Hard cap on the Laguerre degree per λ node.
    pub k_max: usize,
    /// Relative size below which Laguerre coefficients end the k-sum.
    pub coeff_tol: f64,
    /// Cap on k where w-integrals are done numerically.
    pub w_k_max: usize,
    /// Smallest |λ| admitted where w-integrals are done numerically.
    pub w_lambda_min: f64,
    pub w_nodes_per_wave: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            r_max: None,
            r_width: 0.05,
            t_max: None,
            t_width: 0.1,
            order: 12,
            lambda_max: None,
            lambda_panels: 8,
            lambda_order: 12,
            k_max: 20_000,
            coeff_tol: 1e-18,
            w_k_max: 160,
            w_lambda_min: 0.0,
            w_nodes_per_wave: 12,
        }
    }
}

impl GridConfig {
    /// Twice the resolution in every direction.
    pub fn refined(&self) -> Self {
        Self {
            r_width: self.r_width / 2.0,
            t_width: self.t_width / 2.0,
            lambda_panels: self.lambda_panels * 2,
            w_k_max: self.w_k_max * 2,
            w_nodes_per_wave: self.w_nodes_per_wave * 2,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [self.r_width, self.t_width, self.coeff_tol];
        if pos.iter().any(|v| !(*v > 0.0)) || self.order == 0 || self.lambda_panels == 0 || self.lambda_order == 0 {
            return Err(Error::Config("grid widths, orders and panel counts must be positive".into()));
        }
        Ok(())
    }
}

/// Tensor grid for ∫ dz dt with radial integrands plus the λ rule on the fan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub n: usize,
    pub r: Rule,
    pub t: Rule,
    /// Nodes on both half-lines, sorted.
    pub lambda: Rule,
    pub k_max: usize,
}

impl QuadratureGrid {
    pub fn new(n: usize, r: Rule, t: Rule, lambda: Rule, k_max: usize) -> Self {
        Self { n, r, t, lambda, k_max }
    }

    /// Symmetric λ rule: Gauss–Legendre panels on [0, λ_max], mirrored.
    pub fn lambda_rule(lambda_max: f64, panels: usize, order: usize) -> Rule {
        let half = Rule::composite(0.0, lambda_max, &[], lambda_max / panels as f64, order);
        let mut nodes: Vec<f64> = half.nodes.iter().rev().map(|x| -x).collect();
        let mut weights: Vec<f64> = half.weights.iter().rev().copied().collect();
        nodes.extend(&half.nodes);
        weights.extend(&half.weights);
        Rule { nodes, weights }
    }
}

/// ∫_{H^n} F(|z|, t) dz dt on the tensor grid.
pub fn integrate_hn_radial<F: Fn(f64, f64) -> f64>(n: usize, r: &Rule, t: &Rule, f: F) -> Result<f64> {
    let omega = sphere_area(n);
    let mut total = 0.0;
    for (&ri, &wi) in r.nodes.iter().zip(&r.weights) {
        let jac = omega * ri.powi(2 * n as i32 - 1) * wi;
        let mut inner = 0.0;
        for (&tj, &wj) in t.nodes.iter().zip(&t.weights) {
            let v = f(ri, tj);
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("(r, t) = ({ri}, {tj})")));
            }
            inner += wj * v;
        }
        total += jac * inner;
    }
    Ok(total)
}

/// ∫_{C^n} g(|w|) dw with a one-dimensional radial rule.
pub fn integrate_cn_radial<F: Fn(f64) -> f64>(n: usize, r: &Rule, g: F) -> f64 {
    let omega = sphere_area(n);
    r.nodes.iter().zip(&r.weights).map(|(&x, &w)| omega * x.powi(2 * n as i32 - 1) * w * g(x)).sum()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FanIntegral {
    pub value: f64,
    /// Estimated mass dropped by truncating the k-sums, relative to `value`.
    pub tail: f64,
}

impl FanIntegral {
    pub fn warn_tail(&self) -> bool {
        self.tail > 1e-6
    }
}

/// ∫_Ω Φ(a) dν₂(a) where Φ already contains the w-integral.
///
/// `phi(i, a)` receives the λ-node index and the fan point; `k_count(i)` is
/// the number of rays summed at node i; `tail(i)` the relative tail there.
pub fn integrate_fan<P, K, T>(n: usize, lambda: &Rule, k_count: K, tail: T, phi: P) -> FanIntegral
where
    P: Fn(usize, &FanPoint) -> f64 + Sync,
    K: Fn(usize) -> usize + Sync,
    T: Fn(usize) -> f64 + Sync,
{
    use rayon::prelude::*;
    let parts: Vec<(f64, f64)> = (0..lambda.len())
        .into_par_iter()
        .map(|i| {
            let l = lambda.nodes[i];
            if l == 0.0 {
                return (0.0, 0.0);
            }
            let mut s = 0.0;
            for k in 0..k_count(i) {
                let a = FanPoint { n, k, lambda: l };
                s += a.nu2_density() * phi(i, &a);
            }
            let w = lambda.weights[i] * s;
            (w, w.abs() * tail(i))
        })
        .collect();
    let value: f64 = parts.iter().map(|p| p.0).sum();
    let tail_abs: f64 = parts.iter().map(|p| p.1).sum();
    FanIntegral { value, tail: if value != 0.0 { tail_abs / value.abs() } else { 0.0 } }
}

/// Radial w-rule that resolves φ_{k,λ} for all k below `k_top`.
pub fn w_rule(n: usize, lambda: f64, k_top: usize, nodes_per_wave: usize) -> Rule {
    let l = lambda.abs();
    let kf = k_top as f64 + n as f64;
    // φ_k dies beyond x ≈ 4k + 2n; keep a generous margin
    let x_max = 4.0 * kf + 40.0 + 12.0 * kf.sqrt();
    let w_max = (2.0 * x_max / l).sqrt();
    let wave = 2.0 * PI / ((2.0 * kf + 1.0) * l).sqrt();
    let order = 12;
    let width = wave * order as f64 / nodes_per_wave.max(1) as f64;
    Rule::graded(0.0, w_max, &[], width, order, 6)
}

/// ∫_Ω ∫_{C^n} Φ(a, |w|) dw dν₂(a) with the w-integral done numerically.
///
/// The integrand receives φ_{k,λ}(w) so callers can assemble f̃ cheaply.
pub fn integrate_fan_radial<P, K>(n: usize, lambda: &Rule, k_count: K, nodes_per_wave: usize, phi: P) -> f64
where
    P: Fn(usize, &FanPoint, f64, f64) -> f64 + Sync,
    K: Fn(usize) -> usize + Sync,
{
    use rayon::prelude::*;
    let omega = sphere_area(n);
    // collected first so the sum runs in a fixed order
    (0..lambda.len())
        .into_par_iter()
        .map(|i| {
            let l = lambda.nodes[i];
            let kc = k_count(i);
            if l == 0.0 || kc == 0 {
                return 0.0;
            }
            let rule = w_rule(n, l, kc - 1, nodes_per_wave);
            let xs: Vec<f64> = rule.nodes.iter().map(|w| l.abs() * w * w / 2.0).collect();
            let jac: Vec<f64> = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(w, q)| omega * w.powi(2 * n as i32 - 1) * q)
                .collect();
            let mut sweep = LaguerreSweep::new(n as f64 - 1.0, xs);
            let mut vals = Vec::new();
            let mut s = 0.0;
            for k in 0..kc {
                sweep.values(&mut vals);
                let a = FanPoint { n, k, lambda: l };
                let inner: f64 = rule.nodes.iter().zip(&jac).zip(&vals).map(|((&w, &j), &v)| j * phi(i, &a, w, v)).sum();
                s += a.nu2_density() * inner;
                sweep.advance();
            }
            lambda.weights[i] * s
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_law_examples() {
        let p = HPoint::new(vec![1.0, 0.0], 0.0).unwrap();
        let q = HPoint::new(vec![0.0, 1.0], 0.0).unwrap();
        let pq = group_mul(&p, &q).unwrap();
        assert_eq!(pq.z, vec![1.0, 1.0]);
        assert!((pq.t + 0.5).abs() < 1e-15);
        let a = HPoint::new(vec![0.3, -1.2, 2.0, 0.5], 0.7).unwrap();
        assert_eq!(group_mul(&a, &HPoint::identity(2)).unwrap(), a);
        let e = group_mul(&a, &a.inverse()).unwrap();
        assert!(e.z.iter().all(|v| *v == 0.0) && e.t.abs() < 1e-15);
        assert!(group_mul(&a, &p).is_err());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(homogeneous_norm(&HPoint::identity(1)), 0.0);
        assert!((homogeneous_norm(&HPoint::new(vec![0.6, 0.8], 0.0).unwrap()) - 1.0).abs() < 1e-15);
        assert!((homogeneous_norm(&HPoint::new(vec![0.0, 0.0], 1.0).unwrap()) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn fan_point_quantities() {
        let a = FanPoint::new(2, 3, -0.5).unwrap();
        assert_eq!(a.ev(), 4.0);
        assert_eq!(a.abs_a(), 4.5);
        assert!(FanPoint::new(1, 0, 0.0).is_err());
        // binom(4,3)=4 → (2π)^{-5}·16·0.5⁴
        let want = (2.0 * PI).powi(-5) * 16.0 * 0.0625;
        assert!((a.nu2_density() - want).abs() < 1e-14 * want);
    }

    #[test]
    fn gaussian_on_h1() {
        let r = Rule::composite(0.0, 8.0, &[], 0.1, 12);
        let t = Rule::composite(-8.0, 8.0, &[], 0.1, 12);
        let v = integrate_hn_radial(1, &r, &t, |r, t| (-r * r - t * t).exp()).unwrap();
        assert!((v - PI * PI.sqrt()).abs() < 1e-12);
        assert_eq!(integrate_hn_radial(1, &r, &t, |_, _| 0.0).unwrap(), 0.0);
    }

    #[test]
    fn numeric_w_integral_of_laguerre_square() {
        // ∫|φ_k|² dw equals (2π/|λ|)^n binom(k+n-1,k)
        for n in 1..=3 {
            let lam = Rule { nodes: vec![0.7], weights: vec![1.0] };
            let kc = 25;
            let direct = integrate_fan_radial(n, &lam, |_| kc, 12, |_, a, _, v| if a.k == 17 { v * v } else { 0.0 });
            let a = FanPoint::new(n, 17, 0.7).unwrap();
            let want = a.nu2_density() * a.laguerre_l2();
            assert!((direct - want).abs() < 1e-10 * want, "n={n}: {direct} vs {want}");
        }
    }
}
