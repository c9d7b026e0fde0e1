//! Strichartz transform of radial functions through Laguerre coefficients.
//!
//! For radial f the transform on the ray k is
//! f̃(a, w) = c_{n,k} R_k(λ) φ_{k,λ}(w) with
//! R_k(λ) = c_{n,k} ∫ f^{-λ}(z) φ_{k,λ}(z) dz. Both factors of c_{n,k} are
//! kept: with them the fan side of Plancherel equals
//! (2π)^{-n-1} ∫ |λ|^n Σ_k |R_k|²/c_{n,k} dλ, which is exactly ∫|f|².

mod function;
mod table;

pub use function::{Profile, RadialFunction, SampledGrid};
pub use table::{coefficients_at, radial_rule, CoefficientRow, SpectralTable};

use crate::error::{Error, Result};
use crate::geometry::{integrate_cn_radial, integrate_fan_radial, w_rule, FanPoint, GridConfig, HPoint};
use crate::quad::Rule;
use crate::report::{Check, VerificationReport};
use crate::specfn::{bessel_j_ratio, laguerre_fn, log_cnk, log_gamma};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// R_k(λ) for a single (k, λ).
pub fn laguerre_coeff(f: &RadialFunction, k: usize, lambda: f64, cfg: &GridConfig) -> Result<Complex64> {
    let rule = radial_rule(f, cfg);
    let row = coefficients_at(f, lambda, cfg, &rule, Some(k + 1))?;
    Ok(row.coeffs[k])
}

/// f̃(a, w) for |w| = `w_radius`.
pub fn strichartz_transform(f: &RadialFunction, a: &FanPoint, w_radius: f64, cfg: &GridConfig) -> Result<Complex64> {
    if a.n != f.n {
        return Err(Error::Dimension(f.n, a.n));
    }
    let r = laguerre_coeff(f, a.k, a.lambda, cfg)?;
    let phi = laguerre_fn(a.k, a.n, a.lambda, w_radius)?;
    Ok(r * (log_cnk(a.n, a.k).exp() * phi))
}

/// J_{n-1}(x)/x^{n-1} at x = √τ·ρ.
fn bessel_profile(n: usize, tau: f64, rho: f64) -> f64 {
    bessel_j_ratio((n - 1) as f64, tau.sqrt() * rho)
}

/// f̃(0, τ, w) on the limiting ray.
///
/// For radial f the spherical mean of the Bessel kernel about w factorises,
/// leaving ((n-1)! 2^{n-1})² (∫ f⁰ ψ_τ dz) ψ_τ(w) with ψ_τ(x) = J_{n-1}(√τ x)/(√τ x)^{n-1}.
pub fn strichartz_limit_ray(f: &RadialFunction, tau: f64, w_radius: f64, cfg: &GridConfig) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!("tau must be nonnegative, got {tau}")));
    }
    let n = f.n;
    let rule = radial_rule(f, cfg);
    let scale = (log_gamma(n as f64)? + (n as f64 - 1.0) * std::f64::consts::LN_2).exp();
    let integral = integrate_cn_radial(n, &rule, |r| f.central_fourier(0.0, r).re * bessel_profile(n, tau, r));
    Ok(scale * scale * integral * bessel_profile(n, tau, w_radius))
}

fn rel(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

fn grid_meta(table: &SpectralTable) -> serde_json::Value {
    serde_json::json!({
        "config": table.config,
        "lambda_nodes": table.lambda.len(),
        "lambda_max": table.lambda.nodes.last().copied().unwrap_or(0.0),
        "k_used_max": table.max_k(),
        "k_capped": table.any_capped(),
    })
}

/// Space and fan sides of Plancherel.
pub fn plancherel_check(f: &RadialFunction, cfg: &GridConfig, tol: f64) -> Result<VerificationReport> {
    let lhs = f.lp_power(2.0, cfg)?;
    let (rhs, tail, meta) = if f.is_zero() {
        (0.0, 0.0, serde_json::Value::Null)
    } else {
        let table = SpectralTable::build(f, cfg)?;
        let fi = table.weighted_l2(|_| 1.0);
        (fi.value, fi.tail, grid_meta(&table))
    };
    let mut rep = VerificationReport::new("plancherel").sides(lhs, rhs);
    let err = rel(lhs, rhs);
    rep.margin = Some(-err);
    rep.check(Check::at_most("relative_error", err, tol));
    rep.record("function", f.label());
    rep.record("k_tail", tail);
    if tail > 1e-6 {
        rep.note(format!("k-truncation tail {tail:.2e} exceeds 1e-6 of the partial sum"));
    }
    rep.grid = meta;
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InversionResult {
    pub points: Vec<HPoint>,
    pub exact: Vec<f64>,
    pub reconstructed: Vec<f64>,
    pub max_abs_error: f64,
}

/// f(z, t) = (2π)^{-n-1} ∫ e^{iλt} |λ|^n Σ_k R_k(λ) φ_{k,λ}(z) dλ from a table.
pub fn reconstruct(table: &SpectralTable, r: f64, t: f64) -> f64 {
    let n = table.n;
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, (&l, &wl)) in table.lambda.nodes.iter().zip(&table.lambda.weights).enumerate() {
        if l == 0.0 {
            continue;
        }
        let x = l.abs() * r * r / 2.0;
        let mut sweep = crate::specfn::LaguerreSweep::new(n as f64 - 1.0, vec![x]);
        let mut v = Vec::new();
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..table.k_count(i) {
            sweep.values(&mut v);
            s += table.coeff(i, k) * v[0];
            sweep.advance();
        }
        acc += s * Complex64::from_polar(wl * l.abs().powi(n as i32), l * t);
    }
    acc.re * (2.0 * PI).powi(-(n as i32) - 1)
}

pub fn inversion_check(f: &RadialFunction, points: &[HPoint], cfg: &GridConfig) -> Result<InversionResult> {
    for p in points {
        if p.dim() != f.n {
            return Err(Error::Dimension(f.n, p.dim()));
        }
    }
    let exact: Vec<f64> = points.iter().map(|p| f.value(p.z_norm(), p.t)).collect();
    let reconstructed: Vec<f64> = if f.is_zero() {
        vec![0.0; points.len()]
    } else {
        let table = SpectralTable::build(f, cfg)?;
        use rayon::prelude::*;
        points.par_iter().map(|p| reconstruct(&table, p.z_norm(), p.t)).collect()
    };
    let max_abs_error = exact.iter().zip(&reconstructed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(InversionResult { points: points.to_vec(), exact, reconstructed, max_abs_error })
}

/// Lattice comparison of R_k(∂_t f) against ±iλ R_k(f).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeCheck {
    /// max |R(∂_t f) − iλ R(f)| / max |R(∂_t f)|
    pub plus_i_lambda: f64,
    /// the same with −iλ
    pub minus_i_lambda: f64,
    /// R(∂_t f) is purely imaginary where R(f) is real, up to this size.
    pub parity_residual: f64,
}

pub fn derivative_multiplier_check(f: &RadialFunction, cfg: &GridConfig) -> Result<DerivativeCheck> {
    let df = f.t_derivative()?;
    let base = SpectralTable::build(f, cfg)?;
    let dt = SpectralTable::build_matching(&df, cfg, &base)?;
    let (mut plus, mut minus, mut scale, mut parity) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (i, &l) in base.lambda.nodes.iter().enumerate() {
        for k in 0..base.k_count(i) {
            let r = base.coeff(i, k);
            let d = dt.coeff(i, k);
            let il = Complex64::new(0.0, l);
            plus = plus.max((d - il * r).norm());
            minus = minus.max((d + il * r).norm());
            scale = scale.max(d.norm());
            if r.im.abs() <= 1e-12 * r.norm().max(1e-300) {
                parity = parity.max(d.re.abs());
            }
        }
    }
    if scale == 0.0 {
        return Ok(DerivativeCheck { plus_i_lambda: 0.0, minus_i_lambda: 0.0, parity_residual: 0.0 });
    }
    Ok(DerivativeCheck { plus_i_lambda: plus / scale, minus_i_lambda: minus / scale, parity_residual: parity / scale })
}

/// Compares f̃ for δ_r f at (λ, k, w) with r^{-Q} f̃(λ/r², k, r w).
///
/// Coefficients of f are recomputed at the rescaled λ independently of the
/// table for δ_r f; the result is the largest difference relative to the
/// largest value on the lattice.
pub fn dilation_covariance_check(f: &RadialFunction, r: f64, cfg: &GridConfig) -> Result<f64> {
    let g = f.dilate(r)?;
    let n = f.n;
    let q = (2 * n + 2) as f64;
    let table = SpectralTable::build(&g, cfg)?;
    let rr = radial_rule(f, cfg);
    let ws = [0.0, 0.4, 1.1];
    let stride = (table.lambda.len() / 24).max(1);
    let idx: Vec<usize> = (0..table.lambda.len()).step_by(stride).collect();
    use rayon::prelude::*;
    let parts: Result<Vec<(f64, f64)>> = idx
        .par_iter()
        .map(|&i| {
            let l = table.lambda.nodes[i];
            let kc = table.k_count(i).min(64);
            let other = coefficients_at(f, l / (r * r), cfg, &rr, Some(kc))?;
            let (mut diff, mut scale) = (0.0f64, 0.0f64);
            for k in 0..kc {
                let c = log_cnk(n, k).exp();
                for &w in &ws {
                    let lhs = table.coeff(i, k) * (c * laguerre_fn(k, n, l, w)?);
                    let rhs = other.coeffs[k] * (r.powf(-q) * c * laguerre_fn(k, n, l / (r * r), r * w)?);
                    diff = diff.max((lhs - rhs).norm());
                    scale = scale.max(lhs.norm());
                }
            }
            Ok((diff, scale))
        })
        .collect();
    let parts = parts?;
    let diff = parts.iter().map(|p| p.0).fold(0.0, f64::max);
    let scale = parts.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(if scale == 0.0 { 0.0 } else { diff / scale })
}

/// sup |f̃(a, w)| / ‖f‖₁ over the table lattice and a few w radii.
pub fn normalized_sup_ratio(f: &RadialFunction, cfg: &GridConfig) -> Result<f64> {
    let l1 = f.lp_power(1.0, cfg)?;
    if l1 == 0.0 {
        return Ok(0.0);
    }
    let table = SpectralTable::build(f, cfg)?;
    let ws = [0.0, 0.25, 0.5, 1.0, 2.0];
    let mut best = 0.0f64;
    for i in 0..table.lambda.len() {
        for k in 0..table.k_count(i) {
            // |φ_k| peaks at the origin, so w = 0 dominates; the others are cheap confirmation
            for &w in if k < 32 { &ws[..] } else { &ws[..1] } {
                best = best.max(table.transform_at(i, k, w).norm());
            }
        }
    }
    Ok(best / l1)
}

/// (∫|f̃|^{p'} dw dν₂)^{1/p'} / ‖f‖_p for 1 < p < 2, with the w-integral done
/// numerically on rays k < `w_k_max` and |λ| ≥ `w_lambda_min`. The returned
/// `captured` is the share of ∫|f̃|² that the truncated set carries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HausdorffYoung {
    pub p: f64,
    pub ratio: f64,
    pub captured: f64,
}

pub fn hausdorff_young_ratio(f: &RadialFunction, p: f64, cfg: &GridConfig) -> Result<HausdorffYoung> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::Domain(format!("Hausdorff-Young needs 1 <= p <= 2, got {p}")));
    }
    if p == 1.0 {
        return Ok(HausdorffYoung { p, ratio: normalized_sup_ratio(f, cfg)?, captured: 1.0 });
    }
    let table = SpectralTable::build(f, cfg)?;
    let fp = f.lp_norm(p, cfg)?;
    if p == 2.0 {
        let v = table.weighted_l2(|_| 1.0).value;
        return Ok(HausdorffYoung { p, ratio: v.sqrt() / fp, captured: 1.0 });
    }
    let pp = p / (p - 1.0);
    let kc = |i: usize| {
        if table.lambda.nodes[i].abs() < cfg.w_lambda_min {
            0
        } else {
            table.k_count(i).min(cfg.w_k_max)
        }
    };
    let val = integrate_fan_radial(f.n, &table.lambda, kc, cfg.w_nodes_per_wave, |i, a, _w, phi| {
        let c = log_cnk(a.n, a.k).exp();
        (table.coeff(i, a.k) * (c * phi)).norm().powf(pp)
    });
    let full = table.weighted_l2(|_| 1.0).value;
    let part = crate::geometry::integrate_fan(f.n, &table.lambda, kc, |_| 0.0, |i, a| {
        let c = log_cnk(a.n, a.k).exp();
        c * c * table.coeff(i, a.k).norm_sqr() * a.laguerre_l2()
    })
    .value;
    Ok(HausdorffYoung { p, ratio: val.powf(1.0 / pp) / fp, captured: if full > 0.0 { part / full } else { 1.0 } })
}

/// Numerical ∫|f̃(a, ·)|² dw against c²_{n,k} (2π)^n |λ|^{-n} ‖P_k‖², where
/// ‖P_k‖² = |R_k|²/c_{n,k} is the Hilbert–Schmidt mass the Laguerre
/// coefficient carries. Largest relative difference over the sampled (λ, k).
pub fn relation_formula_check(table: &SpectralTable, samples: &[(usize, usize)], nodes_per_wave: usize) -> Result<f64> {
    let n = table.n;
    let mut worst = 0.0f64;
    for &(i, k) in samples {
        let l = table.lambda.nodes[i];
        if k >= table.k_count(i) {
            continue;
        }
        let rule: Rule = w_rule(n, l, k, nodes_per_wave);
        let c = log_cnk(n, k).exp();
        let rk = table.coeff(i, k);
        let numeric = integrate_cn_radial(n, &rule, |w| {
            let phi = laguerre_fn(k, n, l, w).unwrap_or(0.0);
            (rk * (c * phi)).norm_sqr()
        });
        let hs = rk.norm_sqr() / c;
        let closed = c * c * (2.0 * PI).powi(n as i32) * l.abs().powi(-(n as i32)) * hs;
        if closed > 0.0 {
            worst = worst.max(rel(numeric, closed));
        }
    }
    Ok(worst)
}
