//! Sufficient and necessary conditions for weighted Fourier inequalities, and
//! their empirical counterparts.

mod empirical;
mod necessary;
mod power;

pub(crate) use empirical::fan_norm;
pub use empirical::{joint_weak_type_check, pitt_empirical, uncertainty_check, JointWeakType, PittEmpirical, UncertaintyReport};
pub use necessary::{beta_k, b_k, necessary_radial_sup, NecessaryConditionReport};
pub use power::{homogeneity_necessary, power_weight_necessary, power_weight_sufficient, NecessaryCase, PowerVerdict};

use crate::error::{Error, Result};
use crate::rearrange::{log_grid, Tabulated};
use serde::{Deserialize, Serialize};

/// Exponents p, q in [1, ∞] with their conjugates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub p: f64,
    pub q: f64,
}

/// Hölder conjugate; 1 and ∞ swap.
pub fn conjugate(x: f64) -> f64 {
    if x == 1.0 {
        f64::INFINITY
    } else if x.is_infinite() {
        1.0
    } else {
        x / (x - 1.0)
    }
}

impl ExponentPair {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p >= 1.0) || !(q >= 1.0) {
            return Err(Error::Domain(format!("exponents must lie in [1, ∞], got p={p}, q={q}")));
        }
        Ok(Self { p, q })
    }

    pub fn p_conj(&self) -> f64 {
        conjugate(self.p)
    }

    pub fn q_conj(&self) -> f64 {
        conjugate(self.q)
    }

    /// 1/p' and 1/q as reciprocals that stay finite at the endpoints.
    pub fn inv_p_conj(&self) -> f64 {
        1.0 - 1.0 / self.p
    }

    pub fn inv_q(&self) -> f64 {
        1.0 / self.q
    }

    pub fn require_ordered(&self) -> Result<()> {
        if self.p > self.q {
            return Err(Error::Domain(format!("sufficiency needs p <= q, got p={}, q={}", self.p, self.q)));
        }
        Ok(())
    }

    pub fn require_open(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite() && self.q > 1.0 && self.q.is_finite()) {
            return Err(Error::Domain(format!("necessity needs 1 < p, q < ∞, got p={}, q={}", self.p, self.q)));
        }
        Ok(())
    }
}

/// The Calderón operator of the segment from (1/p₁, 1/q₁) to (1/p₂, 1/q₂)
/// applied to a tabulated non-increasing f at t.
pub fn calderon_s(endpoints: [(f64, f64); 2], fstar: &Tabulated, t: f64) -> Result<f64> {
    let [(a1, b1), (a2, b2)] = endpoints;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("Calderón operator needs t > 0, got {t}")));
    }
    if !(a1 > a2) || b1 == b2 {
        return Err(Error::Domain("degenerate Calderón segment: need p₁ < p₂ and q₁ ≠ q₂".into()));
    }
    let m = (b1 - b2) / (a1 - a2);
    let tm = t.powf(m);
    let first = t.powf(-b1) * fstar.integral(1.0, a1 - 1.0, 0.0, tm);
    let second = t.powf(-b2) * fstar.integral(1.0, a2 - 1.0, tm, f64::INFINITY);
    Ok(first + second)
}

/// Segment slope m = (1/q₁ − 1/q₂)/(1/p₁ − 1/p₂).
pub fn calderon_slope(endpoints: [(f64, f64); 2]) -> f64 {
    let [(a1, b1), (a2, b2)] = endpoints;
    (b1 - b2) / (a1 - a2)
}

/// The segment from (1, 0) to (1/2, 1/2): strong (1, ∞) and weak (2, 2).
pub const FOURIER_SEGMENT: [(f64, f64); 2] = [(1.0, 0.0), (0.5, 0.5)];

/// Local log-log slopes beyond which a supremum over s is declared infinite.
pub const SLOPE_TOL: f64 = 1e-3;

/// A supremum over a log-spaced s-grid, with the power-law trend at both ends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    /// Largest value on the grid.
    pub sup: f64,
    pub argmax: f64,
    /// No divergent value and no growing trend at either end.
    pub finite: bool,
    /// d ln g / d ln s fitted over the lowest and highest tenth of the grid.
    pub low_slope: f64,
    pub high_slope: f64,
    pub s: Vec<f64>,
    pub values: Vec<f64>,
}

impl SupEstimate {
    /// The supremum, +∞ when the trend says it is unbounded.
    pub fn value(&self) -> f64 {
        if self.finite {
            self.sup
        } else {
            f64::INFINITY
        }
    }
}

fn end_slope(s: &[f64], v: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = s.iter().zip(v).filter(|(_, y)| **y > 0.0 && y.is_finite()).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let m = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / m, a.1 + p.1 / m));
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    sxy / sxx
}

/// sup_s g(s) on `count` log-spaced nodes of [lo, hi].
pub fn sup_on_grid<G: Fn(f64) -> f64 + Sync>(g: G, lo: f64, hi: f64, count: usize) -> SupEstimate {
    use rayon::prelude::*;
    let s = log_grid(lo, hi, count);
    let values: Vec<f64> = s.par_iter().map(|&x| g(x)).collect();
    let (mut sup, mut argmax) = (0.0f64, s[0]);
    let mut finite = true;
    for (&x, &v) in s.iter().zip(&values) {
        if !(v.is_finite()) {
            finite = false;
        }
        if v > sup || v.is_nan() {
            sup = if v.is_nan() { f64::INFINITY } else { v };
            argmax = x;
        }
    }
    let tenth = (count / 10).max(2);
    let low_slope = end_slope(&s[..tenth], &values[..tenth]);
    let high_slope = end_slope(&s[count - tenth..], &values[count - tenth..]);
    if low_slope < -SLOPE_TOL || high_slope > SLOPE_TOL {
        finite = false;
    }
    SupEstimate { sup, argmax, finite, low_slope, high_slope, s, values }
}

/// (∫_a^b v^e t^β)^{1/e}, or the supremum of v on [a, b] when e = ∞.
fn mean(tab: &Tabulated, e: f64, beta: f64, a: f64, b: f64) -> f64 {
    if e.is_infinite() {
        let mut m = tab.value(a).max(if b.is_finite() { tab.value(b) } else { 0.0 });
        for (&t, &v) in tab.t.iter().zip(&tab.v) {
            if t > a && t < b {
                m = m.max(v);
            }
        }
        return m;
    }
    tab.integral(e, beta, a, b).powf(1.0 / e)
}

/// Which of the two weighted Hardy conditions to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HardyVariant {
    /// sup_s (∫_s^∞ u₁^q)^{1/q} (∫_0^s v₁^{-p'})^{1/p'}, for ∫_0^t.
    A,
    /// sup_s (∫_0^s u₁^q)^{1/q} (∫_s^∞ v₁^{-p'})^{1/p'}, for ∫_t^∞.
    B,
}

/// Default s-grid for suprema.
pub const S_LO: f64 = 1e-4;
pub const S_HI: f64 = 1e4;
pub const S_COUNT: usize = 200;

/// `v1_inv` is the table of 1/v₁.
pub fn hardy_condition(u1: &Tabulated, v1_inv: &Tabulated, pq: ExponentPair, variant: HardyVariant) -> SupEstimate {
    let pp = pq.p_conj();
    let q = pq.q;
    sup_on_grid(
        |s| {
            let (uf, vf) = match variant {
                HardyVariant::A => (mean(u1, q, 0.0, s, f64::INFINITY), mean(v1_inv, pp, 0.0, 0.0, s)),
                HardyVariant::B => (mean(u1, q, 0.0, 0.0, s), mean(v1_inv, pp, 0.0, s, f64::INFINITY)),
            };
            product(uf, vf)
        },
        S_LO,
        S_HI,
        S_COUNT,
    )
}

/// 0 · ∞ = 0 here: an empty factor makes the whole product vanish.
fn product(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// sup_s (∫_0^{1/s} U^q)^{1/q} (∫_0^s V^{-p'})^{1/p'}, with U = u* and
/// `v_inv` = V^{-1} = (1/v)*.
pub fn pitt_sufficient_sup(u: &Tabulated, v_inv: &Tabulated, pq: ExponentPair) -> Result<SupEstimate> {
    pq.require_ordered()?;
    let pp = pq.p_conj();
    Ok(sup_on_grid(|s| product(mean(u, pq.q, 0.0, 0.0, 1.0 / s), mean(v_inv, pp, 0.0, 0.0, s)), S_LO, S_HI, S_COUNT))
}

/// The second condition of the p = q = 2 case:
/// sup_s (∫_{1/s}^∞ U² t^{-1})^{1/2} (∫_s^∞ V^{-2} t^{-1})^{1/2}.
pub fn pitt_22_secondary_condition(u: &Tabulated, v_inv: &Tabulated) -> SupEstimate {
    sup_on_grid(|s| product(mean(u, 2.0, -1.0, 1.0 / s, f64::INFINITY), mean(v_inv, 2.0, -1.0, s, f64::INFINITY)), S_LO, S_HI, S_COUNT)
}
