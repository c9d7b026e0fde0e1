//! Necessary conditions for radial weights, from test functions supported
//! where the Laguerre functions stay above a fixed positive bound.

use super::{sup_on_grid, ExponentPair, SupEstimate};
use crate::error::{Error, Result};
use crate::geometry::{sphere_area, FanPoint};
use crate::quad::tanh_sinh;
use crate::rearrange::{Domain, WeightSpec};
use crate::specfn::{first_zero_lower_bound, laguerre_poly, LaguerreIndex};
use serde::{Deserialize, Serialize};

/// Radius in x = |λ||z|²/2 inside which L^{n-1}_k is positive and
/// decreasing; the k = 0 condition uses 1.
pub fn beta_k(k: usize, n: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        first_zero_lower_bound(k, n)
    }
}

/// B_k = L^{n-1}_k(β_k) e^{-β_k/2}.
pub fn b_k(k: usize, n: usize) -> Result<f64> {
    let b = beta_k(k, n);
    Ok(laguerre_poly(LaguerreIndex::new(k, n as f64 - 1.0)?, b)? * (-b / 2.0).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NecessaryConditionReport {
    pub k: usize,
    pub beta_k: f64,
    pub b_k: f64,
    /// M_{k,n} = k + n/2.
    pub m_kn: f64,
    pub sup: SupEstimate,
    pub verdict: bool,
}

const QUAD_TOL: f64 = 1e-10;

/// sup_s (∫_{|λ|<1/s} ∫_{|w|²<2β s} u^q |λ|^{2n} dw dλ)^{1/q}
///       (∫_{|z|²<2β s} ∫_{|t|<s} v^{-p'} dz dt)^{1/p'}
/// on `count` log-spaced s in [lo, hi].
pub fn necessary_radial_sup(k: usize, u: &WeightSpec, v: &WeightSpec, pq: ExponentPair, s_grid: (f64, f64, usize)) -> Result<NecessaryConditionReport> {
    pq.require_open()?;
    if u.domain() != Domain::Fan || v.domain() != Domain::Hn {
        return Err(Error::Domain("necessary condition needs u on the fan and v on H^n".into()));
    }
    if u.n != v.n {
        return Err(Error::Dimension(u.n, v.n));
    }
    let n = u.n;
    let beta = beta_k(k, n);
    let omega = sphere_area(n);
    let q = pq.q;
    let pp = pq.p_conj();
    let two_n = 2 * n as i32;
    let fan = |s: f64| {
        let w_max = (2.0 * beta * s).sqrt();
        let inner = |l: f64| {
            let a = FanPoint { n, k, lambda: l };
            omega * tanh_sinh(|w| w.powi(two_n - 1) * u.value_fan(&a, w).powf(q), 0.0, w_max, QUAD_TOL)
        };
        2.0 * tanh_sinh(|l| l.powi(two_n) * inner(l), 0.0, 1.0 / s, QUAD_TOL)
    };
    let space = |s: f64| {
        let r_max = (2.0 * beta * s).sqrt();
        let inner = |r: f64| 2.0 * tanh_sinh(|t| v.value_hn(r, t).powf(-pp), 0.0, s, QUAD_TOL);
        omega * tanh_sinh(|r| r.powi(two_n - 1) * inner(r), 0.0, r_max, QUAD_TOL)
    };
    let sup = sup_on_grid(
        |s| {
            let a = fan(s);
            let b = space(s);
            if a == 0.0 || b == 0.0 {
                0.0
            } else {
                a.powf(1.0 / q) * b.powf(1.0 / pp)
            }
        },
        s_grid.0,
        s_grid.1,
        s_grid.2,
    );
    Ok(NecessaryConditionReport { k, beta_k: beta, b_k: b_k(k, n)?, m_kn: k as f64 + n as f64 / 2.0, verdict: sup.finite, sup })
}
