//! Empirical constants: both sides of the inequalities evaluated on test
//! functions.

use super::{calderon_s, ExponentPair, FOURIER_SEGMENT};
use crate::error::{Error, Result};
use crate::geometry::{integrate_fan_radial, integrate_hn_radial, FanPoint, GridConfig};
use crate::rearrange::{log_grid, rearrange_radial, FanAtoms, WeightKind, WeightSpec};
use crate::specfn::log_cnk;
use crate::transform::{RadialFunction, SpectralTable};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn fan_weight(u: &WeightSpec, a: &FanPoint, w: f64) -> f64 {
    u.value_fan(a, w)
}

/// (∫ (|f̃| m)^q dw dν₂)^{1/q} for a multiplier m(a, |w|); closed form in w
/// when q = 2 and m depends on a only.
pub(crate) fn fan_norm<M>(table: &SpectralTable, cfg: &GridConfig, q: f64, a_only: bool, m: M) -> Result<f64>
where
    M: Fn(&FanPoint, f64) -> f64 + Sync,
{
    if !q.is_finite() {
        return Err(Error::Config("fan-side norms need a finite exponent".into()));
    }
    if q == 2.0 && a_only {
        return Ok(table.weighted_l2(|a| m(a, 0.0).powi(2)).value.sqrt());
    }
    let kc = |i: usize| {
        if table.lambda.nodes[i].abs() < cfg.w_lambda_min {
            0
        } else {
            table.k_count(i).min(cfg.w_k_max)
        }
    };
    let v = integrate_fan_radial(table.n, &table.lambda, kc, cfg.w_nodes_per_wave, |i, a, w, phi| {
        let f = (table.coeff(i, a.k) * (log_cnk(a.n, a.k).exp() * phi)).norm();
        if f == 0.0 {
            0.0
        } else {
            (f * m(a, w)).powf(q)
        }
    });
    Ok(v.powf(1.0 / q))
}

fn space_norm<M: Fn(f64, f64) -> f64>(f: &RadialFunction, cfg: &GridConfig, p: f64, m: M) -> Result<f64> {
    let (r, t) = f.hn_rules(cfg);
    if !p.is_finite() {
        let mut s = 0.0f64;
        for &ri in &r.nodes {
            for &ti in &t.nodes {
                s = s.max((f.value(ri, ti) * m(ri, ti)).abs());
            }
        }
        return Ok(s);
    }
    Ok(integrate_hn_radial(f.n, &r, &t, |ri, ti| (f.value(ri, ti) * m(ri, ti)).abs().powf(p))?.powf(1.0 / p))
}

fn a_only(u: &WeightSpec) -> bool {
    matches!(u.kind, WeightKind::Constant { .. })
}

/// Best-constant estimate max ‖u f̃‖_q / ‖v f‖_p over a family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PittEmpirical {
    pub constant: f64,
    pub labels: Vec<String>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub ratios: Vec<f64>,
}

pub fn pitt_empirical(family: &[RadialFunction], u: &WeightSpec, v: &WeightSpec, pq: ExponentPair, cfg: &GridConfig) -> Result<PittEmpirical> {
    let mut out = PittEmpirical { constant: 0.0, labels: Vec::new(), lhs: Vec::new(), rhs: Vec::new(), ratios: Vec::new() };
    for f in family {
        if f.is_zero() {
            continue;
        }
        let table = SpectralTable::build(f, cfg)?;
        let lhs = fan_norm(&table, cfg, pq.q, a_only(u), |a, w| fan_weight(u, a, w))?;
        let rhs = space_norm(f, cfg, pq.p, |r, t| v.value_hn(r, t))?;
        if !(lhs.is_finite() && rhs.is_finite() && rhs > 0.0) {
            return Err(Error::NonFinite(format!("Pitt sides for {}: lhs={lhs}, rhs={rhs}", f.label())));
        }
        out.labels.push(f.label());
        out.lhs.push(lhs);
        out.rhs.push(rhs);
        out.ratios.push(lhs / rhs);
        out.constant = out.constant.max(lhs / rhs);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    /// ‖f‖₂²
    pub norm_sq: f64,
    /// 2 Re⟨−iλ f̃, (t f)~⟩
    pub identity_rhs: f64,
    pub identity_residual: f64,
    /// ‖λ u^{-1} f̃‖_{q'}
    pub fan_factor: f64,
    /// ‖t v f‖_p
    pub space_factor: f64,
    /// The Pitt constant; the identity contributes a further factor 2.
    pub constant: f64,
    /// 2C ‖λ u^{-1} f̃‖_{q'} ‖t v f‖_p − ‖f‖₂²
    pub margin: f64,
}

/// ‖f‖₂² ≤ 2C ‖λ u^{-1} f̃‖_{q'} ‖t v f‖_p with C the Pitt constant for
/// (u, v), after checking the integration-by-parts identity behind it. For
/// u = v = 1, p = q = 2 and f Gaussian in t this is an equality.
pub fn uncertainty_check(f: &RadialFunction, u: &WeightSpec, v: &WeightSpec, pq: ExponentPair, constant: f64, cfg: &GridConfig) -> Result<UncertaintyReport> {
    let norm_sq = f.lp_power(2.0, cfg)?;
    if norm_sq == 0.0 {
        return Ok(UncertaintyReport { norm_sq, identity_rhs: 0.0, identity_residual: 0.0, fan_factor: 0.0, space_factor: 0.0, constant, margin: 0.0 });
    }
    let base = SpectralTable::build(f, cfg)?;
    let tf = SpectralTable::build_matching(&f.times_t()?, cfg, &base)?;
    let inner = base.weighted_inner(&tf, |a| Complex64::new(0.0, -a.lambda))?;
    let identity_rhs = 2.0 * inner.re;
    let fan_factor = fan_norm(&base, cfg, pq.q_conj(), a_only(u), |a, w| {
        let uw = fan_weight(u, a, w);
        if uw == 0.0 {
            f64::INFINITY
        } else {
            a.lambda.abs() / uw
        }
    })?;
    let space_factor = space_norm(f, cfg, pq.p, |r, t| t * v.value_hn(r, t))?;
    let margin = 2.0 * constant * fan_factor * space_factor - norm_sq;
    Ok(UncertaintyReport { norm_sq, identity_rhs, identity_residual: (identity_rhs - norm_sq).abs() / norm_sq, fan_factor, space_factor, constant, margin })
}

/// (f̃)*(t) / S f*(t) on a t-grid, S the Calderón operator of the segment
/// (1, 0)–(1/2, 1/2).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointWeakType {
    pub constant: f64,
    pub t: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Share of ∫|f̃|² on the sampled rays.
    pub captured: f64,
}

pub fn joint_weak_type_check(f: &RadialFunction, cfg: &GridConfig) -> Result<JointWeakType> {
    if f.is_zero() {
        return Ok(JointWeakType { constant: 0.0, t: Vec::new(), ratios: Vec::new(), captured: 1.0 });
    }
    let table = SpectralTable::build(f, cfg)?;
    let atoms = FanAtoms::from_table(&table, cfg, |_, _| 1.0);
    let fstar = rearrange_radial(f, 400)?;
    let total = *atoms.cumulative.last().ok_or_else(|| Error::NonFinite("no fan atoms sampled".into()))?;
    // from the mass of the largest few atoms to most of the sampled support
    let lo = atoms.cumulative[atoms.cumulative.len().min(64) - 1];
    let ts = log_grid(lo, 0.9 * total, 80);
    let mut ratios = Vec::with_capacity(ts.len());
    for &t in &ts {
        let s = calderon_s(FOURIER_SEGMENT, &fstar.table, t)?;
        ratios.push(if s > 0.0 { atoms.rearrangement(t) / s } else { 0.0 });
    }
    let constant = ratios.iter().copied().fold(0.0, f64::max);
    Ok(JointWeakType { constant, t: ts, ratios, captured: atoms.captured })
}
