//! Spectral multipliers of L^s and of the conformal operators L_{±s}, the
//! closed-form constants attached to them, and Hardy/Pitt checks through
//! the fan representation of the quadratic forms.

use crate::error::{Error, Result};
use crate::geometry::{integrate_hn_radial, norm_rt, FanIntegral, FanPoint, GridConfig};
use crate::quad::exp_sinh;
use crate::report::{Check, VerificationReport};
use crate::specfn::{gamma, log_gamma};
use crate::transform::{RadialFunction, SpectralTable};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "s", rename_all = "snake_case")]
pub enum Multiplier {
    /// L^s: ((2k+n)|λ|)^s
    FractionalL(f64),
    /// L_s: (2|λ|)^s Γ((2k+n+1+s)/2) / Γ((2k+n+1−s)/2)
    ConformalPlus(f64),
    /// L_{−s}: the reciprocal of L_s
    ConformalMinus(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierKind {
    pub n: usize,
    pub variant: Multiplier,
}

impl MultiplierKind {
    pub fn new(n: usize, variant: Multiplier) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dimension n must be at least 1".into()));
        }
        let top = n as f64 + 1.0;
        match variant {
            Multiplier::FractionalL(s) | Multiplier::ConformalPlus(s) => {
                if !(s >= 0.0 && s < top) {
                    return Err(Error::Domain(format!("need 0 <= s < n+1 = {top}, got {s}")));
                }
            }
            Multiplier::ConformalMinus(s) => {
                // smallest Gamma argument is (n+1-s)/2 at k = 0
                if !(s.is_finite() && top - s > 0.0 && top + s > 0.0) {
                    return Err(Error::Pole((top - s.abs()) / 2.0));
                }
            }
        }
        Ok(Self { n, variant })
    }

    pub fn s(&self) -> f64 {
        match self.variant {
            Multiplier::FractionalL(s) | Multiplier::ConformalPlus(s) | Multiplier::ConformalMinus(s) => s,
        }
    }
}

/// ln Γ((2k+n+1+s)/2) − ln Γ((2k+n+1−s)/2).
fn log_conformal_ratio(n: usize, k: usize, s: f64) -> Result<f64> {
    let m = (2 * k + n + 1) as f64;
    let (a, b) = ((m + s) / 2.0, (m - s) / 2.0);
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::Pole(a.min(b)));
    }
    Ok(log_gamma(a)? - log_gamma(b)?)
}

pub fn multiplier_value(kind: &MultiplierKind, k: usize, lambda: f64) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::Domain("multipliers need a finite nonzero lambda".into()));
    }
    let l = lambda.abs();
    let n = kind.n;
    match kind.variant {
        Multiplier::FractionalL(s) => Ok((s * ((2 * k + n) as f64 * l).ln()).exp()),
        Multiplier::ConformalPlus(s) => Ok((s * (2.0 * l).ln() + log_conformal_ratio(n, k, s)?).exp()),
        Multiplier::ConformalMinus(s) => Ok((-s * (2.0 * l).ln() - log_conformal_ratio(n, k, s)?).exp()),
    }
}

fn multiplier_at(kind: &MultiplierKind, a: &FanPoint) -> f64 {
    multiplier_value(kind, a.k, a.lambda).unwrap_or(f64::NAN)
}

/// ∫ m(a) |f̃(a, w)|² dw dν₂(a) on a table already built.
pub fn quadratic_form_on(table: &SpectralTable, kind: &MultiplierKind) -> Result<FanIntegral> {
    if table.n != kind.n {
        return Err(Error::Dimension(kind.n, table.n));
    }
    let fi = table.weighted_l2(|a| multiplier_at(kind, a));
    if !fi.value.is_finite() {
        return Err(Error::NonFinite(format!("quadratic form of {:?}", kind.variant)));
    }
    Ok(fi)
}

/// ⟨T f, f⟩ for the operator with multiplier `kind`.
pub fn quadratic_form(f: &RadialFunction, kind: &MultiplierKind, cfg: &GridConfig) -> Result<FanIntegral> {
    if f.is_zero() {
        return Ok(FanIntegral::default());
    }
    quadratic_form_on(&SpectralTable::build(f, cfg)?, kind)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsBundle {
    pub n: usize,
    pub s: f64,
    /// d_{n,s}: constant in the pointwise bound of the Macdonald kernel.
    pub d_ns: f64,
    /// c(n,s): normalises ρ^{2s} ((ρ²+|z|²)² + 16t²)^{−(n+1+s)/2}.
    pub c_ns: f64,
    /// b(n,s): |·|^{−Q+2s} * |z|^{−(n+1+s)} = b(n,s) |z|^{−(n+1−s)}.
    pub b_ns: f64,
    /// C₂(n,s) = 4^{2s} (Γ((n+1+s)/2)/Γ((n+1−s)/2))²
    pub c2_ns: f64,
    pub us_norm: f64,
    pub sharp_lower: f64,
    pub sharp_upper: f64,
}

impl ConstantsBundle {
    /// 4^s (n−1+s)/(n−1−s)
    pub fn bc_closed_form(&self) -> f64 {
        let n = self.n as f64;
        4f64.powf(self.s) * (n - 1.0 + self.s) / (n - 1.0 - self.s)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("constants serialise");
        v["bc_product"] = (self.b_ns * self.c_ns).into();
        v["bc_closed_form"] = self.bc_closed_form().into();
        v
    }
}

fn named<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Domain(format!("{name}: {e}")))
}

fn lg(x: f64) -> Result<f64> {
    log_gamma(x)
}

/// ln of (Γ((n+1+s)/2) / Γ((n+1−s)/2))².
fn log_gamma_sq_ratio(n: usize, s: f64) -> Result<f64> {
    Ok(2.0 * log_conformal_ratio(n, 0, s)?)
}

pub fn d_ns(n: usize, s: f64) -> Result<f64> {
    let nf = n as f64;
    named(
        "d_ns",
        (|| Ok(((2.0 * nf - 2.0) * LN_2 + lg((nf - 1.0 - s) / 2.0)? + lg(nf)? + lg(nf - s)? - lg(s)? - lg(0.5)?).exp()))(),
    )
}

pub fn c_ns(n: usize, s: f64) -> Result<f64> {
    let nf = n as f64;
    named(
        "c_ns",
        (|| Ok((4f64.ln() - (nf + 0.5) * PI.ln() + lg(nf + s)? + lg((nf + 1.0 + s) / 2.0)? - lg(s)? - lg((nf + s) / 2.0)?).exp()))(),
    )
}

pub fn b_ns(n: usize, s: f64) -> Result<f64> {
    let nf = n as f64;
    named(
        "b_ns",
        (|| {
            Ok(((nf + 0.5) * PI.ln() - 4f64.ln() + lg((nf - s) / 2.0)? - lg(nf - s)? + lg((nf - 1.0 - s) / 2.0)? - lg((nf - 1.0 + s) / 2.0)? + lg(s)?
                - lg((nf + 1.0 + s) / 2.0)?)
                .exp())
        })(),
    )
}

pub fn c2_ns(n: usize, s: f64) -> Result<f64> {
    named("c2_ns", (|| Ok((2.0 * s * 4f64.ln() + log_gamma_sq_ratio(n, s)?).exp()))())
}

/// sup_k ((2k+n)/2)^{−s} Γ((2k+n)/2 + (1+s)/2) / Γ((2k+n)/2 + (1−s)/2).
///
/// The terms tend to 1 as k → ∞, so the sup is the larger of the limit and
/// the largest term seen before the sequence settles within 1e-15 of 1.
pub fn us_norm(n: usize, s: f64) -> Result<f64> {
    if !(s >= 0.0 && s < n as f64 + 1.0) {
        return Err(Error::Domain(format!("us_norm: need 0 <= s < n+1, got {s}")));
    }
    let mut best = 1.0f64;
    for k in 0..1_000_000usize {
        let x = (2 * k + n) as f64 / 2.0;
        let v = (-s * x.ln() + log_conformal_ratio(n, k, s)?).exp();
        best = best.max(v);
        // |term − 1| = O(s(1−s)/x²) beyond here
        if k > 16 && (v - 1.0).abs() < 1e-15 {
            break;
        }
    }
    Ok(best)
}

pub fn sharp_lower(n: usize, s: f64) -> Result<f64> {
    let nf = n as f64;
    if !(nf - 1.0 - s > 0.0) {
        return Err(Error::Domain(format!("sharp_lower: need n-1-s > 0, got n={n}, s={s}")));
    }
    Ok((s * 4f64.ln() + ((nf - 1.0 - s) / (nf - 1.0 + s)).ln() + named("sharp_lower", log_gamma_sq_ratio(n, s))?).exp())
}

pub fn sharp_upper(n: usize, s: f64) -> Result<f64> {
    let nf = n as f64;
    Ok((s * 4f64.ln() + ((nf - s) / nf).ln() + named("sharp_upper", log_gamma_sq_ratio(n, s))?).exp())
}

/// Every constant at (n, s); fails naming the first constant whose Gamma
/// arguments leave the positive axis.
pub fn constants(n: usize, s: f64) -> Result<ConstantsBundle> {
    if n == 0 || !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("constants need n >= 1 and 0 < s < 1, got n={n}, s={s}")));
    }
    Ok(ConstantsBundle {
        n,
        s,
        d_ns: d_ns(n, s)?,
        c_ns: c_ns(n, s)?,
        b_ns: b_ns(n, s)?,
        c2_ns: c2_ns(n, s)?,
        us_norm: us_norm(n, s)?,
        sharp_lower: sharp_lower(n, s)?,
        sharp_upper: sharp_upper(n, s)?,
    })
}

/// Constants over a grid, keyed "n=<n> s=<s>".
pub fn constants_table(ns: &[usize], ss: &[f64]) -> Result<serde_json::Value> {
    let mut map = serde_json::Map::new();
    for &n in ns {
        for &s in ss {
            map.insert(format!("n={n} s={s}"), constants(n, s)?.to_json());
        }
    }
    Ok(serde_json::Value::Object(map))
}

/// Relative error of ∫₀^∞ (1+t)^{−b} t^{a−1} dt against Γ(a)Γ(b−a)/Γ(b).
pub fn beta_integral_check(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > a) {
        return Err(Error::Divergent(format!("beta integral needs 0 < a < b, got a={a}, b={b}")));
    }
    let exact = (log_gamma(a)? + log_gamma(b - a)? - log_gamma(b)?).exp();
    let f = |t: f64| (-b * t.ln_1p() + (a - 1.0) * t.ln()).exp();
    let q = exp_sinh(f, 0.0, 1e-13);
    Ok((q - exact).abs() / exact)
}

const RAYLEIGH_TOL: f64 = 1e-13;

/// ∫_{H^n} ((ρ²+|z|²)² + 16t²)^{−e} |z|^{−2σ} dz dt by nested quadrature.
fn rayleigh_integral(n: usize, rho: f64, e: f64, sigma: f64) -> f64 {
    let omega = crate::geometry::sphere_area(n);
    let inner = |r: f64| {
        let a = (rho * rho + r * r).powi(2);
        2.0 * exp_sinh(|t| (a + 16.0 * t * t).powf(-e), 0.0, RAYLEIGH_TOL)
    };
    let p = 2.0 * n as f64 - 1.0 - 2.0 * sigma;
    omega * exp_sinh(|r| r.powf(p) * inner(r), 0.0, RAYLEIGH_TOL)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayleighCheck {
    /// ⟨L_s φ, φ⟩ / ∫|z|^{−2s}|φ|² for φ = φ_{−s,ρ}, the form computed as
    /// ρ^{2s} C₂ ∫((ρ²+|z|²)² + 16t²)^{−(n+1)}.
    pub quotient: f64,
    /// C₂(n,s) 4^{−s} (n−s)/n
    pub closed_form: f64,
    pub rel_error: f64,
}

pub fn rayleigh_upper_bound_check(n: usize, s: f64, rho: f64) -> Result<RayleighCheck> {
    if !(s > 0.0 && s < 1.0) || !(rho > 0.0) || n == 0 {
        return Err(Error::Domain(format!("Rayleigh check needs 0 < s < 1 and rho > 0, got s={s}, rho={rho}")));
    }
    let nf = n as f64;
    let c2 = c2_ns(n, s)?;
    let num = rho.powf(2.0 * s) * c2 * rayleigh_integral(n, rho, nf + 1.0, 0.0);
    let den = rayleigh_integral(n, rho, nf + 1.0 - s, s);
    let quotient = num / den;
    if !quotient.is_finite() {
        return Err(Error::Divergent("Rayleigh quotient integrals".into()));
    }
    let closed_form = c2 * 4f64.powf(-s) * (nf - s) / nf;
    Ok(RayleighCheck { quotient, closed_form, rel_error: (quotient - closed_form).abs() / closed_form })
}

/// The Hardy/Pitt pairs. Each has a space weight ω: the Hardy inequality
/// bounds ∫ ω^{−1}|f|² by the operator's form, the Pitt inequality bounds
/// the inverse operator's form by ∫ ω|f|².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum WeightVariant {
    /// ω = |z|^{2s}, constant from the trace Hardy argument; 0 < s < 1, n ≥ 2.
    TraceHardy,
    /// ω = |z|^{2s}, constant from the Macdonald kernel bound and Pitt on
    /// C^n; 0 < s < 1, n ≥ 2.
    Macdonald,
    /// ω = N(z,t)^{2s}, constant from Pitt on the real line; 0 < s < n+1.
    HomogeneousNorm,
    /// ω = ((δ + |z|²/4)² + t²)^s with L_s; 0 < s < (n+1)/2.
    NonHomogeneous { delta: f64 },
    /// As above with L^s and the factor ‖U_s‖.
    NonHomogeneousFractional { delta: f64 },
    /// ω = N(z,t)^{2s} with L^s; ‖V_s‖ is not defined in closed form and
    /// must be supplied. 0 < s < 1.
    Homogeneous { vs_norm: f64 },
}

impl WeightVariant {
    fn name(&self) -> &'static str {
        match self {
            Self::TraceHardy => "trace_hardy",
            Self::Macdonald => "macdonald",
            Self::HomogeneousNorm => "homogeneous_norm",
            Self::NonHomogeneous { .. } => "non_homogeneous",
            Self::NonHomogeneousFractional { .. } => "non_homogeneous_fractional",
            Self::Homogeneous { .. } => "homogeneous",
        }
    }

    fn check_range(&self, n: usize, s: f64) -> Result<()> {
        let nf = n as f64;
        let bad = |what: &str| Err(Error::Domain(format!("{}: need {what}, got n={n}, s={s}", self.name())));
        match *self {
            Self::TraceHardy | Self::Macdonald => {
                if !(s > 0.0 && s < 1.0 && nf - 1.0 - s > 0.0) {
                    return bad("0 < s < 1 and n-1-s > 0");
                }
            }
            Self::HomogeneousNorm => {
                if !(s > 0.0 && s < nf + 1.0) {
                    return bad("0 < s < n+1");
                }
            }
            Self::NonHomogeneous { delta } | Self::NonHomogeneousFractional { delta } => {
                if !(s > 0.0 && s < (nf + 1.0) / 2.0 && delta > 0.0) {
                    return bad("0 < s < (n+1)/2 and delta > 0");
                }
            }
            Self::Homogeneous { vs_norm } => {
                if !(s > 0.0 && s < 1.0 && vs_norm > 0.0) {
                    return bad("0 < s < 1 and a positive ||V_s||");
                }
            }
        }
        Ok(())
    }

    /// ω(r, t)
    pub fn space_weight(&self, s: f64, r: f64, t: f64) -> f64 {
        match *self {
            Self::TraceHardy | Self::Macdonald => r.powf(2.0 * s),
            Self::HomogeneousNorm | Self::Homogeneous { .. } => norm_rt(r, t).powf(2.0 * s),
            Self::NonHomogeneous { delta } | Self::NonHomogeneousFractional { delta } => {
                let a = delta + r * r / 4.0;
                (a * a + t * t).powf(s)
            }
        }
    }

    /// Uses L^s rather than L_s.
    fn fractional(&self) -> bool {
        matches!(self, Self::NonHomogeneousFractional { .. } | Self::Homogeneous { .. })
    }

    /// (C, K): the Hardy inequality reads C ∫ ω^{−1}|f|² ≤ K ⟨T f, f⟩.
    pub fn hardy_constant(&self, n: usize, s: f64) -> Result<(f64, f64)> {
        self.check_range(n, s)?;
        let nf = n as f64;
        Ok(match *self {
            Self::TraceHardy => (sharp_lower(n, s)?, 1.0),
            Self::Macdonald => {
                let g = 2.0 * (log_gamma((nf + 2.0 * s) / 4.0)? - log_gamma((nf - 2.0 * s) / 4.0)?);
                ((g - 2.0 * s * PI.ln()).exp() / d_ns(n, s)?, 1.0)
            }
            Self::HomogeneousNorm => {
                let g = (gamma((1.0 + s) / 4.0)? / gamma((1.0 - s) / 4.0)?).powi(2);
                (2f64.powf(s) * PI.powf(-s) * g, 1.0)
            }
            Self::NonHomogeneous { delta } => ((s * (4.0 * delta).ln() + log_gamma_sq_ratio(n, s)?).exp(), 1.0),
            Self::NonHomogeneousFractional { delta } => ((s * (4.0 * delta).ln() + log_gamma_sq_ratio(n, s)?).exp(), us_norm(n, s)?),
            Self::Homogeneous { vs_norm } => {
                let l = (2.0 * nf + 3.0 * s) * LN_2 + 2.0 * log_gamma((nf + s) / 2.0)? - log_gamma(1.0 - s)? - 2.0 * log_gamma(nf / 2.0)?;
                (l.exp(), vs_norm)
            }
        })
    }

    /// Constant of the dual Pitt inequality ⟨T^{−1} f, f⟩ ≤ P ∫ ω|f|².
    ///
    /// This is K/C, except in the homogeneous case where the extra (2π)^{−n}
    /// of the stated inequality is kept.
    pub fn pitt_constant(&self, n: usize, s: f64) -> Result<f64> {
        let (c, k) = self.hardy_constant(n, s)?;
        let extra = match self {
            Self::Homogeneous { .. } => (2.0 * PI).powi(-(n as i32)),
            _ => 1.0,
        };
        Ok(extra * k / c)
    }

    fn operator(&self, n: usize, s: f64) -> Result<MultiplierKind> {
        MultiplierKind::new(n, if self.fractional() { Multiplier::FractionalL(s) } else { Multiplier::ConformalPlus(s) })
    }
}

/// Inequalities are accepted up to this much relative quadrature slack.
pub const MARGIN_SLACK: f64 = 1e-6;

fn margin_report(name: &str, variant: &WeightVariant, s: f64, small: f64, big: f64, constant: f64, tail: f64) -> VerificationReport {
    let mut rep = VerificationReport::new(name).sides(small, big);
    let margin = big - small;
    rep.constant = Some(constant);
    rep.margin = Some(margin);
    let scale = small.abs().max(big.abs());
    let rel = if scale > 0.0 { margin / scale } else { 0.0 };
    rep.check(Check::at_least("margin >= 0", rel, -MARGIN_SLACK).with_detail("relative to the larger side"));
    rep.record("variant", variant);
    rep.record("s", s);
    rep.record("k_tail", tail);
    if tail > 1e-6 {
        rep.note(format!("k-truncation tail {tail:.2e} exceeds 1e-6 of the partial sum"));
    }
    rep
}

fn weighted_space(f: &RadialFunction, cfg: &GridConfig, w: impl Fn(f64, f64) -> f64) -> Result<f64> {
    let (r, t) = f.hn_rules(cfg);
    integrate_hn_radial(f.n, &r, &t, |ri, ti| {
        let v = f.value(ri, ti);
        if v == 0.0 {
            0.0
        } else {
            w(ri, ti) * v * v
        }
    })
}

/// K⟨T f, f⟩ − C ∫ ω^{−1}|f|² with T = L_s, or L^s for the fractional
/// variants. `lhs` is the weighted integral, `rhs` the form side.
pub fn verify_hardy(f: &RadialFunction, s: f64, variant: WeightVariant, cfg: &GridConfig) -> Result<VerificationReport> {
    let (c, k) = variant.hardy_constant(f.n, s)?;
    let op = variant.operator(f.n, s)?;
    let (form, tail) = if f.is_zero() {
        (0.0, 0.0)
    } else {
        let fi = quadratic_form(f, &op, cfg)?;
        (fi.value, fi.tail)
    };
    let weighted = weighted_space(f, cfg, |r, t| 1.0 / variant.space_weight(s, r, t))?;
    let mut rep = margin_report("hardy", &variant, s, c * weighted, k * form, c, tail);
    rep.record("form_factor", k);
    Ok(rep)
}

/// P ∫ ω|f|² − ⟨T^{−1} f, f⟩, the form read off the fan.
pub fn verify_pitt_dual(f: &RadialFunction, s: f64, variant: WeightVariant, cfg: &GridConfig) -> Result<VerificationReport> {
    let p = variant.pitt_constant(f.n, s)?;
    let inverse = if variant.fractional() { Multiplier::FractionalL(s) } else { Multiplier::ConformalMinus(s) };
    let kind = MultiplierKind::new(f.n, inverse)?;
    let (form, tail) = if f.is_zero() {
        (0.0, 0.0)
    } else {
        let table = SpectralTable::build(f, cfg)?;
        let fi = if variant.fractional() {
            table.weighted_l2(|a| 1.0 / multiplier_at(&kind, a))
        } else {
            table.weighted_l2(|a| multiplier_at(&kind, a))
        };
        (fi.value, fi.tail)
    };
    let weighted = weighted_space(f, cfg, |r, t| variant.space_weight(s, r, t))?;
    Ok(margin_report("pitt_dual", &variant, s, form, p * weighted, p, tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_order_multipliers_are_one() {
        for v in [Multiplier::FractionalL(0.0), Multiplier::ConformalPlus(0.0), Multiplier::ConformalMinus(0.0)] {
            let kind = MultiplierKind::new(2, v).unwrap();
            for k in [0, 3, 40] {
                assert!((multiplier_value(&kind, k, -0.7).unwrap() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ranges() {
        assert!(MultiplierKind::new(1, Multiplier::ConformalPlus(2.0)).is_err());
        assert!(MultiplierKind::new(1, Multiplier::ConformalMinus(2.0)).is_err());
        assert!(matches!(WeightVariant::TraceHardy.hardy_constant(1, 0.5), Err(Error::Domain(_))));
        assert!(WeightVariant::Homogeneous { vs_norm: 1.0 }.hardy_constant(2, 1.2).is_err());
        assert!(constants(2, 0.5).is_ok());
        assert!(constants(1, 0.5).is_err());
    }

    #[test]
    fn us_norm_at_zero() {
        assert_eq!(us_norm(3, 0.0).unwrap(), 1.0);
    }
}
