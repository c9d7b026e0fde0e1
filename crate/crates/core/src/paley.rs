//! Paley's inequality on the fan: weak-L¹ weights radial in R = |a| + |w|,
//! the layer-cake bound behind the weak (1,1) estimate, and the L^p to
//! L^p(φ^{2−p}) ratio itself.

use crate::conditions::{fan_norm, sup_on_grid, SupEstimate};
use crate::error::{Error, Result};
use crate::geometry::{FanPoint, GridConfig};
use crate::quad::{adaptive, exp_sinh, tanh_sinh};
use crate::rearrange::{fan_ball_constant, log_grid};
use crate::transform::{RadialFunction, SpectralTable};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FanWeightKind {
    /// R^{−ρ}
    PowerDecay { rho: f64 },
    /// Piecewise linear in R through the samples, constant below the first
    /// radius and zero beyond the last; must be non-increasing.
    Sampled { radius: Vec<f64>, values: Vec<f64> },
}

/// φ(a, w) = scale · g(|a| + |w|) with g non-increasing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FanWeight {
    pub n: usize,
    pub scale: f64,
    #[serde(flatten)]
    pub kind: FanWeightKind,
}

impl FanWeight {
    pub fn new(n: usize, scale: f64, kind: FanWeightKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dimension n must be at least 1".into()));
        }
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(Error::Domain(format!("weight scale must be finite and >= 0, got {scale}")));
        }
        match &kind {
            FanWeightKind::PowerDecay { rho } => {
                if !(*rho > 0.0 && rho.is_finite()) {
                    return Err(Error::Domain(format!("rho must be positive, got {rho}")));
                }
            }
            FanWeightKind::Sampled { radius, values } => {
                if radius.is_empty() || radius.len() != values.len() {
                    return Err(Error::Domain("sampled weight needs matching non-empty radius and value lists".into()));
                }
                if !(radius[0] > 0.0) || radius.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::Domain("sample radii must be positive and increasing".into()));
                }
                if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) || values.windows(2).any(|w| w[1] > w[0]) {
                    return Err(Error::Domain("sampled weight must be finite, non-negative and non-increasing".into()));
                }
            }
        }
        Ok(Self { n, scale, kind })
    }

    pub fn power_decay(n: usize, rho: f64) -> Result<Self> {
        Self::new(n, 1.0, FanWeightKind::PowerDecay { rho })
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.n, self.scale * c, self.kind.clone())
    }

    /// Membership in L^{1,∞}. The ball measure is K R^{4n+1}, so R^{−ρ} has
    /// distribution K s^{−(4n+1)/ρ}, which is O(1/s) at both ends only for
    /// ρ = 4n+1. Sampled weights are bounded with bounded support.
    pub fn weak_l1(&self) -> bool {
        match &self.kind {
            FanWeightKind::PowerDecay { rho } => self.scale == 0.0 || (rho - (4.0 * self.n as f64 + 1.0)).abs() <= 1e-12,
            FanWeightKind::Sampled { .. } => true,
        }
    }

    pub fn profile(&self, r: f64) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        self.scale
            * match &self.kind {
                FanWeightKind::PowerDecay { rho } => r.powf(-rho),
                FanWeightKind::Sampled { radius, values } => {
                    let last = radius.len() - 1;
                    if r <= radius[0] {
                        values[0]
                    } else if r > radius[last] {
                        0.0
                    } else {
                        let j = radius.partition_point(|x| *x < r).min(last).max(1);
                        let h = (r - radius[j - 1]) / (radius[j] - radius[j - 1]);
                        values[j - 1] + h * (values[j] - values[j - 1])
                    }
                }
            }
    }

    pub fn value(&self, a: &FanPoint, w: f64) -> f64 {
        self.profile(a.abs_a() + w)
    }

    /// sup{R : φ(R) > s}, the radius of the ball {φ > s}.
    pub fn radius_above(&self, s: f64) -> f64 {
        if self.scale == 0.0 || s < 0.0 {
            return if s < 0.0 { f64::INFINITY } else { 0.0 };
        }
        match &self.kind {
            FanWeightKind::PowerDecay { rho } => {
                if s == 0.0 {
                    f64::INFINITY
                } else {
                    (self.scale / s).powf(1.0 / rho)
                }
            }
            FanWeightKind::Sampled { radius, values } => {
                let g = s / self.scale;
                for j in (0..radius.len()).rev() {
                    if values[j] > g {
                        if j + 1 == radius.len() {
                            return radius[j];
                        }
                        // crossing inside [r_j, r_{j+1}]
                        let (v0, v1) = (values[j], values[j + 1]);
                        if v1 > g {
                            return radius[j + 1];
                        }
                        return radius[j] + (v0 - g) / (v0 - v1) * (radius[j + 1] - radius[j]);
                    }
                }
                0.0
            }
        }
    }

    /// m(s) = |{φ > s}| under dν₂ dw.
    pub fn distribution(&self, s: f64) -> f64 {
        let r = self.radius_above(s);
        if r == 0.0 {
            0.0
        } else {
            fan_ball_constant(self.n) * r.powf(4.0 * self.n as f64 + 1.0)
        }
    }

    fn breaks(&self) -> Vec<f64> {
        match &self.kind {
            FanWeightKind::PowerDecay { .. } => Vec::new(),
            FanWeightKind::Sampled { radius, .. } => radius.clone(),
        }
    }
}

/// Default level range for quasinorms: six decades.
pub const LEVEL_LO: f64 = 1e-3;
pub const LEVEL_HI: f64 = 1e3;
pub const LEVEL_COUNT: usize = 121;

/// sup_s s·m(s) over levels s·scale in [lo, hi]; +∞ when the trend grows at
/// either end.
pub fn weak_l1_quasinorm_on(phi: &FanWeight, lo: f64, hi: f64, count: usize) -> SupEstimate {
    let c = if phi.scale > 0.0 { phi.scale } else { 1.0 };
    sup_on_grid(|s| s * phi.distribution(s), lo * c, hi * c, count)
}

pub fn weak_l1_quasinorm(phi: &FanWeight) -> f64 {
    if phi.scale == 0.0 {
        return 0.0;
    }
    weak_l1_quasinorm_on(phi, LEVEL_LO, LEVEL_HI, LEVEL_COUNT).value()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerCakeReport {
    /// The weak-L¹ constant C.
    pub constant: f64,
    pub sigma: Vec<f64>,
    /// |{φ ≤ σ}|_{φ²} / σ
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    /// Relative gap between ∫_0^σ 2t(m(t) − m(σ)) dt and ∫_{φ≤σ} φ².
    pub identity_errors: Vec<f64>,
    pub max_identity_error: f64,
    /// max_ratio ≤ 2C(1 + tol)
    pub bound_holds: bool,
    pub tol: f64,
}

const QUAD_TOL: f64 = 1e-12;

/// ∫_{φ≤σ} φ² dν₂ dw, radially in R with dμ = K(4n+1) R^{4n} dR.
pub fn sublevel_weighted_measure(phi: &FanWeight, sigma: f64) -> f64 {
    let n = phi.n as f64;
    let k = fan_ball_constant(phi.n) * (4.0 * n + 1.0);
    let r0 = phi.radius_above(sigma);
    let g = |r: f64| {
        let v = phi.profile(r);
        k * v * v * r.powf(4.0 * n)
    };
    match &phi.kind {
        FanWeightKind::PowerDecay { .. } => exp_sinh(g, r0, QUAD_TOL),
        FanWeightKind::Sampled { radius, .. } => {
            let end = *radius.last().unwrap();
            let mut cuts: Vec<f64> = vec![r0];
            cuts.extend(phi.breaks().into_iter().filter(|b| *b > r0 && *b < end));
            cuts.push(end);
            cuts.windows(2).map(|w| adaptive(g, w[0], w[1], 1e-300, QUAD_TOL)).sum()
        }
    }
}

/// ∫_0^σ 2t (m(t) − m(σ)) dt
pub fn layer_cake_integral(phi: &FanWeight, sigma: f64) -> f64 {
    let ms = phi.distribution(sigma);
    tanh_sinh(|t| 2.0 * t * (phi.distribution(t) - ms), 0.0, sigma, QUAD_TOL)
}

/// The ratio |{φ ≤ σ}|_{φ²}/σ against 2C on each σ, with C the weak-L¹
/// quasinorm over the default level range.
pub fn layer_cake_bound_check(phi: &FanWeight, sigma: &[f64], tol: f64) -> Result<LayerCakeReport> {
    if !phi.weak_l1() {
        return Err(Error::Domain("layer-cake bound needs a weak-L1 weight".into()));
    }
    let constant = weak_l1_quasinorm(phi);
    let mut ratios = Vec::with_capacity(sigma.len());
    let mut errs = Vec::with_capacity(sigma.len());
    for &s in sigma {
        if !(s > 0.0) {
            return Err(Error::Domain(format!("sigma must be positive, got {s}")));
        }
        let direct = sublevel_weighted_measure(phi, s);
        let cake = layer_cake_integral(phi, s);
        ratios.push(direct / s);
        errs.push(if direct > 0.0 { (cake - direct).abs() / direct } else { cake.abs() });
    }
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let max_identity_error = errs.iter().copied().fold(0.0, f64::max);
    Ok(LayerCakeReport {
        constant,
        sigma: sigma.to_vec(),
        ratios,
        max_ratio,
        identity_errors: errs,
        max_identity_error,
        bound_holds: constant.is_finite() && max_ratio <= 2.0 * constant * (1.0 + tol),
        tol,
    })
}

/// σ over six decades.
pub fn default_sigma_grid() -> Vec<f64> {
    log_grid(1e-3, 1e3, 61)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaleyReport {
    pub p: f64,
    /// (∫|f̃|^p φ^{2−p} dν₂ dw)^{1/p}
    pub lhs: f64,
    /// ‖f‖_p
    pub norm: f64,
    pub ratio: f64,
    /// Share of ∫|f̃|² on the rays where the w-integral is numeric; 1 at p = 2.
    pub captured: f64,
}

fn paley_on(table: &SpectralTable, f: &RadialFunction, phi: &FanWeight, p: f64, cfg: &GridConfig) -> Result<PaleyReport> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::Domain(format!("Paley needs 1 < p <= 2, got {p}")));
    }
    let e = (2.0 - p) / p;
    // at p = 2 the weight drops out and the w-integral is closed form
    let exact = e == 0.0;
    let lhs = fan_norm(table, cfg, p, exact, |a, w| if exact { 1.0 } else { phi.value(a, w).powf(e) })?;
    let norm = f.lp_norm(p, cfg)?;
    let captured = if exact {
        1.0
    } else {
        let full = table.weighted_l2(|_| 1.0).value;
        table.weighted_l2(|a| if a.k < cfg.w_k_max { 1.0 } else { 0.0 }).value / full
    };
    if !(lhs.is_finite() && norm > 0.0) {
        return Err(Error::NonFinite(format!("Paley sides at p={p}: lhs={lhs}, norm={norm}")));
    }
    Ok(PaleyReport { p, lhs, norm, ratio: lhs / norm, captured })
}

pub fn paley_check(f: &RadialFunction, phi: &FanWeight, p: f64, cfg: &GridConfig) -> Result<PaleyReport> {
    Ok(paley_sweep(f, phi, &[p], cfg)?.remove(0))
}

/// The Paley ratio at several p on one spectral table.
pub fn paley_sweep(f: &RadialFunction, phi: &FanWeight, ps: &[f64], cfg: &GridConfig) -> Result<Vec<PaleyReport>> {
    if !phi.weak_l1() {
        return Err(Error::Domain("Paley's inequality needs a weak-L1 weight".into()));
    }
    if phi.n != f.n {
        return Err(Error::Dimension(phi.n, f.n));
    }
    if f.is_zero() {
        return Err(Error::Domain("Paley ratio is undefined for f = 0".into()));
    }
    let table = SpectralTable::build(f, cfg)?;
    ps.iter().map(|&p| paley_on(&table, f, phi, p, cfg)).collect()
}
