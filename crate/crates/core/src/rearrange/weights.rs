use crate::error::{Error, Result};
use crate::geometry::{norm_rt, sphere_area, FanPoint};
use crate::quad::Rule;
use crate::specfn::{log_beta, log_gamma};
use crate::transform::SampledGrid;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// (H^n, dz dt)
    Hn,
    /// (Ω × C^n, dν₂ dw)
    Fan,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightKind {
    /// (|z|⁴ + 16t²)^{α/4} on H^n
    Valpha { alpha: f64 },
    /// (|a| + |w|)^{-ρ} on the fan, zero where λ = 0 or w = 0
    Urho { rho: f64 },
    /// ((2k+n)|λ|)^{-σ} |w|^{-ρ} on the fan where |λ| > 1
    UsigmaRho { sigma: f64, rho: f64 },
    /// N(z, t)^{2s} on H^n
    HomNormPower { s: f64 },
    /// |z|^{2s} on H^n, either sign of s
    ZPower { s: f64 },
    /// ((δ + |z|²/4)² + t²)^{s/2} on H^n
    NonHomog { s: f64, delta: f64 },
    /// c everywhere on H^n
    Constant { c: f64 },
    /// v(|z|, t) sampled on H^n
    Sampled { grid: SampledGrid },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub n: usize,
    #[serde(flatten)]
    pub kind: WeightKind,
}

impl WeightSpec {
    pub fn new(n: usize, kind: WeightKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dimension n must be at least 1".into()));
        }
        let pos = |x: f64, what: &str| if x > 0.0 && x.is_finite() { Ok(()) } else { Err(Error::Domain(format!("{what} must be positive, got {x}"))) };
        match &kind {
            WeightKind::Valpha { alpha } => pos(*alpha, "alpha")?,
            WeightKind::Urho { rho } => pos(*rho, "rho")?,
            WeightKind::UsigmaRho { sigma, rho } => {
                pos(*sigma, "sigma")?;
                pos(*rho, "rho")?
            }
            WeightKind::HomNormPower { s } | WeightKind::ZPower { s } => {
                if !s.is_finite() {
                    return Err(Error::NonFinite("weight exponent".into()));
                }
            }
            WeightKind::NonHomog { s, delta } => {
                pos(*delta, "delta")?;
                if !s.is_finite() {
                    return Err(Error::NonFinite("weight exponent".into()));
                }
            }
            WeightKind::Constant { c } => pos(*c, "constant weight")?,
            WeightKind::Sampled { grid } => {
                if grid.values.iter().any(|v| !(*v > 0.0)) {
                    return Err(Error::Domain("sampled weights must be positive".into()));
                }
            }
        }
        Ok(Self { n, kind })
    }

    pub fn valpha(n: usize, alpha: f64) -> Result<Self> {
        Self::new(n, WeightKind::Valpha { alpha })
    }

    pub fn urho(n: usize, rho: f64) -> Result<Self> {
        Self::new(n, WeightKind::Urho { rho })
    }

    pub fn usigma_rho(n: usize, sigma: f64, rho: f64) -> Result<Self> {
        Self::new(n, WeightKind::UsigmaRho { sigma, rho })
    }

    pub fn one(n: usize) -> Self {
        Self { n, kind: WeightKind::Constant { c: 1.0 } }
    }

    pub fn domain(&self) -> Domain {
        match self.kind {
            WeightKind::Urho { .. } | WeightKind::UsigmaRho { .. } => Domain::Fan,
            _ => Domain::Hn,
        }
    }

    /// σ > ρ(2n+1)/(2n) for u_{σ,ρ}; true for every other kind.
    pub fn integrable(&self) -> bool {
        match self.kind {
            WeightKind::UsigmaRho { sigma, rho } => {
                let n = self.n as f64;
                sigma > rho * (2.0 * n + 1.0) / (2.0 * n)
            }
            _ => true,
        }
    }

    /// v(|z|, t) for weights on H^n.
    pub fn value_hn(&self, r: f64, t: f64) -> f64 {
        match &self.kind {
            WeightKind::Valpha { alpha } => norm_rt(r, t).powf(*alpha),
            WeightKind::HomNormPower { s } => norm_rt(r, t).powf(2.0 * s),
            WeightKind::ZPower { s } => r.powf(2.0 * s),
            WeightKind::NonHomog { s, delta } => {
                let a = delta + r * r / 4.0;
                (a * a + t * t).powf(s / 2.0)
            }
            WeightKind::Constant { c } => *c,
            WeightKind::Sampled { grid } => grid.value(r, t),
            WeightKind::Urho { .. } | WeightKind::UsigmaRho { .. } => f64::NAN,
        }
    }

    /// u(a, |w|) for weights on the fan.
    pub fn value_fan(&self, a: &FanPoint, w: f64) -> f64 {
        match self.kind {
            WeightKind::Urho { rho } => {
                if w == 0.0 {
                    0.0
                } else {
                    (a.abs_a() + w).powf(-rho)
                }
            }
            WeightKind::UsigmaRho { sigma, rho } => {
                if w == 0.0 || a.lambda.abs() <= 1.0 {
                    0.0
                } else {
                    a.ev().powf(-sigma) * w.powf(-rho)
                }
            }
            WeightKind::Constant { c } => c,
            _ => f64::NAN,
        }
    }
}

/// Σ_{k≥0} binom(k+n-1, k)² (2k+c)^{-e}, e > 2n - 1.
///
/// Summed directly to a large cutoff; the remainder is the integral of the
/// leading asymptotic term, whose relative error is O(1/K) of a tail that is
/// itself O(K^{2n-1-e}).
pub fn binom_square_series(n: usize, c: f64, e: f64) -> f64 {
    static CACHE: OnceLock<Mutex<Vec<((usize, u64, u64), f64)>>> = OnceLock::new();
    let key = (n, c.to_bits(), e.to_bits());
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    if let Some(v) = cache.lock().unwrap().iter().find(|x| x.0 == key).map(|x| x.1) {
        return v;
    }
    let cutoff = 200_000usize;
    let mut binom = 1.0f64;
    let mut sum = 0.0;
    for k in 0..cutoff {
        sum += binom * binom * (2.0 * k as f64 + c).powf(-e);
        binom *= (k + n) as f64 / (k + 1) as f64;
    }
    let nf = n as f64;
    let lg = log_gamma(nf).unwrap();
    let kk = cutoff as f64 - 0.5;
    // binom(k+n-1,k)² (2k+c)^{-e} ~ k^{2n-2-e} 2^{-e} / (n-1)!²
    let g = 2.0 * nf - 2.0 - e;
    let tail = (-2.0 * lg - e * std::f64::consts::LN_2).exp() * kk.powf(g + 1.0) / (-(g + 1.0));
    let v = sum + tail;
    cache.lock().unwrap().push((key, v));
    v
}

/// Volume of {N(z,t) < 1} in H^n: πⁿ B(n/2, 3/2) / (4Γ(n)).
pub fn sublevel_volume(n: usize) -> f64 {
    let nf = n as f64;
    (nf * PI.ln() + log_beta(nf / 2.0, 1.5).unwrap() - log_gamma(nf).unwrap()).exp() / 4.0
}

/// |{(a, w) : |a| + |w| < 1}| under dν₂ dw; the measure of radius R is this
/// times R^{4n+1}.
pub fn fan_ball_constant(n: usize) -> f64 {
    let nf = n as f64;
    let pre = -(2.0 * nf + 1.0) * (2.0 * PI).ln() + 2f64.ln() + nf * PI.ln() - log_gamma(nf + 1.0).unwrap() + log_beta(2.0 * nf + 1.0, 2.0 * nf + 1.0).unwrap();
    pre.exp() * binom_square_series(n, nf + 1.0, 2.0 * nf + 1.0)
}

/// The containing set {|w| < R, (2k+n)|λ| < R} at R = 1.
pub fn fan_box_constant(n: usize) -> f64 {
    let nf = n as f64;
    let pre = -(2.0 * nf + 1.0) * (2.0 * PI).ln() + nf * PI.ln() - log_gamma(nf + 1.0).unwrap() + (2.0 / (2.0 * nf + 1.0)).ln();
    pre.exp() * binom_square_series(n, nf, 2.0 * nf + 1.0)
}

/// d_{u_{σ,ρ}}(M) M^{2n/ρ}, or None when σ ≤ ρ(2n+1)/(2n).
pub fn usigma_rho_constant(n: usize, sigma: f64, rho: f64) -> Option<f64> {
    let nf = n as f64;
    let e = 2.0 * nf * sigma / rho;
    if e <= 2.0 * nf + 1.0 {
        return None;
    }
    let pre = -(2.0 * nf + 1.0) * (2.0 * PI).ln() + nf * PI.ln() - log_gamma(nf + 1.0).unwrap() + (2.0 / (e - 2.0 * nf - 1.0)).ln();
    Some(pre.exp() * binom_square_series(n, nf, e))
}

/// Whether a distribution value is exact or only an upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    UpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub value: f64,
    pub exactness: Exactness,
    /// The level set has infinite measure.
    pub divergent: bool,
}

impl Distribution {
    fn exact(value: f64) -> Self {
        Self { value, exactness: Exactness::Exact, divergent: !value.is_finite() }
    }
}

/// ∫ ω r^{2n-1} g(r) dr over [a, b] after r = a + (b-a)(1 - cos πs)/2, which
/// flattens square-root edges at both ends.
pub(crate) fn edge_integral<G: Fn(f64) -> f64>(n: usize, a: f64, b: f64, g: G) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let rule = Rule::composite(0.0, 1.0, &[], 0.125, 12);
    let omega = sphere_area(n);
    rule.integrate(|s| {
        let r = a + (b - a) * (1.0 - (PI * s).cos()) / 2.0;
        let dr = (b - a) * PI * (PI * s).sin() / 2.0;
        omega * r.powi(2 * n as i32 - 1) * g(r) * dr
    })
}

/// Distribution of the function the Pitt condition rearranges: 1/v for
/// weights on H^n, u itself for weights on the fan.
pub fn distribution(w: &WeightSpec, m: f64) -> Result<Distribution> {
    if !(m > 0.0) {
        return Err(Error::Domain(format!("distribution level must be positive, got {m}")));
    }
    let n = w.n;
    let nf = n as f64;
    let q = 2.0 * nf + 2.0;
    Ok(match &w.kind {
        // 1/N^α > M  ⇔  N < M^{-1/α}
        WeightKind::Valpha { alpha } => Distribution::exact(sublevel_volume(n) * m.powf(-q / alpha)),
        WeightKind::HomNormPower { s } => {
            if *s > 0.0 {
                Distribution::exact(sublevel_volume(n) * m.powf(-q / (2.0 * s)))
            } else {
                // 1/N^{2s} with s <= 0 is unbounded or constant on an infinite set
                Distribution::exact(if *s == 0.0 && m >= 1.0 { 0.0 } else { f64::INFINITY })
            }
        }
        WeightKind::ZPower { s } => Distribution::exact(if *s == 0.0 && m >= 1.0 { 0.0 } else { f64::INFINITY }),
        WeightKind::Constant { c } => Distribution::exact(if m >= 1.0 / c { 0.0 } else { f64::INFINITY }),
        WeightKind::NonHomog { s, delta } => {
            if *s <= 0.0 {
                Distribution::exact(f64::INFINITY)
            } else {
                // ((δ + r²/4)² + t²) < L with L = M^{-2/s}
                let l = m.powf(-2.0 / s);
                let sl = l.sqrt();
                if sl <= *delta {
                    Distribution::exact(0.0)
                } else {
                    let edge = (4.0 * (sl - delta)).sqrt();
                    let v = edge_integral(n, 0.0, edge, |r| {
                        let a = delta + r * r / 4.0;
                        2.0 * (l - a * a).max(0.0).sqrt()
                    });
                    Distribution::exact(v)
                }
            }
        }
        WeightKind::Sampled { grid } => {
            let recip = SampledGrid::new(grid.r.clone(), grid.t.clone(), grid.values.iter().map(|v| 1.0 / v).collect())?;
            let f = crate::transform::RadialFunction::new(n, crate::transform::Profile::Sampled(recip))?;
            Distribution::exact(super::distribution_radial(&f, m)?)
        }
        WeightKind::Urho { rho } => Distribution::exact(fan_ball_constant(n) * m.powf(-(4.0 * nf + 1.0) / rho)),
        WeightKind::UsigmaRho { sigma, rho } => match usigma_rho_constant(n, *sigma, *rho) {
            Some(c) => Distribution::exact(c * m.powf(-2.0 * nf / rho)),
            None => Distribution::exact(f64::INFINITY),
        },
    })
}

/// The upper bound the containment argument gives for d_{u_ρ}(M).
pub fn urho_containment_bound(n: usize, rho: f64, m: f64) -> Distribution {
    let nf = n as f64;
    Distribution { value: fan_box_constant(n) * m.powf(-(4.0 * nf + 1.0) / rho), exactness: Exactness::UpperBound, divergent: false }
}
