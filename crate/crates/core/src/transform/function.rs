use crate::error::{Error, Result};
use crate::geometry::{integrate_hn_radial, GridConfig};
use crate::quad::Rule;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Values F(r_i, t_j) on a tensor grid, read back by bilinear interpolation
/// and taken to vanish outside it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledGrid {
    pub r: Vec<f64>,
    pub t: Vec<f64>,
    /// Row-major: `values[i * t.len() + j] = F(r[i], t[j])`.
    pub values: Vec<f64>,
}

impl SampledGrid {
    pub fn new(r: Vec<f64>, t: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let inc = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        if r.len() < 2 || t.len() < 2 || !inc(&r) || !inc(&t) || r[0] < 0.0 {
            return Err(Error::Domain("sampled grid needs increasing nodes, r >= 0".into()));
        }
        if values.len() != r.len() * t.len() {
            return Err(Error::Domain("sampled grid value count mismatch".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sampled grid value".into()));
        }
        Ok(Self { r, t, values })
    }

    pub fn from_fn<F: Fn(f64, f64) -> f64>(r: Vec<f64>, t: Vec<f64>, f: F) -> Result<Self> {
        let mut values = Vec::with_capacity(r.len() * t.len());
        for &ri in &r {
            for &tj in &t {
                values.push(f(ri, tj));
            }
        }
        Self::new(r, t, values)
    }

    fn cell(nodes: &[f64], x: f64) -> Option<(usize, f64)> {
        if x < nodes[0] || x > nodes[nodes.len() - 1] {
            return None;
        }
        let i = match nodes.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(nodes.len() - 2),
            Err(i) => i - 1,
        };
        Some((i, (x - nodes[i]) / (nodes[i + 1] - nodes[i])))
    }

    pub fn value(&self, r: f64, t: f64) -> f64 {
        let (Some((i, a)), Some((j, b))) = (Self::cell(&self.r, r), Self::cell(&self.t, t)) else {
            return 0.0;
        };
        let m = self.t.len();
        let v = |i: usize, j: usize| self.values[i * m + j];
        (1.0 - a) * ((1.0 - b) * v(i, j) + b * v(i, j + 1)) + a * ((1.0 - b) * v(i + 1, j) + b * v(i + 1, j + 1))
    }

    /// ∫ F(r_i, t) e^{iλt} dt for the piecewise-linear profile in t.
    fn row_fourier(&self, i: usize, lambda: f64) -> Complex64 {
        let m = self.t.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..m - 1 {
            let (t0, t1) = (self.t[j], self.t[j + 1]);
            let (v0, v1) = (self.values[i * m + j], self.values[i * m + j + 1]);
            let h = t1 - t0;
            let s = (v1 - v0) / h;
            let (e1, e2) = linear_moments(lambda, h);
            acc += Complex64::from_polar(1.0, lambda * t0) * (e1 * v0 + e2 * s);
        }
        acc
    }

    fn central(&self, lambda: f64, r: f64) -> Complex64 {
        let Some((i, a)) = Self::cell(&self.r, r) else {
            return Complex64::new(0.0, 0.0);
        };
        self.row_fourier(i, lambda) * (1.0 - a) + self.row_fourier(i + 1, lambda) * a
    }
}

/// (∫₀^h e^{iλu} du, ∫₀^h u e^{iλu} du).
fn linear_moments(lambda: f64, h: f64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let x = lambda * h;
    if x.abs() < 1e-3 {
        let l = lambda;
        let e1 = Complex64::new(h - l * l * h.powi(3) / 6.0, l * h * h / 2.0 - l.powi(3) * h.powi(4) / 24.0);
        let e2 = Complex64::new(h * h / 2.0 - l * l * h.powi(4) / 8.0, l * h.powi(3) / 3.0 - l.powi(3) * h.powi(5) / 30.0);
        return (e1, e2);
    }
    let e = Complex64::from_polar(1.0, x);
    let il = i * lambda;
    let e1 = (e - 1.0) / il;
    let e2 = e * h / il - (e - 1.0) / (il * il);
    (e1, e2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// e^{-a|z|² - b t²}
    Gaussian { a: f64, b: f64 },
    /// t^m e^{-a|z|² - b t²}
    GaussianMoment { a: f64, b: f64, m: u32 },
    /// 1 on {|z| < rz, |t| < rt}
    BumpIndicator { rz: f64, rt: f64 },
    Sampled(SampledGrid),
    /// Σ c_i f_i
    Combination(Vec<(f64, Profile)>),
}

/// A function on H^n depending on |z| and t only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialFunction {
    pub n: usize,
    pub profile: Profile,
}

const DECAY: f64 = 46.0;

impl RadialFunction {
    pub fn new(n: usize, profile: Profile) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dimension n must be at least 1".into()));
        }
        check_profile(&profile)?;
        Ok(Self { n, profile })
    }

    pub fn gaussian(n: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(n, Profile::Gaussian { a, b })
    }

    pub fn bump(n: usize, rz: f64, rt: f64) -> Result<Self> {
        Self::new(n, Profile::BumpIndicator { rz, rt })
    }

    pub fn zero(n: usize) -> Self {
        Self { n, profile: Profile::Combination(vec![]) }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { n: self.n, profile: Profile::Combination(vec![(c, self.profile.clone())]) }
    }

    pub fn plus(&self, other: &RadialFunction) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension(self.n, other.n));
        }
        Ok(Self { n: self.n, profile: Profile::Combination(vec![(1.0, self.profile.clone()), (1.0, other.profile.clone())]) })
    }

    pub fn label(&self) -> String {
        label(&self.profile)
    }

    pub fn value(&self, r: f64, t: f64) -> f64 {
        value(&self.profile, r, t)
    }

    /// f^λ(r) = ∫ f(r, t) e^{iλt} dt.
    pub fn central_fourier(&self, lambda: f64, r: f64) -> Complex64 {
        central(&self.profile, lambda, r)
    }

    pub fn r_max(&self) -> f64 {
        extent(&self.profile).0
    }

    pub fn t_max(&self) -> f64 {
        extent(&self.profile).1
    }

    /// Where the central transform is negligible, if the family says so.
    pub fn lambda_extent(&self) -> Option<f64> {
        lambda_extent(&self.profile)
    }

    pub fn r_breaks(&self) -> Vec<f64> {
        let mut v = Vec::new();
        breaks(&self.profile, &mut v, true);
        v
    }

    pub fn t_breaks(&self) -> Vec<f64> {
        let mut v = Vec::new();
        breaks(&self.profile, &mut v, false);
        v
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.profile)
    }

    /// δ_r f(z, t) = f(rz, r²t).
    pub fn dilate(&self, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("dilation needs r > 0, got {r}")));
        }
        Ok(Self { n: self.n, profile: dilate(&self.profile, r) })
    }

    /// ∂f/∂t, available for the Gaussian kinds.
    pub fn t_derivative(&self) -> Result<Self> {
        Ok(Self { n: self.n, profile: t_derivative(&self.profile)? })
    }

    /// t·f(z, t), available for the Gaussian kinds.
    pub fn times_t(&self) -> Result<Self> {
        Ok(Self { n: self.n, profile: times_t(&self.profile)? })
    }

    /// Radial and central rules adapted to this function.
    pub fn hn_rules(&self, cfg: &GridConfig) -> (Rule, Rule) {
        let rm = cfg.r_max.unwrap_or_else(|| self.r_max());
        let tm = cfg.t_max.unwrap_or_else(|| self.t_max());
        let r = Rule::graded(0.0, rm, &self.r_breaks(), cfg.r_width, cfg.order, 8);
        let t = Rule::composite(-tm, tm, &self.t_breaks(), cfg.t_width, cfg.order);
        (r, t)
    }

    /// ∫ |f|^p dz dt.
    pub fn lp_power(&self, p: f64, cfg: &GridConfig) -> Result<f64> {
        let (r, t) = self.hn_rules(cfg);
        integrate_hn_radial(self.n, &r, &t, |r, t| self.value(r, t).abs().powf(p))
    }

    pub fn lp_norm(&self, p: f64, cfg: &GridConfig) -> Result<f64> {
        Ok(self.lp_power(p, cfg)?.powf(1.0 / p))
    }
}

fn check_profile(p: &Profile) -> Result<()> {
    let bad = |m: &str| Err(Error::Domain(m.to_string()));
    match p {
        Profile::Gaussian { a, b } | Profile::GaussianMoment { a, b, .. } => {
            if !(*a > 0.0 && *b > 0.0) {
                return bad("Gaussian parameters must be positive");
            }
        }
        Profile::BumpIndicator { rz, rt } => {
            if !(*rz > 0.0 && *rt > 0.0) {
                return bad("bump radii must be positive");
            }
        }
        Profile::Sampled(_) => {}
        Profile::Combination(v) => {
            for (c, q) in v {
                if !c.is_finite() {
                    return Err(Error::NonFinite("combination coefficient".into()));
                }
                check_profile(q)?;
            }
        }
    }
    Ok(())
}

fn label(p: &Profile) -> String {
    match p {
        Profile::Gaussian { a, b } => format!("gaussian(a={a},b={b})"),
        Profile::GaussianMoment { a, b, m } => format!("t^{m}·gaussian(a={a},b={b})"),
        Profile::BumpIndicator { rz, rt } => format!("bump(rz={rz},rt={rt})"),
        Profile::Sampled(g) => format!("sampled({}x{})", g.r.len(), g.t.len()),
        Profile::Combination(v) if v.is_empty() => "zero".into(),
        Profile::Combination(v) => v.iter().map(|(c, q)| format!("{c}·{}", label(q))).collect::<Vec<_>>().join(" + "),
    }
}

fn value(p: &Profile, r: f64, t: f64) -> f64 {
    match p {
        Profile::Gaussian { a, b } => (-a * r * r - b * t * t).exp(),
        Profile::GaussianMoment { a, b, m } => t.powi(*m as i32) * (-a * r * r - b * t * t).exp(),
        Profile::BumpIndicator { rz, rt } => {
            if r < *rz && t.abs() < *rt {
                1.0
            } else {
                0.0
            }
        }
        Profile::Sampled(g) => g.value(r, t),
        Profile::Combination(v) => v.iter().map(|(c, q)| c * value(q, r, t)).sum(),
    }
}

/// Physicists' Hermite polynomial H_m(x).
fn hermite(m: u32, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if m == 0 {
        return h0;
    }
    for j in 1..m {
        let h2 = 2.0 * x * h1 - 2.0 * j as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

fn central(p: &Profile, lambda: f64, r: f64) -> Complex64 {
    match p {
        Profile::Gaussian { a, b } => {
            Complex64::new((-a * r * r).exp() * (PI / b).sqrt() * (-lambda * lambda / (4.0 * b)).exp(), 0.0)
        }
        Profile::GaussianMoment { a, b, m } => {
            // ∫ t^m e^{-bt²} e^{iλt} dt = i^m (2√b)^{-m} H_m(λ/(2√b)) √(π/b) e^{-λ²/(4b)}
            let sb = b.sqrt();
            let x = lambda / (2.0 * sb);
            let mag = (-a * r * r).exp() * (PI / b).sqrt() * (-x * x).exp() * hermite(*m, x) / (2.0 * sb).powi(*m as i32);
            Complex64::i().powu(*m) * mag
        }
        Profile::BumpIndicator { rz, rt } => {
            if r >= *rz {
                return Complex64::new(0.0, 0.0);
            }
            let v = if lambda.abs() * rt < 1e-8 { 2.0 * rt } else { 2.0 * (lambda * rt).sin() / lambda };
            Complex64::new(v, 0.0)
        }
        Profile::Sampled(g) => g.central(lambda, r),
        Profile::Combination(v) => v.iter().map(|(c, q)| central(q, lambda, r) * *c).sum(),
    }
}

fn extent(p: &Profile) -> (f64, f64) {
    match p {
        Profile::Gaussian { a, b } => ((DECAY / a).sqrt(), (DECAY / b).sqrt()),
        Profile::GaussianMoment { a, b, m } => {
            let extra = 2.0 * *m as f64 * (1.0 + (*m as f64 / b).sqrt().max(1.0).ln());
            ((DECAY / a).sqrt(), ((DECAY + extra) / b).sqrt() + (*m as f64 / (2.0 * b)).sqrt())
        }
        Profile::BumpIndicator { rz, rt } => (*rz, *rt),
        Profile::Sampled(g) => (*g.r.last().unwrap(), g.t[0].abs().max(g.t[g.t.len() - 1].abs())),
        Profile::Combination(v) => v.iter().map(|(_, q)| extent(q)).fold((1e-3, 1e-3), |acc, e| (acc.0.max(e.0), acc.1.max(e.1))),
    }
}

fn lambda_extent(p: &Profile) -> Option<f64> {
    match p {
        Profile::Gaussian { b, .. } => Some((4.0 * b * DECAY).sqrt()),
        Profile::GaussianMoment { b, m, .. } => Some((4.0 * b * (DECAY + 2.0 * *m as f64)).sqrt() + (*m as f64 * b).sqrt()),
        Profile::BumpIndicator { .. } | Profile::Sampled(_) => None,
        Profile::Combination(v) => {
            let mut best: Option<f64> = None;
            for (_, q) in v {
                let e = lambda_extent(q)?;
                best = Some(best.map_or(e, |b| b.max(e)));
            }
            best.or(Some(1.0))
        }
    }
}

fn breaks(p: &Profile, out: &mut Vec<f64>, radial: bool) {
    match p {
        Profile::BumpIndicator { rz, rt } => {
            if radial {
                out.push(*rz);
            } else {
                out.extend([-rt, *rt]);
            }
        }
        Profile::Combination(v) => v.iter().for_each(|(_, q)| breaks(q, out, radial)),
        _ => {}
    }
}

fn is_zero(p: &Profile) -> bool {
    match p {
        Profile::Combination(v) => v.iter().all(|(c, q)| *c == 0.0 || is_zero(q)),
        Profile::Sampled(g) => g.values.iter().all(|v| *v == 0.0),
        _ => false,
    }
}

fn dilate(p: &Profile, r: f64) -> Profile {
    let r2 = r * r;
    match p {
        Profile::Gaussian { a, b } => Profile::Gaussian { a: a * r2, b: b * r2 * r2 },
        Profile::GaussianMoment { a, b, m } => Profile::Combination(vec![(
            r2.powi(*m as i32),
            Profile::GaussianMoment { a: a * r2, b: b * r2 * r2, m: *m },
        )]),
        Profile::BumpIndicator { rz, rt } => Profile::BumpIndicator { rz: rz / r, rt: rt / r2 },
        Profile::Sampled(g) => Profile::Sampled(SampledGrid {
            r: g.r.iter().map(|x| x / r).collect(),
            t: g.t.iter().map(|x| x / r2).collect(),
            values: g.values.clone(),
        }),
        Profile::Combination(v) => Profile::Combination(v.iter().map(|(c, q)| (*c, dilate(q, r))).collect()),
    }
}

fn t_derivative(p: &Profile) -> Result<Profile> {
    Ok(match p {
        Profile::Gaussian { a, b } => Profile::Combination(vec![(-2.0 * b, Profile::GaussianMoment { a: *a, b: *b, m: 1 })]),
        Profile::GaussianMoment { a, b, m } => {
            let mut terms = vec![(-2.0 * b, Profile::GaussianMoment { a: *a, b: *b, m: m + 1 })];
            if *m > 0 {
                terms.push((*m as f64, Profile::GaussianMoment { a: *a, b: *b, m: m - 1 }));
            }
            Profile::Combination(terms)
        }
        Profile::Combination(v) => {
            Profile::Combination(v.iter().map(|(c, q)| Ok((*c, t_derivative(q)?))).collect::<Result<Vec<_>>>()?)
        }
        _ => return Err(Error::Domain("t-derivative is only available for the Gaussian kinds".into())),
    })
}

fn times_t(p: &Profile) -> Result<Profile> {
    Ok(match p {
        Profile::Gaussian { a, b } => Profile::GaussianMoment { a: *a, b: *b, m: 1 },
        Profile::GaussianMoment { a, b, m } => Profile::GaussianMoment { a: *a, b: *b, m: m + 1 },
        Profile::Combination(v) => Profile::Combination(v.iter().map(|(c, q)| Ok((*c, times_t(q)?))).collect::<Result<Vec<_>>>()?),
        _ => return Err(Error::Domain("t-multiplication is only available for the Gaussian kinds".into())),
    })
}
