use super::function::RadialFunction;
use crate::error::{Error, Result};
use crate::geometry::{integrate_fan, FanIntegral, FanPoint, GridConfig, QuadratureGrid};
use crate::quad::Rule;
use crate::specfn::{log_cnk, LaguerreSweep};
use crate::geometry::sphere_area;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Consecutive negligible terms needed before the k-sum is cut.
const STREAK: usize = 8;

/// Laguerre coefficients R_k(λ) = c_{n,k} ∫ f^{-λ}(z) φ_{k,λ}(z) dz for
/// k = 0, 1, ... at one λ, together with the truncation state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub lambda: f64,
    #[serde(with = "complex_vec")]
    pub coeffs: Vec<Complex64>,
    /// Relative mass of Σ |R_k|²/c_k estimated beyond the last stored k.
    pub tail: f64,
    /// The hard cap on k was reached before the stopping rule fired.
    pub capped: bool,
}

/// Radial rule on which f^{-λ}(|z|) is integrated against φ_{k,λ}.
pub fn radial_rule(f: &RadialFunction, cfg: &GridConfig) -> Rule {
    let rm = cfg.r_max.unwrap_or_else(|| f.r_max());
    Rule::graded(0.0, rm, &f.r_breaks(), cfg.r_width, cfg.order, 8)
}

/// Coefficients at one λ. With `k_fixed` the sweep runs exactly that many
/// terms; otherwise it stops once `STREAK` consecutive terms of Σ |R_k|²/c_k
/// fall under `coeff_tol` times the running sum, or at `k_max`.
pub fn coefficients_at(f: &RadialFunction, lambda: f64, cfg: &GridConfig, rule: &Rule, k_fixed: Option<usize>) -> Result<CoefficientRow> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::Domain("Laguerre coefficients need a finite nonzero lambda".into()));
    }
    let n = f.n;
    let omega = sphere_area(n);
    let l = lambda.abs();
    let mut g_re = Vec::with_capacity(rule.len());
    let mut g_im = Vec::with_capacity(rule.len());
    let mut xs = Vec::with_capacity(rule.len());
    for (&r, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = f.central_fourier(-lambda, r) * (omega * r.powi(2 * n as i32 - 1) * w);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite(format!("f^(-λ) at r = {r}")));
        }
        g_re.push(v.re);
        g_im.push(v.im);
        xs.push(l * r * r / 2.0);
    }
    let mut sweep = LaguerreSweep::new(n as f64 - 1.0, xs);
    let mut vals = Vec::new();
    let mut coeffs = Vec::new();
    let mut terms = Vec::new();
    let mut sum = 0.0;
    let mut streak = 0;
    let cap = k_fixed.unwrap_or(cfg.k_max.max(1));
    loop {
        let k = coeffs.len();
        if k >= cap {
            break;
        }
        sweep.values(&mut vals);
        let (mut re, mut im) = (0.0, 0.0);
        for j in 0..vals.len() {
            re += g_re[j] * vals[j];
            im += g_im[j] * vals[j];
        }
        let lc = log_cnk(n, k);
        let c = lc.exp();
        let rk = Complex64::new(re * c, im * c);
        let term = rk.norm_sqr() * (-lc).exp();
        coeffs.push(rk);
        terms.push(term);
        sum += term;
        if k_fixed.is_none() {
            if term <= cfg.coeff_tol * sum {
                streak += 1;
            } else {
                streak = 0;
            }
            if streak >= STREAK && k + 1 >= STREAK {
                return Ok(CoefficientRow { lambda, coeffs, tail: cfg.coeff_tol * STREAK as f64, capped: false });
            }
        }
        sweep.advance();
    }
    let tail = tail_estimate(&terms, sum);
    Ok(CoefficientRow { lambda, coeffs, tail, capped: k_fixed.is_none() })
}

/// Geometric extrapolation of the remaining terms from the last twenty.
fn tail_estimate(terms: &[f64], sum: f64) -> f64 {
    let m = terms.len();
    if m < 21 || sum == 0.0 {
        return 0.0;
    }
    let (a, b) = (terms[m - 21], terms[m - 1]);
    if a <= 0.0 || b <= 0.0 {
        return 0.0;
    }
    let q = (b / a).powf(1.0 / 20.0);
    if q >= 1.0 {
        return 1.0;
    }
    (b * q / (1.0 - q)) / sum
}

/// Laguerre coefficients of f on a symmetric λ rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralTable {
    pub n: usize,
    pub function: String,
    pub lambda: Rule,
    pub rows: Vec<CoefficientRow>,
    pub config: GridConfig,
}

impl SpectralTable {
    /// Builds on the λ rule implied by the function and the config.
    pub fn build(f: &RadialFunction, cfg: &GridConfig) -> Result<Self> {
        let lm = cfg
            .lambda_max
            .or_else(|| f.lambda_extent())
            .ok_or_else(|| Error::Config(format!("{} needs an explicit lambda_max", f.label())))?;
        let rule = QuadratureGrid::lambda_rule(lm, cfg.lambda_panels, cfg.lambda_order);
        Self::build_on(f, cfg, rule)
    }

    pub fn build_on(f: &RadialFunction, cfg: &GridConfig, lambda: Rule) -> Result<Self> {
        cfg.validate()?;
        let rr = radial_rule(f, cfg);
        Self::build_with(f, cfg, lambda, |l| coefficients_at(f, l, cfg, &rr, None))
    }

    /// Same λ nodes and the same number of k terms per node as `like`.
    pub fn build_matching(f: &RadialFunction, cfg: &GridConfig, like: &SpectralTable) -> Result<Self> {
        if f.n != like.n {
            return Err(Error::Dimension(like.n, f.n));
        }
        let rr = radial_rule(f, cfg);
        let counts: Vec<usize> = like.rows.iter().map(|r| r.coeffs.len()).collect();
        let lambda = like.lambda.clone();
        let idx = |l: f64| lambda.nodes.iter().position(|x| *x == l).unwrap();
        let rows: Result<Vec<CoefficientRow>> = {
            use rayon::prelude::*;
            lambda
                .nodes
                .par_iter()
                .map(|&l| {
                    let mut row = coefficients_at(f, l, cfg, &rr, Some(counts[idx(l)]))?;
                    row.tail = like.rows[idx(l)].tail;
                    Ok(row)
                })
                .collect()
        };
        Ok(Self { n: f.n, function: f.label(), lambda: like.lambda.clone(), rows: rows?, config: cfg.clone() })
    }

    fn build_with<C>(f: &RadialFunction, cfg: &GridConfig, lambda: Rule, coeff: C) -> Result<Self>
    where
        C: Fn(f64) -> Result<CoefficientRow> + Sync,
    {
        use rayon::prelude::*;
        let rows: Result<Vec<CoefficientRow>> = lambda.nodes.par_iter().map(|&l| coeff(l)).collect();
        Ok(Self { n: f.n, function: f.label(), lambda, rows: rows?, config: cfg.clone() })
    }

    pub fn coeff(&self, i: usize, k: usize) -> Complex64 {
        self.rows[i].coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn k_count(&self, i: usize) -> usize {
        self.rows[i].coeffs.len()
    }

    pub fn max_k(&self) -> usize {
        self.rows.iter().map(|r| r.coeffs.len()).max().unwrap_or(0)
    }

    pub fn any_capped(&self) -> bool {
        self.rows.iter().any(|r| r.capped)
    }

    /// f̃(a, w) = c_{n,k} R_k(λ) φ_{k,λ}(w) at node i.
    pub fn transform_at(&self, i: usize, k: usize, w: f64) -> Complex64 {
        let l = self.lambda.nodes[i];
        let phi = crate::specfn::laguerre_fn(k, self.n, l, w).unwrap_or(0.0);
        self.coeff(i, k) * (log_cnk(self.n, k).exp() * phi)
    }

    /// ∫_Ω m(a) ∫ |f̃(a, w)|² dw dν₂(a), with the w-integral in closed form.
    pub fn weighted_l2<M: Fn(&FanPoint) -> f64 + Sync>(&self, m: M) -> FanIntegral {
        integrate_fan(
            self.n,
            &self.lambda,
            |i| self.k_count(i),
            |i| self.rows[i].tail,
            |i, a| {
                let c = log_cnk(self.n, a.k).exp();
                m(a) * c * c * self.coeff(i, a.k).norm_sqr() * a.laguerre_l2()
            },
        )
    }

    /// ∫_Ω m(a) ∫ f̃(a, w) conj(g̃(a, w)) dw dν₂(a) for tables on the same nodes.
    pub fn weighted_inner<M>(&self, other: &SpectralTable, m: M) -> Result<Complex64>
    where
        M: Fn(&FanPoint) -> Complex64 + Sync,
    {
        if self.lambda != other.lambda {
            return Err(Error::Config("inner product needs tables on the same lambda nodes".into()));
        }
        let re = integrate_fan(self.n, &self.lambda, |i| self.k_count(i).min(other.k_count(i)), |_| 0.0, |i, a| {
            let c = log_cnk(self.n, a.k).exp();
            (m(a) * self.coeff(i, a.k) * other.coeff(i, a.k).conj()).re * c * c * a.laguerre_l2()
        });
        let im = integrate_fan(self.n, &self.lambda, |i| self.k_count(i).min(other.k_count(i)), |_| 0.0, |i, a| {
            let c = log_cnk(self.n, a.k).exp();
            (m(a) * self.coeff(i, a.k) * other.coeff(i, a.k).conj()).im * c * c * a.laguerre_l2()
        });
        Ok(Complex64::new(re.value, im.value))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("table serialises")
    }
}

/// Complex vectors as arrays of [re, im] pairs.
mod complex_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw: Vec<[f64; 2]> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}
