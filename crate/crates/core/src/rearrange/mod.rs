//! Distribution functions and decreasing rearrangements on (H^n, dz dt) and
//! on the fan (Ω × C^n, dν₂ dw).

mod tabulated;
mod weights;

pub use tabulated::{Tabulated, Tail};
pub use weights::{
    binom_square_series, distribution, fan_ball_constant, fan_box_constant, sublevel_volume, urho_containment_bound,
    usigma_rho_constant, Distribution, Domain, Exactness, WeightKind, WeightSpec,
};

use crate::error::{Error, Result};
use crate::geometry::{integrate_hn_radial, sphere_area, w_rule, FanPoint, GridConfig};
use crate::specfn::{log_cnk, LaguerreSweep};
use crate::transform::{RadialFunction, SpectralTable};
use serde::{Deserialize, Serialize};
use weights::edge_integral;

/// Linear-in-log fit of a rearrangement over a window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RearrangementTable {
    pub domain: Domain,
    pub exactness: Exactness,
    /// The distribution is infinite at every level; `table` is then unusable.
    pub divergent: bool,
    pub table: Tabulated,
    pub fit: Option<LogLogFit>,
}

impl RearrangementTable {
    pub fn value(&self, t: f64) -> f64 {
        if self.divergent {
            f64::INFINITY
        } else {
            self.table.value(t)
        }
    }

    pub fn with_fit(mut self, lo: f64, hi: f64) -> Self {
        self.fit = self.table.fit_loglog(lo, hi).map(|(slope, intercept)| LogLogFit { slope, intercept, lo, hi });
        self
    }

    pub fn is_non_increasing(&self) -> bool {
        self.table.v.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,value\n");
        for (t, v) in self.table.t.iter().zip(&self.table.v) {
            s.push_str(&format!("{t:.17e},{v:.17e}\n"));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("table serialises")
    }
}

/// Log-spaced points.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1).max(1) as f64).exp()).collect()
}

fn bisect_decreasing<F: Fn(f64) -> f64>(f: F, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    // f non-increasing, f(lo) > target >= f(hi); find the crossing in log space
    for _ in 0..200 {
        if hi / lo - 1.0 < 1e-13 {
            break;
        }
        let mid = (lo * hi).sqrt();
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// w*(t) = inf{s : d(s) <= t} on the given t-grid, by bisection in log s.
pub fn decreasing_rearrangement(w: &WeightSpec, ts: &[f64]) -> Result<RearrangementTable> {
    if let WeightKind::Constant { c } = w.kind {
        return Ok(RearrangementTable {
            domain: Domain::Hn,
            exactness: Exactness::Exact,
            divergent: false,
            table: Tabulated::power(1.0 / c, 0.0),
            fit: None,
        });
    }
    let probe = distribution(w, 1.0)?;
    let domain = w.domain();
    if probe.divergent {
        return Ok(RearrangementTable {
            domain,
            exactness: probe.exactness,
            divergent: true,
            table: Tabulated::power(0.0, 0.0),
            fit: None,
        });
    }
    let d = |s: f64| distribution(w, s).map(|x| x.value).unwrap_or(f64::INFINITY);
    let mut values = Vec::with_capacity(ts.len());
    for &t in ts {
        // bracket: d(lo) > t >= d(hi)
        let mut lo = 1.0;
        let mut hi = 1.0;
        while d(lo) <= t && lo > 1e-300 {
            lo *= 1e-3;
        }
        while d(hi) > t && hi < 1e300 {
            hi *= 1e3;
        }
        if d(lo) <= t {
            values.push(0.0);
            continue;
        }
        values.push(bisect_decreasing(&d, t, lo, hi));
    }
    // power-law ends taken from the outermost node pairs
    let m = ts.len();
    let slope = |i: usize, j: usize| {
        if values[i] > 0.0 && values[j] > 0.0 {
            (values[j] / values[i]).ln() / (ts[j] / ts[i]).ln()
        } else {
            0.0
        }
    };
    let (head, tail) = if m >= 2 { (slope(0, 1), Tail::Power(slope(m - 2, m - 1))) } else { (0.0, Tail::Power(0.0)) };
    Ok(RearrangementTable { domain, exactness: probe.exactness, divergent: false, table: Tabulated::new(ts.to_vec(), values, head, tail)?, fit: None })
}

/// Level sets of |f| for a radial function on H^n.
struct HnLevels<'a> {
    f: &'a RadialFunction,
    r: Vec<f64>,
    /// max_t |f(r_i, t)|
    g: Vec<f64>,
    t: Vec<f64>,
}

impl<'a> HnLevels<'a> {
    fn new(f: &'a RadialFunction) -> Self {
        let rm = f.r_max();
        let tm = f.t_max();
        let nr = 400;
        let nt = 401;
        let mut r: Vec<f64> = (0..=nr).map(|i| rm * i as f64 / nr as f64).collect();
        let mut t: Vec<f64> = (0..nt).map(|j| -tm + 2.0 * tm * j as f64 / (nt - 1) as f64).collect();
        for b in f.r_breaks() {
            r.push(b);
        }
        for b in f.t_breaks() {
            t.push(b);
        }
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        t.sort_by(|a, b| a.partial_cmp(b).unwrap());
        r.dedup();
        t.dedup();
        let mut s = Self { f, r, g: Vec::new(), t };
        s.g = s.r.iter().map(|&ri| s.max_t(ri)).collect();
        s
    }

    fn max_t(&self, r: f64) -> f64 {
        self.t.iter().map(|&t| self.f.value(r, t).abs()).fold(0.0, f64::max)
    }

    /// |{t : |f(r, t)| > M}|
    fn t_measure(&self, r: f64, m: f64) -> f64 {
        let h = |t: f64| self.f.value(r, t).abs() - m;
        let mut total = 0.0;
        let mut start: Option<f64> = None;
        let mut prev_t = self.t[0];
        let mut prev = h(prev_t);
        if prev > 0.0 {
            start = Some(prev_t);
        }
        for &t in &self.t[1..] {
            let cur = h(t);
            if (prev > 0.0) != (cur > 0.0) {
                let x = crossing(&h, prev_t, t);
                match start.take() {
                    Some(s) => total += x - s,
                    None => start = Some(x),
                }
            }
            prev = cur;
            prev_t = t;
        }
        if let Some(s) = start {
            total += prev_t - s;
        }
        total
    }

    /// Radial intervals on which the t-section is nonempty.
    fn r_intervals(&self, m: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut start: Option<f64> = if self.g[0] > m { Some(0.0) } else { None };
        for i in 1..self.r.len() {
            let (a, b) = (self.g[i - 1] > m, self.g[i] > m);
            if a != b {
                let x = crossing(&|r| self.max_t(r) - m, self.r[i - 1], self.r[i]);
                match start.take() {
                    Some(s) => out.push((s, x)),
                    None => start = Some(x),
                }
            }
        }
        if let Some(s) = start {
            out.push((s, *self.r.last().unwrap()));
        }
        out
    }

    fn distribution(&self, m: f64) -> f64 {
        self.r_intervals(m).into_iter().map(|(a, b)| edge_integral(self.f.n, a, b, |r| self.t_measure(r, m))).sum()
    }
}

/// Sign change of h in [a, b] by bisection.
fn crossing<H: Fn(f64) -> f64>(h: &H, mut a: f64, mut b: f64) -> f64 {
    let pa = h(a) > 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if (h(mid) > 0.0) == pa {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// μ{|f| > M} on (H^n, dz dt).
pub fn distribution_radial(f: &RadialFunction, m: f64) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::Domain(format!("distribution level must be positive, got {m}")));
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    Ok(HnLevels::new(f).distribution(m))
}

/// f* for a radial function on H^n, read off level sets: for M_j running
/// down from sup|f| the pair (d(M_j), M_j) lies on the graph of f*.
pub fn rearrange_radial(f: &RadialFunction, levels: usize) -> Result<RearrangementTable> {
    if f.is_zero() {
        return Ok(RearrangementTable {
            domain: Domain::Hn,
            exactness: Exactness::Exact,
            divergent: false,
            table: Tabulated::indicator(0.0, 1e-300),
            fit: None,
        });
    }
    let lv = HnLevels::new(f);
    let top = lv.g.iter().copied().fold(0.0, f64::max);
    // M = top·e^{-x}, x log-spaced so both ends of f* are resolved
    let xs = log_grid(1e-9, 37.0, levels);
    let pairs: Vec<(f64, f64)> = {
        use rayon::prelude::*;
        xs.par_iter().map(|x| {
            let m = top * (-x).exp();
            (lv.distribution(m), m)
        })
        .collect()
    };
    table_from_levels(pairs, top)
}

/// Builds a table from (d(M), M) pairs, keeping the right-continuous value
/// where several levels share the same measure.
fn table_from_levels(mut pairs: Vec<(f64, f64)>, top: f64) -> Result<RearrangementTable> {
    pairs.retain(|p| p.0 > 0.0 && p.0.is_finite());
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(b.1.partial_cmp(&a.1).unwrap()));
    let mut t: Vec<f64> = Vec::new();
    let mut v: Vec<f64> = Vec::new();
    for (d, m) in pairs {
        if let Some(&last) = t.last() {
            if d <= last * (1.0 + 1e-12) {
                // same measure: the larger level wins; f*(t) = inf{s : d(s) <= t}
                continue;
            }
        }
        t.push(d);
        v.push(m);
    }
    if t.is_empty() {
        return Err(Error::Domain("no level set of positive measure".into()));
    }
    // the largest level whose set has measure t[i] is the value just before t[i]
    // for a step, so shift values onto the left end of each flat stretch
    let _ = top;
    Ok(RearrangementTable {
        domain: Domain::Hn,
        exactness: Exactness::Exact,
        divergent: false,
        table: Tabulated::new(t, v, 0.0, Tail::Zero)?,
        fit: None,
    })
}

/// Point masses (|F|, mass) sampled on Ω × C^n; sorted by value, they give the
/// distribution and rearrangement of F under dν₂ dw directly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FanAtoms {
    /// Descending.
    pub values: Vec<f64>,
    /// Cumulative mass, aligned with `values`.
    pub cumulative: Vec<f64>,
    /// Share of ∫|f̃|² carried by the sampled rays.
    pub captured: f64,
}

impl FanAtoms {
    /// Samples |f̃| (times an optional fan weight) on the table's λ nodes, rays
    /// k < `w_k_max` and the w-rule of each node.
    pub fn from_table<W>(table: &SpectralTable, cfg: &GridConfig, weight: W) -> Self
    where
        W: Fn(&FanPoint, f64) -> f64 + Sync,
    {
        use rayon::prelude::*;
        let n = table.n;
        let omega = sphere_area(n);
        let chunks: Vec<(Vec<(f64, f64)>, f64)> = (0..table.lambda.len())
            .into_par_iter()
            .map(|i| {
                let l = table.lambda.nodes[i];
                let kc = table.k_count(i).min(cfg.w_k_max);
                if l == 0.0 || kc == 0 || l.abs() < cfg.w_lambda_min {
                    return (Vec::new(), 0.0);
                }
                let rule = w_rule(n, l, kc - 1, cfg.w_nodes_per_wave);
                let xs: Vec<f64> = rule.nodes.iter().map(|w| l.abs() * w * w / 2.0).collect();
                let mut sweep = LaguerreSweep::new(n as f64 - 1.0, xs);
                let mut vals = Vec::new();
                let mut out = Vec::with_capacity(kc * rule.len());
                let mut l2 = 0.0;
                for k in 0..kc {
                    sweep.values(&mut vals);
                    let a = FanPoint { n, k, lambda: l };
                    let c = log_cnk(n, k).exp();
                    let rk = table.coeff(i, k);
                    let dens = a.nu2_density() * table.lambda.weights[i];
                    l2 += dens * c * c * rk.norm_sqr() * a.laguerre_l2();
                    for (j, (&w, &q)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
                        let v = (rk * (c * vals[j])).norm() * weight(&a, w);
                        let mass = dens * omega * w.powi(2 * n as i32 - 1) * q;
                        out.push((v, mass));
                    }
                    sweep.advance();
                }
                (out, l2)
            })
            .collect();
        let full = table.weighted_l2(|_| 1.0).value;
        let captured_l2: f64 = chunks.iter().map(|c| c.1).sum();
        let mut atoms: Vec<(f64, f64)> = chunks.into_iter().flat_map(|c| c.0).filter(|a| a.1 > 0.0).collect();
        atoms.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut acc = 0.0;
        let mut values = Vec::with_capacity(atoms.len());
        let mut cumulative = Vec::with_capacity(atoms.len());
        for (v, m) in atoms {
            acc += m;
            values.push(v);
            cumulative.push(acc);
        }
        Self { values, cumulative, captured: if full > 0.0 { captured_l2 / full } else { 1.0 } }
    }

    pub fn distribution(&self, m: f64) -> f64 {
        // atoms with value > m form a prefix
        let idx = self.values.partition_point(|v| *v > m);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }

    pub fn rearrangement(&self, t: f64) -> f64 {
        let idx = self.cumulative.partition_point(|c| *c <= t);
        self.values.get(idx).copied().unwrap_or(0.0)
    }

    pub fn table(&self, ts: &[f64]) -> Result<RearrangementTable> {
        let v: Vec<f64> = ts.iter().map(|&t| self.rearrangement(t)).collect();
        Ok(RearrangementTable {
            domain: Domain::Fan,
            exactness: Exactness::Exact,
            divergent: false,
            table: Tabulated::new(ts.to_vec(), v, 0.0, Tail::Zero)?,
            fit: None,
        })
    }
}

/// A functional of f* evaluated on nested level grids and Richardson
/// extrapolated; the log-log interpolation between levels is second order.
fn extrapolated<G: Fn(&RearrangementTable) -> Result<f64>>(f: &RadialFunction, g: G) -> Result<f64> {
    let coarse = g(&rearrange_radial(f, 401)?)?;
    let fine = g(&rearrange_radial(f, 801)?)?;
    if !(coarse.is_finite() && fine.is_finite()) {
        return Ok(fine);
    }
    Ok((4.0 * fine - coarse) / 3.0)
}

/// |∫|f|^p − ∫₀^∞ (f*)^p dt| / ∫|f|^p.
pub fn rearrangement_norm_identity_check(f: &RadialFunction, p: f64, cfg: &GridConfig) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("norm identity needs p >= 1, got {p}")));
    }
    let lhs = f.lp_power(p, cfg)?;
    if lhs == 0.0 {
        return Ok(0.0);
    }
    let rhs = extrapolated(f, |star| Ok(star.table.integral(p, 0.0, 0.0, f64::INFINITY)))?;
    Ok((lhs - rhs).abs() / lhs)
}

/// Margin (∫|fg|^p)^{1/p} − (∫ ((1/g)*)^{-p} (f*)^p dt)^{1/p} for a weight g on H^n.
pub fn two_function_inequality_check(f: &RadialFunction, g: &WeightSpec, p: f64, cfg: &GridConfig) -> Result<f64> {
    if g.domain() != Domain::Hn {
        return Err(Error::Domain("two-function inequality needs a weight on H^n".into()));
    }
    let (r, t) = f.hn_rules(cfg);
    let rhs = integrate_hn_radial(f.n, &r, &t, |r, t| (f.value(r, t) * g.value_hn(r, t)).abs().powf(p))?.powf(1.0 / p);
    if f.is_zero() {
        return Ok(rhs);
    }
    let lhs = extrapolated(f, |fstar| {
        let recip = decreasing_rearrangement(g, &fstar.table.t)?;
        if recip.divergent {
            return Err(Error::Divergent("(1/g)* is infinite".into()));
        }
        Ok(fstar.table.mul_pow(p, &recip.table, -p).integral(1.0, 0.0, 0.0, f64::INFINITY))
    })?;
    Ok(rhs - lhs.powf(1.0 / p))
}
