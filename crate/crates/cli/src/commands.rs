use crate::config::{CfgResult, ConfigError, Params};
use serde_json::json;
use strichartz::conditions::{
    necessary_radial_sup, pitt_empirical, pitt_sufficient_sup, power_weight_necessary, power_weight_sufficient, uncertainty_check, ExponentPair, PowerVerdict,
    SupEstimate,
};
use strichartz::geometry::HPoint;
use strichartz::paley::{layer_cake_bound_check, paley_check, weak_l1_quasinorm, FanWeight};
use strichartz::rearrange::{decreasing_rearrangement, log_grid, WeightKind, WeightSpec};
use strichartz::report::{Check, VerificationReport};
use strichartz::sublaplacian::{constants, verify_hardy, verify_pitt_dual, WeightVariant};
use strichartz::transform::{inversion_check, plancherel_check, Profile, RadialFunction};
use strichartz::Error;

/// A finished command: the report plus CSV curves keyed by file stem.
pub struct Outcome {
    pub report: VerificationReport,
    pub curves: Vec<(String, String)>,
}

impl Outcome {
    fn new(report: VerificationReport) -> Self {
        Self { report, curves: Vec::new() }
    }
}

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    /// A computation that could not produce a finite answer.
    Numerical(Error),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonFinite(_) | Error::Divergent(_) => RunError::Numerical(e),
            other => RunError::Config(ConfigError(other.to_string())),
        }
    }
}

pub type RunResult = std::result::Result<Outcome, RunError>;

const FAMILY: &[&str] = &["family", "a", "b"];
const EXPONENTS: &[&str] = &["p", "q"];
const S_GRID: &[&str] = &["s_lo", "s_hi", "s_count"];

pub struct Command {
    pub name: &'static str,
    pub about: &'static str,
    keys: &'static [&'static [&'static str]],
    run: fn(&Params) -> RunResult,
}

impl Command {
    pub fn keys(&self) -> Vec<&'static str> {
        self.keys.iter().flat_map(|k| k.iter().copied()).collect()
    }

    pub fn run(&self, p: &Params) -> RunResult {
        (self.run)(p)
    }
}

pub const COMMANDS: &[Command] = &[
    Command { name: "plancherel", about: "compare ||f||_2^2 with the fan side", keys: &[FAMILY], run: plancherel },
    Command { name: "inversion", about: "rebuild f from its transform at sample points", keys: &[FAMILY, &["points"]], run: inversion },
    Command {
        name: "pitt-sufficient",
        about: "rearrangement supremum for power weights",
        keys: &[&["alpha", "rho", "sigma"], EXPONENTS, S_GRID],
        run: pitt_sufficient,
    },
    Command {
        name: "pitt-necessary",
        about: "ray-k necessary supremum for power weights",
        keys: &[&["k", "alpha", "rho", "sigma"], EXPONENTS, S_GRID],
        run: pitt_necessary,
    },
    Command { name: "power-weights", about: "closed-form power weight conditions", keys: &[&["alpha", "rho", "sigma", "mode"], EXPONENTS], run: power_weights },
    Command {
        name: "rearrange",
        about: "decreasing rearrangement of a weight",
        keys: &[&["weight", "alpha", "rho", "sigma", "c", "t_lo", "t_hi", "t_count"]],
        run: rearrange,
    },
    Command { name: "uncertainty", about: "uncertainty inequality with unit weights", keys: &[FAMILY], run: uncertainty },
    Command {
        name: "paley",
        about: "layer-cake bound and Paley ratio for a fan weight",
        keys: &[&["a", "b", "rho", "scale", "p", "sigma_lo", "sigma_hi", "sigma_count", "bound_tol"]],
        run: paley,
    },
    Command { name: "constants", about: "explicit constants for the sublaplacian", keys: &[&["s"]], run: constants_cmd },
    Command { name: "hardy", about: "Hardy and dual Pitt margins", keys: &[&["s", "variant", "delta", "vs_norm", "mode"], FAMILY], run: hardy },
];

pub fn find(name: &str) -> Option<&'static Command> {
    COMMANDS.iter().find(|c| c.name == name)
}

fn pq(p: &Params) -> CfgResult<ExponentPair> {
    let (a, b) = (p.f64("p", 2.0)?, p.f64("q", 2.0)?);
    ExponentPair::new(a, b).map_err(|e| ConfigError(e.to_string()))
}

fn family(p: &Params, n: usize) -> RunResult2<Vec<RadialFunction>> {
    let kind = p.choice("family", "gaussian", &["gaussian", "moment"])?;
    let members: Vec<(f64, f64)> = if p.has("a") || p.has("b") {
        vec![(p.positive("a", 1.0)?, p.positive("b", 1.0)?)]
    } else if kind == "gaussian" {
        vec![(1.0, 1.0), (0.5, 2.0), (2.0, 0.5)]
    } else {
        vec![(1.0, 1.0), (0.7, 1.5)]
    };
    let mut out = Vec::new();
    for (a, b) in members {
        out.push(if kind == "gaussian" {
            RadialFunction::gaussian(n, a, b)?
        } else {
            // t^2 times the Gaussian
            RadialFunction::new(n, Profile::GaussianMoment { a, b, m: 2 })?
        });
    }
    Ok(out)
}

type RunResult2<T> = std::result::Result<T, RunError>;

fn trace_csv(s: &SupEstimate) -> String {
    let mut out = String::from("s,value\n");
    for (x, v) in s.s.iter().zip(&s.values) {
        out.push_str(&format!("{x:.17e},{v:.17e}\n"));
    }
    out
}

fn plancherel(p: &Params) -> RunResult {
    let n = p.n()?;
    let tol = p.tol(1e-6)?;
    let cfg = p.grid()?;
    let mut rep = VerificationReport::new("plancherel");
    let mut worst = 0.0f64;
    for f in family(p, n)? {
        let one = plancherel_check(&f, &cfg, tol)?;
        worst = worst.max(one.margin.map(|m| -m).unwrap_or(0.0));
        let mut one = one;
        one.name = f.label();
        rep.merge(one);
    }
    rep.record("max_relative_error", worst);
    Ok(Outcome::new(rep))
}

fn inversion(p: &Params) -> RunResult {
    let n = p.n()?;
    let tol = p.tol(1e-4)?;
    let count = p.count("points", 12, 2)?;
    let cfg = p.grid()?;
    let pts: Vec<HPoint> = (0..count)
        .map(|i| {
            let x = i as f64 / (count - 1) as f64;
            let mut z = vec![0.0; 2 * n];
            z[0] = 1.5 * x;
            HPoint::new(z, 2.0 * x - 1.0)
        })
        .collect::<strichartz::Result<_>>()?;
    let mut rep = VerificationReport::new("inversion");
    let mut curve = String::from("function,r,t,exact,reconstructed\n");
    for f in family(p, n)? {
        let res = inversion_check(&f, &pts, &cfg)?;
        rep.check(Check::at_most(format!("{}/max_abs_error", f.label()), res.max_abs_error, tol));
        for ((pt, e), r) in res.points.iter().zip(&res.exact).zip(&res.reconstructed) {
            curve.push_str(&format!("{},{:.17e},{:.17e},{e:.17e},{r:.17e}\n", f.label(), pt.z_norm(), pt.t));
        }
    }
    Ok(Outcome { report: rep, curves: vec![("inversion_points".into(), curve)] })
}

fn fan_weight(p: &Params, n: usize) -> RunResult2<WeightSpec> {
    let rho = p.positive("rho", 1.25)?;
    Ok(match p.opt_f64("sigma")? {
        Some(s) => WeightSpec::usigma_rho(n, s, rho)?,
        None => WeightSpec::urho(n, rho)?,
    })
}

fn s_grid(p: &Params, lo: f64, hi: f64, count: usize) -> CfgResult<(f64, f64, usize)> {
    let (a, b, c) = (p.positive("s_lo", lo)?, p.positive("s_hi", hi)?, p.count("s_count", count, 3)?);
    if a >= b {
        return Err(ConfigError(format!("s_lo must be below s_hi, got {a} and {b}")));
    }
    Ok((a, b, c))
}

fn record_verdict(rep: &mut VerificationReport, key: &str, v: &PowerVerdict) {
    rep.record(key, v.to_json());
}

fn pitt_sufficient(p: &Params) -> RunResult {
    let n = p.n()?;
    let alpha = p.positive("alpha", 1.0)?;
    let u = fan_weight(p, n)?;
    let pq = pq(p)?;
    let (lo, hi, count) = s_grid(p, 1e-6, 1e6, 121)?;
    let ts = log_grid(lo, hi, count);
    let v_inv = decreasing_rearrangement(&WeightSpec::valpha(n, alpha)?, &ts)?;
    let u_star = decreasing_rearrangement(&u, &ts)?;
    let mut rep = VerificationReport::new("pitt_sufficient");
    if u_star.divergent || v_inv.divergent {
        rep.check(Check::flag("rearrangements finite", false));
        return Ok(Outcome::new(rep));
    }
    let sup = pitt_sufficient_sup(&u_star.table, &v_inv.table, pq)?;
    rep.constant = Some(sup.value());
    rep.check(Check::flag("supremum finite", sup.finite).with_detail(format!("end slopes {:.3e}, {:.3e}", sup.low_slope, sup.high_slope)));
    rep.record("sup", sup.sup);
    rep.record("argmax", sup.argmax);
    rep.record("low_slope", sup.low_slope);
    rep.record("high_slope", sup.high_slope);
    let sigma = p.opt_f64("sigma")?;
    record_verdict(&mut rep, "closed_form", &power_weight_sufficient(n, pq, alpha, p.f64("rho", 1.25)?, sigma));
    Ok(Outcome { curves: vec![("pitt_sufficient_trace".into(), trace_csv(&sup))], report: rep })
}

fn pitt_necessary(p: &Params) -> RunResult {
    let n = p.n()?;
    let k = p.usize("k", 0)?;
    let alpha = p.positive("alpha", 1.0)?;
    let u = fan_weight(p, n)?;
    let pq = pq(p)?;
    let grid = s_grid(p, 1e-3, 1e3, 60)?;
    let res = necessary_radial_sup(k, &u, &WeightSpec::valpha(n, alpha)?, pq, grid)?;
    let mut rep = VerificationReport::new("pitt_necessary");
    rep.constant = Some(res.sup.value());
    rep.check(Check::flag("supremum finite", res.verdict).with_detail(format!("end slopes {:.3e}, {:.3e}", res.sup.low_slope, res.sup.high_slope)));
    rep.record("k", res.k);
    rep.record("beta_k", res.beta_k);
    rep.record("b_k", res.b_k);
    rep.record("m_kn", res.m_kn);
    rep.record("sup", res.sup.sup);
    let sigma = p.opt_f64("sigma")?;
    record_verdict(&mut rep, "closed_form", &power_weight_necessary(n, pq, alpha, p.f64("rho", 1.25)?, sigma));
    Ok(Outcome { curves: vec![("pitt_necessary_trace".into(), trace_csv(&res.sup))], report: rep })
}

fn power_weights(p: &Params) -> RunResult {
    let n = p.n()?;
    let alpha = p.f64("alpha", 1.0)?;
    let rho = p.f64("rho", 1.25)?;
    let sigma = p.opt_f64("sigma")?;
    let pq = pq(p)?;
    let mode = p.choice("mode", "sufficient", &["sufficient", "necessary", "both"])?;
    let mut rep = VerificationReport::new("power_weights");
    let mut add = |label: &str, v: PowerVerdict| {
        for c in &v.constraints {
            let mut c = c.clone();
            c.name = format!("{label}: {}", c.name);
            rep.checks.push(c);
        }
        if let Some(case) = v.case {
            rep.record(&format!("{label}_case"), case);
        }
    };
    if mode != "necessary" {
        add("sufficient", power_weight_sufficient(n, pq, alpha, rho, sigma));
    }
    if mode != "sufficient" {
        add("necessary", power_weight_necessary(n, pq, alpha, rho, sigma));
    }
    Ok(Outcome::new(rep))
}

fn rearrange(p: &Params) -> RunResult {
    let n = p.n()?;
    let weight = p.choice("weight", "urho", &["valpha", "urho", "usigma_rho", "constant"])?;
    let w = match weight.as_str() {
        "valpha" => WeightSpec::valpha(n, p.positive("alpha", 1.0)?)?,
        "urho" => WeightSpec::urho(n, p.positive("rho", 1.25)?)?,
        "usigma_rho" => WeightSpec::usigma_rho(n, p.positive("sigma", 1.0)?, p.positive("rho", 0.5)?)?,
        _ => WeightSpec::new(n, WeightKind::Constant { c: p.positive("c", 1.0)? })?,
    };
    let (lo, hi, count) = (p.positive("t_lo", 1e-6)?, p.positive("t_hi", 1e6)?, p.count("t_count", 121, 2)?);
    if lo >= hi {
        return Err(ConfigError(format!("t_lo must be below t_hi, got {lo} and {hi}")).into());
    }
    let table = decreasing_rearrangement(&w, &log_grid(lo, hi, count))?.with_fit(lo, hi);
    let mut rep = VerificationReport::new("rearrange");
    rep.check(Check::flag("distribution finite", !table.divergent));
    rep.check(Check::flag("non-increasing", table.is_non_increasing()));
    rep.record("weight", &w);
    rep.record("exactness", table.exactness);
    rep.record("fit", table.fit);
    Ok(Outcome { curves: vec![("rearrangement".into(), table.to_csv())], report: rep })
}

fn uncertainty(p: &Params) -> RunResult {
    let n = p.n()?;
    let tol = p.tol(1e-6)?;
    let cfg = p.grid()?;
    let one = WeightSpec::one(n);
    let pq = ExponentPair::new(2.0, 2.0)?;
    let fam = family(p, n)?;
    let c = pitt_empirical(&fam, &one, &one, pq, &cfg)?.constant;
    let mut rep = VerificationReport::new("uncertainty");
    rep.constant = Some(c);
    for f in &fam {
        let u = uncertainty_check(f, &one, &one, pq, c, &cfg)?;
        let l = f.label();
        rep.check(Check::at_most(format!("{l}/identity residual"), u.identity_residual, tol));
        rep.check(Check::at_least(format!("{l}/margin"), u.margin / u.norm_sq, -tol).with_detail("relative to ||f||_2^2"));
        rep.record(&l, &u);
    }
    Ok(Outcome::new(rep))
}

fn paley(p: &Params) -> RunResult {
    let n = p.n()?;
    let tol = p.tol(1e-6)?;
    let cfg = p.grid()?;
    let rho = p.positive("rho", 4.0 * n as f64 + 1.0)?;
    let phi = FanWeight::power_decay(n, rho)?.scaled(p.positive("scale", 1.0)?)?;
    let pp = p.f64("p", 1.5)?;
    let sig = (p.positive("sigma_lo", 1e-3)?, p.positive("sigma_hi", 1e3)?, p.count("sigma_count", 61, 2)?);
    let bound_tol = p.positive("bound_tol", 0.05)?;
    let mut rep = VerificationReport::new("paley");
    let quasi = weak_l1_quasinorm(&phi);
    rep.check(Check::flag("weight in weak L1", phi.weak_l1() && quasi.is_finite()));
    rep.record("quasinorm", quasi);
    if !phi.weak_l1() {
        return Ok(Outcome::new(rep));
    }
    let cake = layer_cake_bound_check(&phi, &log_grid(sig.0, sig.1, sig.2), bound_tol)?;
    rep.check(Check::flag("layer-cake bound", cake.bound_holds).with_detail(format!("max ratio {:.6e} against 2K = {:.6e}", cake.max_ratio, 2.0 * cake.constant)));
    rep.check(Check::at_most("layer-cake identity error", cake.max_identity_error, 1e-4));
    let mut curve = String::from("sigma,ratio\n");
    for (s, r) in cake.sigma.iter().zip(&cake.ratios) {
        curve.push_str(&format!("{s:.17e},{r:.17e}\n"));
    }
    let f = RadialFunction::gaussian(n, p.positive("a", 1.0)?, p.positive("b", 1.0)?)?;
    let pal = paley_check(&f, &phi, pp, &cfg)?;
    rep.lhs = Some(pal.lhs);
    rep.rhs = Some(pal.norm);
    rep.check(Check::flag("ratio finite", pal.ratio.is_finite() && pal.ratio > 0.0));
    if pp == 2.0 {
        rep.check(Check::at_most("p = 2 ratio equals 1", (pal.ratio - 1.0).abs(), tol));
    }
    rep.record("ratio", pal.ratio);
    rep.record("captured", pal.captured);
    Ok(Outcome { curves: vec![("layer_cake".into(), curve)], report: rep })
}

fn constants_cmd(p: &Params) -> RunResult {
    let n = p.n()?;
    let s = p.f64("s", 0.5)?;
    let tol = p.tol(1e-10)?;
    let c = constants(n, s)?;
    let mut rep = VerificationReport::new("constants");
    let closed = c.bc_closed_form();
    rep.check(Check::at_most("b*c relative error", (c.b_ns * c.c_ns - closed).abs() / closed, tol));
    rep.check(Check::at_most("sharp lower <= upper", c.sharp_lower, c.sharp_upper));
    rep.record("constants", c.to_json());
    Ok(Outcome::new(rep))
}

fn variant(p: &Params) -> CfgResult<WeightVariant> {
    let name = p.choice(
        "variant",
        "homogeneous_norm",
        &["trace_hardy", "macdonald", "homogeneous_norm", "non_homogeneous", "non_homogeneous_fractional", "homogeneous"],
    )?;
    Ok(match name.as_str() {
        "trace_hardy" => WeightVariant::TraceHardy,
        "macdonald" => WeightVariant::Macdonald,
        "homogeneous_norm" => WeightVariant::HomogeneousNorm,
        "non_homogeneous" => WeightVariant::NonHomogeneous { delta: p.positive("delta", 1.0)? },
        "non_homogeneous_fractional" => WeightVariant::NonHomogeneousFractional { delta: p.positive("delta", 1.0)? },
        _ => WeightVariant::Homogeneous { vs_norm: p.positive("vs_norm", 1.0)? },
    })
}

fn hardy(p: &Params) -> RunResult {
    let n = p.n()?;
    let s = p.f64("s", 0.5)?;
    let v = variant(p)?;
    let mode = p.choice("mode", "both", &["hardy", "pitt", "both"])?;
    let cfg = p.grid()?;
    let mut rep = VerificationReport::new("hardy");
    for f in family(p, n)? {
        if mode != "pitt" {
            let mut one = verify_hardy(&f, s, v.clone(), &cfg)?;
            one.name = format!("{}/hardy", f.label());
            rep.merge(one);
        }
        if mode != "hardy" {
            let mut one = verify_pitt_dual(&f, s, v.clone(), &cfg)?;
            one.name = format!("{}/pitt_dual", f.label());
            rep.merge(one);
        }
    }
    rep.record("variant", json!(v));
    Ok(Outcome::new(rep))
}
