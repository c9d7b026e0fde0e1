//! Closed-form conditions for the power weights v_α = |(z,t)|^α on H^n and
//! u_ρ, u_{σ,ρ} on the fan.

use super::ExponentPair;
use crate::report::Check;
use serde::{Deserialize, Serialize};

/// Equalities are decided to this absolute tolerance.
pub const EXACT_TOL: f64 = 1e-12;

/// Which branch of the u_{σ,ρ} necessary condition applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NecessaryCase {
    /// The (v_α, u_ρ) pair.
    Rho,
    /// qσ < 2n+1
    Below,
    /// qσ = 2n+1
    Boundary,
    /// qσ > 2n+1
    Above,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerVerdict {
    pub pass: bool,
    pub constraints: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<NecessaryCase>,
}

impl PowerVerdict {
    fn from(constraints: Vec<Check>, case: Option<NecessaryCase>) -> Self {
        Self { pass: constraints.iter().all(|c| c.pass), constraints, case }
    }

    /// Names of the constraints that failed.
    pub fn binding(&self) -> Vec<&str> {
        self.constraints.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("verdict serialises")
    }
}

/// α p' with 0 · ∞ = 0.
fn times_conj(alpha: f64, pp: f64) -> f64 {
    if alpha == 0.0 {
        0.0
    } else {
        alpha * pp
    }
}

fn positivity(alpha: f64, rho: f64, sigma: Option<f64>) -> Vec<Check> {
    let mut c = vec![Check::above("alpha > 0", alpha, 0.0), Check::above("rho > 0", rho, 0.0)];
    if let Some(s) = sigma {
        c.push(Check::above("sigma > 0", s, 0.0));
    }
    c
}

/// The sufficient conditions for (v_α, u_ρ), or (v_α, u_{σ,ρ}) when σ is given.
pub fn power_weight_sufficient(n: usize, pq: ExponentPair, alpha: f64, rho: f64, sigma: Option<f64>) -> PowerVerdict {
    let nf = n as f64;
    let q_dim = 2.0 * (nf + 1.0);
    let mut c = vec![Check::flag("1 < p <= q < inf", pq.p > 1.0 && pq.p <= pq.q && pq.q.is_finite())];
    c.extend(positivity(alpha, rho, sigma));
    c.push(Check::below("alpha p' < 2(n+1)", times_conj(alpha, pq.p_conj()), q_dim));
    let base = -alpha / q_dim + pq.inv_p_conj() - pq.inv_q();
    match sigma {
        None => {
            c.push(Check::below("q rho < 4n+1", pq.q * rho, 4.0 * nf + 1.0));
            c.push(Check::equals("balance", base + rho / (4.0 * nf + 1.0), 0.0, EXACT_TOL));
        }
        Some(s) => {
            c.push(Check::below("rho(2n+1) < 2n sigma", rho * (2.0 * nf + 1.0), 2.0 * nf * s));
            c.push(Check::below("q rho < 2n", pq.q * rho, 2.0 * nf));
            c.push(Check::equals("balance", base + rho / (2.0 * nf), 0.0, EXACT_TOL));
        }
    }
    PowerVerdict::from(c, None)
}

/// The necessary conditions for (v_α, u_ρ), or (v_α, u_{σ,ρ}) when σ is
/// given, the latter split on qσ against 2n+1.
pub fn power_weight_necessary(n: usize, pq: ExponentPair, alpha: f64, rho: f64, sigma: Option<f64>) -> PowerVerdict {
    let nf = n as f64;
    let q = pq.q;
    let mut c = vec![Check::flag("1 < p, q < inf", pq.require_open().is_ok())];
    c.extend(positivity(alpha, rho, sigma));
    c.push(Check::below("alpha p' < 2(n+1)", times_conj(alpha, pq.p_conj()), 2.0 * (nf + 1.0)));
    let case = match sigma {
        None => {
            let mid = -(nf + 1.0) / q - alpha / 2.0 + (nf + 1.0) * pq.inv_p_conj();
            c.push(Check::above("middle > -rho", mid, -rho));
            c.push(Check::below("middle < rho/2", mid, rho / 2.0));
            NecessaryCase::Rho
        }
        Some(s) => {
            c.push(Check::below("q rho < 2n", q * rho, 2.0 * nf));
            let base = -alpha / 2.0 + (nf + 1.0) * pq.inv_p_conj() + (2.0 * nf - q * rho) / (2.0 * q);
            let qs = q * s;
            let edge = 2.0 * nf + 1.0;
            if (qs - edge).abs() <= EXACT_TOL {
                c.push(Check::above("exponent > 0", base, 0.0));
                NecessaryCase::Boundary
            } else if qs < edge {
                c.push(Check::at_least("exponent >= 0", base + (qs - edge) / q, -EXACT_TOL));
                NecessaryCase::Below
            } else {
                c.push(Check::at_least("exponent >= 0", base, -EXACT_TOL));
                NecessaryCase::Above
            }
        }
    };
    PowerVerdict::from(c, Some(case))
}

/// 1/p + 1/q = 1 − (α+β)/Q for weights homogeneous of degrees α (function
/// side) and β (fan side) under the group dilations.
pub fn homogeneity_necessary(alpha_deg: f64, beta_deg: f64, pq: ExponentPair, n: usize) -> PowerVerdict {
    let q_dim = 2.0 * n as f64 + 2.0;
    let lhs = 1.0 / pq.p + 1.0 / pq.q;
    let rhs = 1.0 - (alpha_deg + beta_deg) / q_dim;
    PowerVerdict::from(vec![Check::equals("1/p + 1/q = 1 - (alpha+beta)/Q", lhs, rhs, EXACT_TOL)], None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq(p: f64, q: f64) -> ExponentPair {
        ExponentPair::new(p, q).unwrap()
    }

    #[test]
    fn examples() {
        assert!(power_weight_sufficient(1, pq(2.0, 2.0), 1.0, 1.25, None).pass);
        let v = power_weight_sufficient(1, pq(2.0, 2.0), 2.0, 1.25, None);
        assert!(!v.pass && v.binding().contains(&"alpha p' < 2(n+1)"));
        let z = power_weight_sufficient(1, pq(2.0, 2.0), 0.0, 0.0, None);
        assert!(!z.pass);
        assert!(z.constraints.iter().any(|c| c.name == "balance" && c.pass));
        assert_eq!(z.binding(), vec!["alpha > 0", "rho > 0"]);
        let nec = power_weight_necessary(1, pq(2.0, 2.0), 1.0, 1.25, None);
        assert!(nec.pass);
        assert!(!power_weight_necessary(1, pq(2.0, 2.0), 1.0, 1e-9, None).pass);
        // qσ = 2n+1 picks the strict branch
        let b = power_weight_necessary(1, pq(2.0, 2.0), 0.5, 0.5, Some(1.5));
        assert_eq!(b.case, Some(NecessaryCase::Boundary));
        assert!(homogeneity_necessary(1.0, -1.0, pq(2.0, 2.0), 1).pass);
        assert!(!homogeneity_necessary(1.0, 0.0, pq(2.0, 2.0), 1).pass);
        for &p in &[1.5, 2.0, 3.0, 7.0] {
            assert!(homogeneity_necessary(0.0, 0.0, pq(p, p / (p - 1.0)), 2).pass);
        }
    }
}
