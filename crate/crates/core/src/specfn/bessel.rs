use super::gamma::lgamma_pos;
use super::laguerre::bisect;
use crate::quad::Rule;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BesselZero {
    pub nu: f64,
    pub s: usize,
    pub value: f64,
}

const SERIES_LIMIT: f64 = 10.0;

/// J_ν(x) for real ν >= 0, x >= 0.
///
/// The power series is used up to x = 10, where its cancellation is still
/// harmless; beyond that the Schläfli integral is summed with Gauss–Legendre
/// panels sized to the oscillation.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        series(nu, x)
    } else {
        schlafli(nu, x)
    }
}

fn series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = (nu * half.ln() - lgamma_pos(nu + 1.0)).exp();
    let q = half * half;
    let mut sum = term;
    for k in 0..500 {
        let kf = k as f64;
        term *= -q / ((kf + 1.0) * (kf + nu + 1.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && kf > q.sqrt() {
            break;
        }
    }
    sum
}

fn schlafli(nu: f64, x: f64) -> f64 {
    let panels = ((x + nu) / 2.0).ceil() as usize + 8;
    let rule = Rule::composite(0.0, PI, &[], PI / panels as f64, 16);
    let first = rule.integrate(|th| (nu * th - x * th.sin()).cos()) / PI;
    let s = (nu * PI).sin();
    if s.abs() < 1e-15 {
        return first;
    }
    let t_end = (40.0 / x).asinh().max(1e-3) + 40.0 / (x + nu).max(1.0);
    let tail = Rule::composite(0.0, t_end, &[], t_end / 16.0, 16);
    let second = tail.integrate(|t| (-x * t.sinh() - nu * t).exp());
    first - s / PI * second
}

/// J_ν(x) / x^ν, continuous at x = 0.
pub fn bessel_j_ratio(nu: f64, x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        let q = 0.25 * x * x;
        let mut term = (-nu * std::f64::consts::LN_2 - lgamma_pos(nu + 1.0)).exp();
        let mut sum = term;
        for k in 0..500 {
            let kf = k as f64;
            term *= -q / ((kf + 1.0) * (kf + nu + 1.0));
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() && kf > q.sqrt() {
                break;
            }
        }
        sum
    } else {
        schlafli(nu, x) / x.powf(nu)
    }
}

/// The s-th positive zero of J_ν.
pub fn bessel_zero(nu: f64, s: usize) -> BesselZero {
    assert!(s >= 1, "zero index starts at 1");
    let step = 0.1f64.min(2.0 * PI / 8.0);
    let mut lo = nu;
    let mut flo = bessel_j(nu, lo);
    let mut found = 0;
    loop {
        let hi = lo + step;
        let fhi = bessel_j(nu, hi);
        if flo != 0.0 && fhi != 0.0 && flo.signum() != fhi.signum() {
            found += 1;
            if found == s {
                let value = bisect(|x| bessel_j(nu, x), lo, hi);
                return BesselZero { nu, s, value };
            }
        }
        lo = hi;
        flo = fhi;
    }
}

pub fn bessel_first_zero(nu: f64) -> BesselZero {
    bessel_zero(nu, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    // arbitrary-precision references
    const REF: [(f64, f64, f64); 12] = [
        (0.0, 1.0, 0.76519768655796655),
        (0.0, 12.0, 0.047689310796833537),
        (1.0, 2.5, 0.49709410246427404),
        (0.5, 7.0, 0.19812877407634482),
        (3.0, 0.2, 0.00016625041643526786),
        (2.5, 10.0, 0.19665848358181841),
        (2.5, 10.5, 0.24417060803994181),
        (4.0, 33.0, 0.070868718473539864),
        (11.0, 49.5, 0.036820341895738835),
        (20.0, 12.0, 0.00025121327024539953),
        (20.0, 45.0, 0.0047633437900312991),
        (7.3, 25.0, 0.051603286624551372),
    ];

    #[test]
    fn matches_reference_values() {
        for (nu, x, v) in REF {
            let got = bessel_j(nu, x);
            assert!((got - v).abs() <= 1e-10 * v.abs(), "J_{nu}({x}) = {got}, want {v}");
        }
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0.0, 0.0), 1.0);
        assert_eq!(bessel_j(3.0, 0.0), 0.0);
        assert!((bessel_j_ratio(2.0, 0.0) - 1.0 / 8.0).abs() < 1e-16);
    }

    #[test]
    fn three_term_recurrence_across_switchover() {
        for nu in [0.5, 1.0, 3.7, 9.0] {
            for &x in &[9.5, 10.0, 10.5, 22.0, 48.0] {
                let mid = bessel_j(nu + 1.0, x) * 2.0 * (nu + 1.0) / x;
                let r = bessel_j(nu, x) + bessel_j(nu + 2.0, x) - mid;
                assert!(r.abs() < 1e-12, "nu={nu} x={x} r={r}");
            }
        }
    }

    #[test]
    fn first_zeros() {
        assert!((bessel_first_zero(0.0).value - 2.404_825_557_695_773).abs() < 1e-11);
        assert!((bessel_first_zero(1.0).value - 3.831_705_970_207_512).abs() < 1e-11);
        assert!((bessel_zero(0.0, 2).value - 5.520_078_110_286_311).abs() < 1e-11);
    }
}
