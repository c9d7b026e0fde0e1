use super::gamma::lgamma_pos;
use crate::error::{domain, Result};
use crate::quad::{adaptive, wynn_epsilon, Rule};
use std::f64::consts::PI;

/// K_ν(y) from Γ(ν+½)/Γ(½) (2y)^ν ∫₀^∞ cos t / (t²+y²)^{ν+½} dt.
///
/// The integral is split at the extrema of cos t; the head is integrated
/// adaptively (it carries the y-scale peak) and the alternating tail of
/// half-period pieces is summed with Wynn's epsilon.
pub fn macdonald_k(nu: f64, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return domain(format!("macdonald_k needs y > 0, got {y}"));
    }
    if !(nu > 0.0) {
        return domain(format!("macdonald_k needs nu > 0, got {nu}"));
    }
    let e = nu + 0.5;
    let y2 = y * y;
    let g = |t: f64| t.cos() * (-e * (t * t + y2).ln()).exp();
    // head: everything up to a zero of cos beyond the peak width
    let m0 = ((4.0 * y / PI).ceil() as usize).max(1);
    let head_end = (m0 as f64 - 0.5) * PI;
    let scale = (-2.0 * e * y.ln()).exp();
    let head = adaptive(g, 0.0, head_end, 1e-17 * scale, 1e-14);
    let rule = Rule::composite(0.0, PI, &[], PI / 2.0, 20);
    let mut partials = Vec::with_capacity(60);
    let mut sum = head;
    for j in 0..60 {
        let lo = head_end + j as f64 * PI;
        sum += rule.integrate(|s| g(lo + s));
        partials.push(sum);
    }
    let integral = wynn_epsilon(&partials);
    let pref = (lgamma_pos(e) - lgamma_pos(0.5) + nu * (2.0 * y).ln()).exp();
    Ok(pref * integral)
}

/// The bound K_ν(y) <= Γ(ν) 2^{ν-1} y^{-ν}.
pub fn macdonald_bound(nu: f64, y: f64) -> f64 {
    (lgamma_pos(nu) + (nu - 1.0) * std::f64::consts::LN_2 - nu * y.ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    // independent route: K_ν(y) = ∫₀^∞ e^{-y cosh u} cosh(νu) du
    fn k_cosh(nu: f64, y: f64) -> f64 {
        let end = ((60.0 / y).ln().max(1.0) + 2.0).max((60.0 + nu) / y);
        let end = end.min(40.0);
        adaptive(|u: f64| (-y * u.cosh() + nu * u).exp() * 0.5 * (1.0 + (-2.0 * nu * u).exp()), 0.0, end, 1e-300, 1e-14)
    }

    #[test]
    fn half_order_closed_form() {
        let v = macdonald_k(0.5, 1.0).unwrap();
        let want = (PI / 2.0).sqrt() * (-1.0f64).exp();
        assert!((v - want).abs() < 1e-10, "{v} vs {want}");
    }

    #[test]
    fn agrees_with_cosh_representation() {
        for &nu in &[0.1, 0.5, 1.0, 2.3, 5.0] {
            for &y in &[0.1, 0.5, 1.0, 3.0, 8.0, 20.0] {
                let a = macdonald_k(nu, y).unwrap();
                let b = k_cosh(nu, y);
                assert!((a - b).abs() <= 1e-8 * b.max(1.0), "nu={nu} y={y}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn domain() {
        assert!(macdonald_k(1.0, 0.0).is_err());
        assert!(macdonald_k(0.0, 1.0).is_err());
    }
}
