use std::f64::consts::PI;
use strichartz::geometry::{ball_volume, GridConfig};
use strichartz::paley::*;
use strichartz::quad::adaptive;
use strichartz::rearrange::fan_ball_constant;
use strichartz::specfn::log_gamma;
use strichartz::transform::RadialFunction;

// |{|a| + |w| < R}| summed ray by ray: for each k, |λ| < R/(2k+n+1) and
// |w| < R − (2k+n+1)|λ|, against (2π)^{-2n-1} binom(k+n-1,k)² |λ|^{2n} dλ dw
fn ball_by_rays(n: usize, r: f64) -> f64 {
    let nf = n as f64;
    let mut total = 0.0;
    for k in 0..4000usize {
        let c = (2 * k + n + 1) as f64;
        let lb = log_gamma((k + n) as f64).unwrap() - log_gamma(k as f64 + 1.0).unwrap() - log_gamma(nf).unwrap();
        let dens = (-(2.0 * nf + 1.0) * (2.0 * PI).ln() + 2.0 * lb).exp();
        let ray = 2.0 * adaptive(|l: f64| l.powf(2.0 * nf) * ball_volume(n, r - c * l), 0.0, r / c, 1e-300, 1e-13);
        total += dens * ray;
    }
    // terms fall like k^{-3}: add the integral of the remainder
    let last = {
        let k = 3999.0;
        let c = 2.0 * k + nf + 1.0;
        let lb = log_gamma(k + nf).unwrap() - log_gamma(k + 1.0).unwrap() - log_gamma(nf).unwrap();
        let dens = (-(2.0 * nf + 1.0) * (2.0 * PI).ln() + 2.0 * lb).exp();
        dens * 2.0 * adaptive(|l: f64| l.powf(2.0 * nf) * ball_volume(n, r - c * l), 0.0, r / c, 1e-300, 1e-13)
    };
    let g = 2.0 * nf - 2.0 - (2.0 * nf + 1.0);
    total + last * 3999.5 / (-(g + 1.0))
}

#[test]
fn ball_distribution_matches_rays() {
    for n in [1, 2] {
        let phi = FanWeight::power_decay(n, 4.0 * n as f64 + 1.0).unwrap();
        for s in [0.1, 2.0] {
            let want = ball_by_rays(n, phi.radius_above(s));
            let got = phi.distribution(s);
            assert!((got - want).abs() / want < 1e-6, "n={n} s={s}: {got} vs {want}");
        }
    }
}

#[test]
fn weak_l1_quasinorm_examples() {
    let phi = FanWeight::power_decay(1, 5.0).unwrap();
    let c = weak_l1_quasinorm(&phi);
    assert!(c.is_finite());
    // s·m(s) = K for every s when ρ = 4n+1
    assert!((c - fan_ball_constant(1)).abs() / c < 1e-12);
    assert!((weak_l1_quasinorm(&phi.scaled(2.0).unwrap()) - 2.0 * c).abs() / c < 1e-12);
    assert_eq!(weak_l1_quasinorm(&phi.scaled(0.0).unwrap()), 0.0);
    for rho in [4.0, 6.0] {
        let off = FanWeight::power_decay(1, rho).unwrap();
        assert!(!off.weak_l1());
        assert!(weak_l1_quasinorm(&off).is_infinite(), "rho={rho}");
    }
    let sampled = FanWeight::new(2, 1.0, FanWeightKind::Sampled { radius: vec![0.5, 1.0, 4.0], values: vec![3.0, 1.0, 0.2] }).unwrap();
    assert!(weak_l1_quasinorm(&sampled).is_finite());
}

#[test]
fn layer_cake_power_decay() {
    let phi = FanWeight::power_decay(1, 5.0).unwrap();
    let sigma = strichartz::rearrange::log_grid(1e-3, 1e1, 41);
    let rep = layer_cake_bound_check(&phi, &sigma, 0.05).unwrap();
    assert!(rep.bound_holds, "{} vs 2*{}", rep.max_ratio, rep.constant);
    assert!(rep.max_identity_error < 1e-4, "{}", rep.max_identity_error);
    // ∫_{R*}^∞ R^{-2ρ} dμ = K/R*^{4n+1} = Kσ at ρ = 4n+1
    for r in &rep.ratios {
        assert!((r - fan_ball_constant(1)).abs() / r < 1e-9, "{r}");
    }
    let wide = layer_cake_bound_check(&phi, &default_sigma_grid(), 0.05).unwrap();
    assert!(wide.bound_holds && wide.max_identity_error < 1e-4);
    assert!(layer_cake_bound_check(&FanWeight::power_decay(1, 6.0).unwrap(), &sigma, 0.05).is_err());
}

#[test]
fn layer_cake_sampled_weight() {
    let phi = FanWeight::new(1, 1.0, FanWeightKind::Sampled { radius: vec![0.2, 0.5, 1.0, 2.0, 3.0], values: vec![5.0, 3.0, 1.0, 0.5, 0.1] }).unwrap();
    let rep = layer_cake_bound_check(&phi, &default_sigma_grid(), 0.05).unwrap();
    assert!(rep.bound_holds, "{} vs 2*{}", rep.max_ratio, rep.constant);
    assert!(rep.max_identity_error < 1e-4, "{}", rep.max_identity_error);
    // above the maximum every point is in the sublevel set
    let total = sublevel_weighted_measure(&phi, 5.0);
    for (s, r) in rep.sigma.iter().zip(&rep.ratios) {
        if *s >= 5.0 {
            assert!((r * s - total).abs() / total < 1e-10);
        }
    }
    let tail: Vec<f64> = rep.sigma.iter().zip(&rep.ratios).filter(|(s, _)| **s >= 5.0).map(|(_, r)| *r).collect();
    assert!(tail.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn paley_p2_is_plancherel() {
    let cfg = GridConfig::default();
    let phi = FanWeight::power_decay(1, 5.0).unwrap();
    for (a, b) in [(1.0, 1.0), (0.5, 2.0)] {
        let f = RadialFunction::gaussian(1, a, b).unwrap();
        let rep = paley_check(&f, &phi, 2.0, &cfg).unwrap();
        assert!((rep.ratio - 1.0).abs() < 1e-6, "{rep:?}");
    }
    assert!(paley_check(&RadialFunction::gaussian(1, 1.0, 1.0).unwrap(), &phi, 2.5, &cfg).is_err());
}

#[test]
fn paley_ratio_stable_and_scale_free() {
    let cfg = GridConfig::default();
    let phi = FanWeight::power_decay(1, 5.0).unwrap();
    let f = RadialFunction::gaussian(1, 1.0, 1.0).unwrap();
    let ps = [1.1, 1.25, 1.5, 1.75, 2.0];
    let coarse = paley_sweep(&f, &phi, &ps, &cfg).unwrap();
    let fine = paley_sweep(&f, &phi, &ps, &cfg.refined()).unwrap();
    for (c, g) in coarse.iter().zip(&fine) {
        eprintln!("p={} ratio={:.6} refined={:.6} captured={:.8}", c.p, c.ratio, g.ratio, c.captured);
        assert!(c.ratio.is_finite() && c.ratio > 0.0);
        assert!((c.ratio - g.ratio).abs() / g.ratio < 0.10, "p={}", c.p);
    }
    let scaled = paley_check(&f.scaled(3.0), &phi, 1.5, &cfg).unwrap();
    assert!((scaled.ratio - coarse[2].ratio).abs() / coarse[2].ratio < 1e-10);
}
