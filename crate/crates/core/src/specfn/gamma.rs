use crate::error::{Error, Result};

const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// ln Γ(x) for x > 0 (Lanczos, g = 671/128).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma needs x > 0, got {x}")));
    }
    Ok(lgamma_pos(x))
}

pub(crate) fn lgamma_pos(x: f64) -> f64 {
    let mut y = x;
    let tmp = x + 5.242_187_5;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_092;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}

/// Γ(a)/Γ(b) for positive arguments.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    if a == b && a > 0.0 {
        return Ok(1.0);
    }
    Ok((log_gamma(a)? - log_gamma(b)?).exp())
}

/// Γ(x) for any real x that is not a pole, via reflection below 1/2.
pub fn gamma(x: f64) -> Result<f64> {
    if x > 0.0 {
        return Ok(lgamma_pos(x).exp());
    }
    if x == x.floor() {
        return Err(Error::Pole(x));
    }
    let pi = std::f64::consts::PI;
    Ok(pi / ((pi * x).sin() * lgamma_pos(1.0 - x).exp()))
}

/// ln B(a, b).
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

/// Residual of Legendre's duplication formula, relative to Γ(2z).
pub fn duplication_residual(z: f64) -> Result<f64> {
    let lhs = log_gamma(z)? + log_gamma(z + 0.5)?;
    let rhs = (1.0 - 2.0 * z) * std::f64::consts::LN_2 + 0.5 * std::f64::consts::PI.ln() + log_gamma(2.0 * z)?;
    Ok((lhs - rhs).exp_m1().abs())
}
