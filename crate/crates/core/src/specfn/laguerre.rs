use super::bessel::bessel_first_zero;
use super::gamma::lgamma_pos;
use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LaguerreIndex {
    pub k: usize,
    pub delta: f64,
}

impl LaguerreIndex {
    pub fn new(k: usize, delta: f64) -> Result<Self> {
        if !(delta > -1.0) {
            return domain(format!("Laguerre type must exceed -1, got {delta}"));
        }
        Ok(Self { k, delta })
    }
}

/// L^δ_k(x) by forward recurrence.
pub fn laguerre_poly(idx: LaguerreIndex, x: f64) -> Result<f64> {
    if !(idx.delta > -1.0) {
        return domain(format!("Laguerre type must exceed -1, got {}", idx.delta));
    }
    if !x.is_finite() {
        return domain("Laguerre argument must be finite");
    }
    Ok(laguerre_unchecked(idx.k, idx.delta, x))
}

pub(crate) fn laguerre_unchecked(k: usize, a: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + a - x) * cur - (jf + a) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// All of L^δ_0(x), ..., L^δ_kmax(x).
pub fn laguerre_all(kmax: usize, delta: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(1.0);
    if kmax == 0 {
        return out;
    }
    out.push(1.0 + delta - x);
    for j in 1..kmax {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + delta - x) * out[j] - (jf + delta) * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
    out
}

/// ln c_{n,k} = ln(k!(n-1)!/(k+n-1)!).
pub fn log_cnk(n: usize, k: usize) -> f64 {
    lgamma_pos(k as f64 + 1.0) + lgamma_pos(n as f64) - lgamma_pos((k + n) as f64)
}

pub fn cnk(n: usize, k: usize) -> f64 {
    log_cnk(n, k).exp()
}

/// Steps through L^a_k(x_j) e^{-x_j/2} for k = 0, 1, 2, ... at a fixed set of
/// points, renormalising internally so large x never overflows.
pub struct LaguerreSweep {
    a: f64,
    xs: Vec<f64>,
    prev: Vec<f64>,
    cur: Vec<f64>,
    log_scale: Vec<f64>,
    factor: Vec<f64>,
    k: usize,
}

impl LaguerreSweep {
    pub fn new(a: f64, xs: Vec<f64>) -> Self {
        let m = xs.len();
        let log_scale: Vec<f64> = xs.iter().map(|x| -0.5 * x).collect();
        let factor = log_scale.iter().map(|s| s.exp()).collect();
        Self { a, xs, prev: vec![0.0; m], cur: vec![1.0; m], log_scale, factor, k: 0 }
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// Values L^a_k(x_j) e^{-x_j/2} at the current degree.
    pub fn values(&self, out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.cur.iter().zip(&self.factor).map(|(c, f)| c * f));
    }

    pub fn advance(&mut self) {
        let k = self.k as f64;
        let a = self.a;
        for j in 0..self.xs.len() {
            let next = if self.k == 0 {
                1.0 + a - self.xs[j]
            } else {
                ((2.0 * k + 1.0 + a - self.xs[j]) * self.cur[j] - (k + a) * self.prev[j]) / (k + 1.0)
            };
            self.prev[j] = self.cur[j];
            self.cur[j] = next;
            if next.abs() > 1e150 {
                self.prev[j] *= 1e-150;
                self.cur[j] *= 1e-150;
                self.log_scale[j] += 150.0 * std::f64::consts::LN_10;
                self.factor[j] = self.log_scale[j].exp();
            }
        }
        self.k += 1;
    }
}

/// φ^{n-1}_{k,λ}(z) for |z| = r.
pub fn laguerre_fn(k: usize, n: usize, lambda: f64, r: f64) -> Result<f64> {
    if n == 0 {
        return domain("dimension n must be at least 1");
    }
    if lambda == 0.0 || !lambda.is_finite() {
        return domain("laguerre_fn needs a finite nonzero lambda");
    }
    let x = lambda.abs() * r * r / 2.0;
    let mut sweep = LaguerreSweep::new(n as f64 - 1.0, vec![x]);
    for _ in 0..k {
        sweep.advance();
    }
    let mut v = Vec::new();
    sweep.values(&mut v);
    Ok(v[0])
}

/// j²_{n-1,1} / (4 M_{k,n}) with M_{k,n} = k + n/2.
pub fn first_zero_lower_bound(k: usize, n: usize) -> f64 {
    let j = bessel_first_zero((n - 1) as f64).value;
    j * j / (4.0 * (k as f64 + n as f64 / 2.0))
}

/// Smallest positive zero of L^{n-1}_k, k >= 1.
pub fn laguerre_first_zero(k: usize, n: usize) -> Result<f64> {
    if k == 0 {
        return domain("L_0 has no zeros");
    }
    if n == 0 {
        return domain("dimension n must be at least 1");
    }
    let a = n as f64 - 1.0;
    let f = |x: f64| laguerre_unchecked(k, a, x);
    // zeros crowd near the origin like 1/(4k+2n)
    let step = (1.0 / (4 * k + 2 * n) as f64).min(0.1);
    let mut lo = 0.0;
    let mut flo = f(lo);
    loop {
        let hi = lo + step;
        let fhi = f(hi);
        if fhi == 0.0 {
            return Ok(hi);
        }
        if flo.signum() != fhi.signum() {
            return Ok(bisect(f, lo, hi));
        }
        lo = hi;
        flo = fhi;
    }
}

pub(crate) fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > 1e-12 * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> f64 {
        (1..=k).fold(1.0, |acc, j| acc * (n - k + j) as f64 / j as f64)
    }

    #[test]
    fn poly_examples() {
        let i = |k, d| LaguerreIndex::new(k, d).unwrap();
        assert_eq!(laguerre_poly(i(0, 3.5), 7.3).unwrap(), 1.0);
        assert!(laguerre_poly(i(1, 1.0), 2.0).unwrap().abs() < 1e-15);
        assert!((laguerre_poly(i(3, 1.0), 0.0).unwrap() - binom(4, 3)).abs() < 1e-12);
        assert!(LaguerreIndex::new(2, -1.0).is_err());
        // explicit L^0_2 and L^2_3 from the closed sums
        for x in [0.0, 0.4, 3.0, 9.5] {
            let l02 = 1.0 - 2.0 * x + x * x / 2.0;
            assert!((laguerre_poly(i(2, 0.0), x).unwrap() - l02).abs() < 1e-12);
            let l23 = 10.0 - 10.0 * x + 2.5 * x * x - x * x * x / 6.0;
            assert!((laguerre_poly(i(3, 2.0), x).unwrap() - l23).abs() < 1e-11);
        }
    }

    #[test]
    fn values_at_origin_are_binomials() {
        for n in 1..=4u64 {
            for k in 0..=30u64 {
                let v = laguerre_poly(LaguerreIndex::new(k as usize, (n - 1) as f64).unwrap(), 0.0).unwrap();
                let b = binom(k + n - 1, k);
                assert!((v - b).abs() <= 1e-12 * b);
                assert!((cnk(n as usize, k as usize) * b - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn function_examples() {
        assert!((laguerre_fn(0, 1, 1.0, 2.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!((laguerre_fn(1, 2, 1.0, 0.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(laguerre_fn(1, 1, 0.0, 1.0).is_err());
    }

    #[test]
    fn sweep_agrees_with_direct_recurrence_and_survives_large_x() {
        let xs = vec![0.0, 0.3, 5.0, 40.0, 900.0];
        let mut sw = LaguerreSweep::new(1.0, xs.clone());
        let mut vals = Vec::new();
        for k in 0..80 {
            sw.values(&mut vals);
            for (j, &x) in xs.iter().enumerate() {
                let direct = laguerre_unchecked(k, 1.0, x) * (-0.5 * x).exp();
                if x < 100.0 {
                    assert!((vals[j] - direct).abs() <= 1e-10 * direct.abs().max(1.0));
                }
                assert!(vals[j].is_finite());
            }
            sw.advance();
        }
    }

    #[test]
    fn first_zero_examples() {
        assert!((laguerre_first_zero(1, 2).unwrap() - 2.0).abs() < 1e-11);
        assert!((laguerre_first_zero(2, 1).unwrap() - (2.0 - 2f64.sqrt())).abs() < 1e-11);
    }
}
