use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Behaviour past the last node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "exponent", rename_all = "snake_case")]
pub enum Tail {
    /// The function vanishes beyond the last node.
    Zero,
    /// v(t) = v_last (t/t_last)^e.
    Power(f64),
}

/// A nonnegative function on (0, ∞) that is a pure power t^e between
/// consecutive nodes, with power-law head and tail. Integrals of powers of
/// such functions are evaluated in closed form, so divergence at 0 or ∞ shows
/// up as an exponent, not as a quadrature artefact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tabulated {
    pub t: Vec<f64>,
    pub v: Vec<f64>,
    /// v(t) = v_0 (t/t_0)^head for t < t_0.
    pub head: f64,
    pub tail: Tail,
}

/// One closed-form piece v(t) = v0 (t/t0)^e on [lo, hi].
#[derive(Clone, Copy, Debug)]
struct Piece {
    lo: f64,
    hi: f64,
    t0: f64,
    v0: f64,
    e: f64,
}

impl Tabulated {
    pub fn new(t: Vec<f64>, v: Vec<f64>, head: f64, tail: Tail) -> Result<Self> {
        if t.is_empty() || t.len() != v.len() {
            return Err(Error::Domain("table needs matching, nonempty node and value lists".into()));
        }
        if t[0] <= 0.0 || t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("table nodes must be positive and increasing".into()));
        }
        if v.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
            return Err(Error::Domain("table values must be finite and nonnegative".into()));
        }
        Ok(Self { t, v, head, tail })
    }

    /// c t^e on all of (0, ∞).
    pub fn power(c: f64, e: f64) -> Self {
        Self { t: vec![1.0], v: vec![c], head: e, tail: Tail::Power(e) }
    }

    /// c on (0, m), zero after.
    pub fn indicator(c: f64, m: f64) -> Self {
        Self { t: vec![m], v: vec![c], head: 0.0, tail: Tail::Zero }
    }

    pub fn support(&self) -> f64 {
        match self.tail {
            Tail::Zero => *self.t.last().unwrap(),
            Tail::Power(_) => f64::INFINITY,
        }
    }

    fn pieces(&self) -> Vec<Piece> {
        let m = self.t.len();
        let mut out = Vec::with_capacity(m + 1);
        out.push(Piece { lo: 0.0, hi: self.t[0], t0: self.t[0], v0: self.v[0], e: self.head });
        for k in 0..m - 1 {
            let (a, b) = (self.v[k], self.v[k + 1]);
            let e = if a > 0.0 && b > 0.0 { (b / a).ln() / (self.t[k + 1] / self.t[k]).ln() } else { 0.0 };
            out.push(Piece { lo: self.t[k], hi: self.t[k + 1], t0: self.t[k], v0: a, e });
        }
        if let Tail::Power(e) = self.tail {
            out.push(Piece { lo: self.t[m - 1], hi: f64::INFINITY, t0: self.t[m - 1], v0: self.v[m - 1], e });
        }
        out
    }

    pub fn value(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return if self.head < 0.0 { f64::INFINITY } else if self.head == 0.0 { self.v[0] } else { 0.0 };
        }
        for p in self.pieces() {
            if t <= p.hi {
                return p.v0 * (t / p.t0).powf(p.e);
            }
        }
        0.0
    }

    /// ∫_a^b v(t)^q t^β dt, +∞ when it diverges.
    pub fn integral(&self, q: f64, beta: f64, a: f64, b: f64) -> f64 {
        if !(b > a) {
            return 0.0;
        }
        let mut total = 0.0;
        for p in self.pieces() {
            let lo = p.lo.max(a);
            let hi = p.hi.min(b);
            if !(hi > lo) {
                continue;
            }
            if p.v0 == 0.0 {
                if q < 0.0 {
                    return f64::INFINITY;
                }
                if q == 0.0 {
                    total += p.t0.powf(beta) * power_integral(1.0, p.t0, beta, lo, hi);
                }
                continue;
            }
            // v^q t^β = v0^q t0^β (t/t0)^{qe+β}
            total += p.v0.powf(q) * p.t0.powf(beta) * power_integral(1.0, p.t0, q * p.e + beta, lo, hi);
            if !total.is_finite() {
                return f64::INFINITY;
            }
        }
        total
    }

    /// |{t : v(t) > M}| for a non-increasing table.
    pub fn level_measure(&self, m: f64) -> f64 {
        let mut acc = 0.0;
        for p in self.pieces() {
            let (va, vb) = (p.v0 * (p.lo.max(1e-300) / p.t0).powf(p.e), p.v0 * (p.hi / p.t0).powf(p.e));
            let va = if p.lo == 0.0 { self.value(0.0) } else { va };
            if vb > m {
                acc = p.hi;
                continue;
            }
            if va > m && p.e != 0.0 {
                acc = p.t0 * (m / p.v0).powf(1.0 / p.e);
            } else if va > m {
                acc = p.hi;
            }
            break;
        }
        acc
    }

    /// self^a · other^b on the union of both node sets; exact, since the
    /// product of powers is again a power on every common piece.
    pub fn mul_pow(&self, a: f64, other: &Tabulated, b: f64) -> Tabulated {
        let mut t: Vec<f64> = self.t.iter().chain(&other.t).copied().collect();
        t.sort_by(|x, y| x.partial_cmp(y).unwrap());
        t.dedup();
        let support = self.support().min(other.support());
        t.retain(|x| *x <= support);
        let v: Vec<f64> = t
            .iter()
            .map(|&x| {
                let (p, q) = (self.value(x), other.value(x));
                let pa = if p == 0.0 && a <= 0.0 { f64::INFINITY } else { p.powf(a) };
                let qb = if q == 0.0 && b <= 0.0 { f64::INFINITY } else { q.powf(b) };
                let r = pa * qb;
                if r.is_finite() {
                    r
                } else {
                    f64::MAX
                }
            })
            .collect();
        let tail = if support.is_finite() {
            Tail::Zero
        } else {
            let e1 = if let Tail::Power(e) = self.tail { e } else { 0.0 };
            let e2 = if let Tail::Power(e) = other.tail { e } else { 0.0 };
            Tail::Power(a * e1 + b * e2)
        };
        Tabulated { t, v, head: a * self.head + b * other.head, tail }
    }

    pub fn scaled(&self, c: f64) -> Tabulated {
        Tabulated { v: self.v.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    /// Least-squares slope and intercept of ln v against ln t over nodes in
    /// [lo, hi], dropping the outer 10% on each side.
    pub fn fit_loglog(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        let pts: Vec<(f64, f64)> = self
            .t
            .iter()
            .zip(&self.v)
            .filter(|(t, v)| **t >= lo && **t <= hi && **v > 0.0)
            .map(|(t, v)| (t.ln(), v.ln()))
            .collect();
        let drop = pts.len() / 10;
        let pts = &pts[drop..pts.len() - drop];
        if pts.len() < 3 {
            return None;
        }
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mx, my) = (sx / m, sy / m);
        let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx) * (p.0 - mx)));
        let slope = sxy / sxx;
        Some((slope, my - slope * mx))
    }
}

/// c ∫_lo^hi (t/t0)^g dt, +∞ in the divergent cases.
fn power_integral(c: f64, t0: f64, g: f64, lo: f64, hi: f64) -> f64 {
    let g1 = g + 1.0;
    if lo == 0.0 && g1 <= 0.0 {
        return f64::INFINITY;
    }
    if hi.is_infinite() && g1 >= 0.0 {
        return f64::INFINITY;
    }
    if g1.abs() < 1e-13 {
        return c * t0 * (hi / lo).ln();
    }
    let h = if hi.is_infinite() { 0.0 } else { (hi / t0).powf(g1) };
    let l = if lo == 0.0 { 0.0 } else { (lo / t0).powf(g1) };
    c * t0 * (h - l) / g1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_table_integrals() {
        let p = Tabulated::power(2.0, -0.5);
        // ∫_0^4 2 t^{-1/2} dt = 8
        assert!((p.integral(1.0, 0.0, 0.0, 4.0) - 8.0).abs() < 1e-12);
        // ∫_1^∞ (2 t^{-1/2})² t^{-1} dt = 4 ∫ t^{-2} = 4
        assert!((p.integral(2.0, -1.0, 1.0, f64::INFINITY) - 4.0).abs() < 1e-12);
        assert!(p.integral(2.0, 0.0, 1.0, f64::INFINITY).is_infinite());
        assert!(p.integral(-4.0, 0.0, 0.0, 1.0) < f64::INFINITY);
        assert!(p.integral(3.0, 0.0, 0.0, 1.0).is_infinite());
    }

    #[test]
    fn interpolation_is_exact_for_powers() {
        let t: Vec<f64> = (0..20).map(|i| 0.1 * 1.5f64.powi(i)).collect();
        let v: Vec<f64> = t.iter().map(|x| 3.0 * x.powf(-0.7)).collect();
        let tab = Tabulated::new(t, v, -0.7, Tail::Power(-0.7)).unwrap();
        for &x in &[0.01, 0.33, 7.0, 1e4] {
            assert!((tab.value(x) - 3.0 * x.powf(-0.7)).abs() < 1e-12 * x.powf(-0.7));
        }
        assert!((tab.integral(1.0, 0.0, 0.5, 2.0) - 10.0 * (2f64.powf(0.3) - 0.5f64.powf(0.3))).abs() < 1e-11);
        let (s, c) = tab.fit_loglog(0.1, 1e3).unwrap();
        assert!((s + 0.7).abs() < 1e-12 && (c - 3f64.ln()).abs() < 1e-10);
        assert!((tab.level_measure(3.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn indicator_and_products() {
        let ind = Tabulated::indicator(1.0, 2.5);
        assert_eq!(ind.value(1.0), 1.0);
        assert_eq!(ind.value(3.0), 0.0);
        assert!((ind.integral(2.0, 0.0, 0.0, f64::INFINITY) - 2.5).abs() < 1e-15);
        assert_eq!(ind.level_measure(0.5), 2.5);
        assert_eq!(ind.level_measure(1.0), 0.0);
        let p = Tabulated::power(1.0, -0.25);
        let prod = ind.mul_pow(1.0, &p, 2.0);
        assert!((prod.integral(1.0, 0.0, 0.0, f64::INFINITY) - 2.0 * 2.5f64.sqrt()).abs() < 1e-12);
    }
}
