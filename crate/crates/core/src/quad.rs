//! Quadrature rules shared by every module.
//!
//! Gauss–Legendre panels carry the bulk of the work. Adaptive Gauss–Kronrod
//! and double-exponential rules handle the few integrals with endpoint
//! singularities or infinite ranges.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let rule = legendre_rule(n);
    cache.lock().unwrap().insert(n, rule.clone());
    rule
}

fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// A discrete rule: integrate by `sum w_i f(x_i)`.
#[derive(Clone, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Composite Gauss–Legendre over [a, b] split at `breaks`, each piece cut
    /// into panels no wider than `width`.
    pub fn composite(a: f64, b: f64, breaks: &[f64], width: f64, order: usize) -> Rule {
        let mut cuts = vec![a];
        let mut inner: Vec<f64> = breaks.iter().copied().filter(|&c| c > a && c < b).collect();
        inner.sort_by(|x, y| x.partial_cmp(y).unwrap());
        cuts.extend(inner);
        cuts.push(b);
        cuts.dedup();
        let mut rule = Rule::default();
        for seg in cuts.windows(2) {
            let (lo, hi) = (seg[0], seg[1]);
            let panels = ((hi - lo) / width).ceil().max(1.0) as usize;
            rule.push_panels(lo, hi, panels, order);
        }
        rule
    }

    /// Like [`Rule::composite`] but with geometrically graded panels towards
    /// `a`, which absorbs integrable power singularities there.
    pub fn graded(a: f64, b: f64, breaks: &[f64], width: f64, order: usize, levels: usize) -> Rule {
        let first = breaks
            .iter()
            .copied()
            .filter(|&c| c > a && c < b)
            .fold(b, f64::min);
        let h = (first - a).min(width);
        let mut rule = Rule::default();
        let mut lo = a;
        for lvl in (1..=levels).rev() {
            let hi = a + h * 0.25f64.powi(lvl as i32);
            rule.push_panels(lo, hi, 1, order);
            lo = hi;
        }
        let rest = Rule::composite(lo, b, breaks, width, order);
        rule.nodes.extend(rest.nodes);
        rule.weights.extend(rest.weights);
        rule
    }

    fn push_panels(&mut self, lo: f64, hi: f64, panels: usize, order: usize) {
        let (x, w) = gauss_legendre(order);
        let h = (hi - lo) / panels as f64;
        for p in 0..panels {
            let c = lo + (p as f64 + 0.5) * h;
            for (xi, wi) in x.iter().zip(&w) {
                self.nodes.push(c + 0.5 * h * xi);
                self.weights.push(0.5 * h * wi);
            }
        }
    }
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) on a finite interval.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    let mut stack = vec![(a, b, 0usize)];
    let mut total = 0.0;
    let (whole, _) = gk15(&f, a, b);
    let scale = whole.abs();
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(&f, lo, hi);
        let share = (hi - lo) / (b - a);
        let tol = (abs_tol.max(rel_tol * scale) * share.sqrt()).max(1e-300);
        if err <= tol || depth >= 48 {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

/// Tanh–sinh rule on [a, b]; tolerant of integrable endpoint singularities.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h0 = 0.5 * (b - a);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let eval = |t: f64| -> f64 {
        let s = half_pi * t.sinh();
        let ch = s.cosh();
        // distance from the nearer endpoint, kept in complement form
        let d = h0 / (s.exp() * ch);
        let x_lo = a + d;
        let x_hi = b - d;
        let w = half_pi * t.cosh() / (ch * ch) * h0;
        if !w.is_finite() || w == 0.0 {
            return 0.0;
        }
        let mut v = 0.0;
        if x_hi > a && x_hi < b {
            v += f(x_hi);
        }
        if x_lo > a && x_lo < b {
            v += f(x_lo);
        }
        w * v
    };
    let tmax = 4.0;
    let mut h: f64 = 0.5;
    let mut sum = h0 * half_pi * f(c);
    let mut k = 1;
    while (k as f64) * h <= tmax {
        sum += eval(k as f64 * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..10 {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= tmax {
            sum += eval(k as f64 * h);
            k += 2;
        }
        let cur = sum * h;
        if (cur - prev).abs() <= rel_tol * cur.abs() {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Exp–sinh rule on [a, ∞) for integrands with at most algebraic decay.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, a: f64, rel_tol: f64) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let eval = |t: f64| -> f64 {
        let e = (half_pi * t.sinh()).exp();
        let w = half_pi * t.cosh() * e;
        let x = a + e;
        if !x.is_finite() || !w.is_finite() {
            return 0.0;
        }
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            w * v
        }
    };
    let (tmin, tmax): (f64, f64) = (-4.5, 4.5);
    let mut h: f64 = 0.5;
    let mut sum = 0.0;
    let mut k = (tmin / h).ceil() as i64;
    while (k as f64) * h <= tmax {
        sum += eval(k as f64 * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..10 {
        h *= 0.5;
        let mut k = (tmin / h).ceil() as i64;
        if k % 2 == 0 {
            k += 1;
        }
        while (k as f64) * h <= tmax {
            sum += eval(k as f64 * h);
            k += 2;
        }
        let cur = sum * h;
        if (cur - prev).abs() <= rel_tol * cur.abs() {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums.
pub fn wynn_epsilon(partials: &[f64]) -> f64 {
    let n = partials.len();
    if n < 3 {
        return *partials.last().unwrap_or(&0.0);
    }
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partials.to_vec();
    let mut best = partials[n - 1];
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let v = if d == 0.0 { f64::INFINITY } else { prev[i + 1] + 1.0 / d };
            next.push(v);
        }
        prev = cur;
        cur = next;
        col += 1;
        if col % 2 == 0 {
            if let Some(&v) = cur.last() {
                if v.is_finite() {
                    best = v;
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(6);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn composite_respects_breaks() {
        let r = Rule::composite(0.0, 2.0, &[1.0], 0.3, 8);
        let v = r.integrate(|x| if x < 1.0 { 1.0 } else { 3.0 });
        assert!((v - 4.0).abs() < 1e-13);
    }

    #[test]
    fn graded_rule_handles_power_singularity() {
        let r = Rule::graded(0.0, 1.0, &[], 0.25, 12, 30);
        let v = r.integrate(|x| x.powf(-0.4));
        assert!((v - 1.0 / 0.6).abs() < 1e-10, "{v}");
    }

    #[test]
    fn adaptive_and_de_rules() {
        let v = adaptive(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-14, 1e-13);
        assert!((v - 2.0).abs() < 1e-12);
        let v = tanh_sinh(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12);
        assert!((v - 2.0).abs() < 1e-10, "{v}");
        let v = exp_sinh(|x: f64| 1.0 / (1.0 + x * x), 0.0, 1e-12);
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-10, "{v}");
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        let mut s = 0.0;
        let partials: Vec<f64> = (0..20)
            .map(|k| {
                s += if k % 2 == 0 { 1.0 } else { -1.0 } / (k as f64 + 1.0);
                s
            })
            .collect();
        assert!((wynn_epsilon(&partials) - 2f64.ln()).abs() < 1e-10);
    }
}
