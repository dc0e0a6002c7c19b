//! Small scalar routines shared by the modules: golden-section search,
//! bisection, log-sum-exp and log-factorials.

/// Inverse golden ratio, `(sqrt(5) - 1) / 2`.
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimum of a unimodal function on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `rel_width * max(1, |x|)`.
/// Returns `(argmin, min)`. `+inf` values are allowed as long as the
/// function stays unimodal.
pub fn golden_section_min<F>(mut f: F, lo: f64, hi: f64, rel_width: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..400 {
        let scale = c.abs().max(d.abs()).max(1.0);
        if (b - a) <= rel_width * scale {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimum over `[lo, hi]` of a function that is unimodal but may be `+inf`
/// on part of the interval: a coarse scan of `scan_points` samples locates
/// the basin, then golden-section refines inside the neighbouring cells.
///
/// Returns `None` when every sample is infinite.
pub fn scan_then_golden<F>(mut f: F, lo: f64, hi: f64, scan_points: usize, rel_width: f64) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let n = scan_points.max(3);
    let step = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    let mut best = None::<(usize, f64)>;
    for (i, &x) in xs.iter().enumerate() {
        let v = f(x);
        if v.is_nan() || v == f64::INFINITY {
            continue;
        }
        if best.map_or(true, |(_, bv)| v < bv) {
            best = Some((i, v));
        }
    }
    let (i, v) = best?;
    let left = xs[i.saturating_sub(1)];
    let right = xs[(i + 1).min(n - 1)];
    let (x, fx) = golden_section_min(&mut f, left, right, rel_width);
    if fx < v {
        Some((x, fx))
    } else {
        Some((xs[i], v))
    }
}

/// Root of a nondecreasing function on `[lo, hi]` by plain bisection.
///
/// The caller is responsible for bracketing (`f(lo) <= 0 <= f(hi)`).
pub fn bisect_increasing<F>(mut f: F, mut lo: f64, mut hi: f64, iterations: usize) -> f64
where
    F: FnMut(f64) -> f64,
{
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `ln Σ exp(x_i)`, ignoring `-inf` terms. Returns `-inf` for an empty sum.
pub fn log_sum_exp<I>(terms: I) -> f64
where
    I: IntoIterator<Item = f64> + Clone,
{
    let max = terms.clone().into_iter().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let sum: f64 = terms.into_iter().map(|x| (x - max).exp()).sum();
    max + sum.ln()
}

/// Table of `ln k!` for `k = 0..=n`.
pub fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// `x ln x` with the convention `0 ln 0 = 0`.
pub fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, v) = golden_section_min(|x| (x - 1.25).powi(2) + 3.0, -10.0, 10.0, 1e-12);
        assert!((x - 1.25).abs() < 1e-6);
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn scan_handles_infinite_plateau() {
        let f = |x: f64| if x > 2.0 { f64::INFINITY } else { (x - 1.9).powi(2) };
        let (x, _) = scan_then_golden(f, 0.0, 10.0, 101, 1e-12).unwrap();
        assert!((x - 1.9).abs() < 1e-6);
        assert!(scan_then_golden(|_| f64::INFINITY, 0.0, 1.0, 11, 1e-9).is_none());
    }

    #[test]
    fn bisection_solves_cubic() {
        let r = bisect_increasing(|x| x * x * x - 2.0, 0.0, 2.0, 200);
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn log_sum_exp_is_stable() {
        let v = log_sum_exp([1000.0, 1000.0]);
        assert!((v - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp([f64::NEG_INFINITY]), f64::NEG_INFINITY);
    }

    #[test]
    fn factorial_table() {
        let t = ln_factorials(5);
        assert!((t[5] - 120f64.ln()).abs() < 1e-12);
        assert_eq!(xlogx(0.0), 0.0);
    }
}
