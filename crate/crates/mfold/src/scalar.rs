//! One-dimensional minimization helpers.

/// Golden-section search for the minimum of `f` on `[a, b]`.
/// Returns `(argmin, min)`. Deterministic: the iteration count is derived
/// from the requested interval tolerance.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    debug_assert!(b >= a);
    if b - a <= tol {
        let x = (a + b) / 2.0;
        let v = f(x);
        return (x, v);
    }
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    const INVPHI2: f64 = 0.381_966_011_250_105_1;
    let mut lo = a;
    let mut hi = b;
    let mut h = hi - lo;
    let steps = ((tol / h).ln() / INVPHI.ln()).ceil().max(1.0) as usize;
    let mut x1 = lo + INVPHI2 * h;
    let mut x2 = lo + INVPHI * h;
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..steps {
        h *= INVPHI;
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = lo + INVPHI2 * h;
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * h;
            f2 = f(x2);
        }
    }
    let _ = hi;
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_minimum() {
        let (x, v) = golden_min(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-10);
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn respects_bounds() {
        let (x, _) = golden_min(|x| -x, 0.0, 1.0, 1e-12);
        assert!((x - 1.0).abs() < 1e-9);
    }
}
