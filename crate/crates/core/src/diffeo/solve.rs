use crate::scalar::{lit, Scalar};

/// Solves `f(x) = y` for increasing `f` on a bracket `[lo, hi]` with
/// `f(lo) ≤ y ≤ f(hi)` by Newton steps that fall back to bisection whenever
/// they leave the bracket. `Err` carries the last iterate when the iteration
/// budget runs out.
pub(crate) fn solve_increasing<T: Scalar>(
    f: impl Fn(T) -> (T, T),
    y: T,
    mut lo: T,
    mut hi: T,
) -> Result<T, T> {
    let tol = lit::<T>(1e-14).max(T::epsilon() * lit(8.0));
    let resid_tol = T::epsilon() * lit(4.0) * (T::one() + y.abs());
    let mut x = (lo + hi) * lit(0.5);
    let mut last_width = hi - lo;
    for _ in 0..200 {
        let (v, d) = f(x);
        let r = v - y;
        if r.abs() <= resid_tol {
            return Ok(x);
        }
        if r > T::zero() {
            hi = x;
        } else {
            lo = x;
        }
        let width = hi - lo;
        if width <= tol * (T::one() + x.abs()) {
            return Ok(x);
        }
        // Newton only while it keeps halving the bracket; otherwise bisect
        let stalled = width > last_width * lit(0.5);
        last_width = width;
        let newton = x - r / d;
        let next = if !stalled && d > T::zero() && newton > lo && newton < hi { newton } else { (lo + hi) * lit(0.5) };
        x = next;
    }
    Err(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_cubic() {
        let x = solve_increasing(|x: f64| (x * x * x + x, 3.0 * x * x + 1.0), 0.5, 0.0, 1.0).unwrap();
        assert!((x * x * x + x - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bad_derivative_still_brackets() {
        let x = solve_increasing(|x: f64| (x.powi(3), 0.0), 0.001, -1.0, 1.0).unwrap();
        assert!((x - 0.1).abs() < 1e-13);
    }

    #[test]
    fn tiny_jump_does_not_stall_newton() {
        // increasing, with a jump of 1e-15 at 0.3 straddling the target
        let f = |x: f64| (x + if x < 0.3 { 0.0 } else { 1e-15 }, 1.0);
        let x = solve_increasing(f, 0.3 + 5e-16, -1.0, 1.0).unwrap();
        assert!((x - 0.3).abs() < 1e-13);
    }
}
