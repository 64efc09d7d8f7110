use crate::scalar::{lit, sort_dedup, Scalar};

/// Dense polynomial in the global coordinate `x`, coefficients in ascending
/// powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&T::zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![T::zero()])
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `slope * x + intercept`
    pub fn linear(intercept: T, slope: T) -> Self {
        Self::new(vec![intercept, slope])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Degree of the polynomial; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let d = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * T::from_usize_lossy(i))
            .collect();
        Self::new(d)
    }

    /// `j`-th derivative.
    pub fn nth_derivative(&self, j: usize) -> Self {
        (0..j).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative vanishing at `x = 0`.
    pub fn antiderivative(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(T::zero());
        for (i, &a) in self.coeffs.iter().enumerate() {
            c.push(a / T::from_usize_lossy(i + 1));
        }
        Self::new(c)
    }

    pub fn scale(&self, k: T) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[T], i: usize| v.get(i).copied().unwrap_or_else(T::zero);
        Self::new((0..n).map(|i| get(&self.coeffs, i) + get(&other.coeffs, i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Self::new(out)
    }

    /// Real roots in `[lo, hi]`, isolated through the critical points and
    /// refined by bisection to full precision.
    pub fn roots_in(&self, lo: T, hi: T) -> Vec<T> {
        if lo > hi || self.is_zero() {
            return Vec::new();
        }
        match self.degree() {
            0 => Vec::new(),
            1 => {
                let r = -self.coeffs[0] / self.coeffs[1];
                if r >= lo && r <= hi {
                    vec![r]
                } else {
                    Vec::new()
                }
            }
            _ => {
                let mut knots = vec![lo];
                knots.extend(self.derivative().roots_in(lo, hi));
                knots.push(hi);
                let mut roots = Vec::new();
                for w in knots.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let (fa, fb) = (self.eval(a), self.eval(b));
                    if fa.is_zero() {
                        roots.push(a);
                    }
                    if fb.is_zero() {
                        roots.push(b);
                    }
                    if fa * fb < T::zero() {
                        roots.push(bisect(|x| self.eval(x), a, b, fa));
                    }
                }
                sort_dedup(&mut roots);
                roots
            }
        }
    }

    /// Points in the open interval `(lo, hi)` where the derivative vanishes.
    pub fn critical_points_in(&self, lo: T, hi: T) -> Vec<T> {
        self.derivative()
            .roots_in(lo, hi)
            .into_iter()
            .filter(|&x| x > lo && x < hi)
            .collect()
    }

    /// Largest absolute coefficient; used to scale continuity tolerances.
    pub(crate) fn coeff_scale(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()))
    }
}

pub(crate) fn bisect<T: Scalar>(f: impl Fn(T) -> T, mut a: T, mut b: T, mut fa: T) -> T {
    let two = lit::<T>(2.0);
    for _ in 0..256 {
        let m = a + (b - a) / two;
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm.is_zero() {
            return m;
        }
        if (fm < T::zero()) == (fa < T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    a + (b - a) / two
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_derivative() {
        let p = Polynomial::new(vec![0.0, 1.0, -1.0]);
        assert_eq!(p.eval(0.5), 0.25);
        assert_eq!(p.derivative().coeffs(), &[1.0, -2.0]);
        assert_eq!(p.antiderivative().eval(1.0), 1.0 / 2.0 - 1.0 / 3.0);
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Polynomial::new(vec![1.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 0);
        assert!(Polynomial::<f64>::new(vec![]).is_zero());
    }

    #[test]
    fn roots_of_cubic() {
        // (x - 0.2)(x - 0.5)(x - 0.9)
        let p = Polynomial::<f64>::new(vec![-0.09, 0.73, -1.6, 1.0]);
        let r = p.roots_in(0.0, 1.0);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([0.2, 0.5, 0.9]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn critical_point_of_parabola() {
        let p = Polynomial::new(vec![0.0, 1.0, -1.0]);
        assert_eq!(p.critical_points_in(0.0, 1.0), vec![0.5]);
    }

    #[test]
    fn double_root_is_found_via_critical_point() {
        let p = Polynomial::new(vec![0.25, -1.0, 1.0]); // (x - 1/2)^2
        assert_eq!(p.roots_in(0.0, 1.0), vec![0.5]);
    }
}

impl<T: Scalar> Polynomial<T> {
    /// First `n + 1` Taylor coefficients about `x`: `p(x + t) = Σ a_i t^i`.
    pub fn taylor_at(&self, x: T, n: usize) -> Vec<T> {
        let mut c = self.coeffs.clone();
        let deg = c.len() - 1;
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..=n {
            if i > deg {
                out.push(T::zero());
                continue;
            }
            // synthetic division by (t - x); the remainder is the next coefficient
            for j in (i..deg).rev() {
                c[j] = c[j] + x * c[j + 1];
            }
            out.push(c[i]);
        }
        out
    }
}

#[cfg(test)]
mod taylor_tests {
    use super::*;

    #[test]
    fn taylor_coefficients_match_derivatives() {
        let p = Polynomial::<f64>::new(vec![1.0, -2.0, 0.5, 3.0]);
        let a = p.taylor_at(0.3, 4);
        assert!((a[0] - p.eval(0.3)).abs() < 1e-15);
        assert!((a[1] - p.derivative().eval(0.3)).abs() < 1e-14);
        assert!((a[2] - p.nth_derivative(2).eval(0.3) / 2.0).abs() < 1e-14);
        assert!((a[3] - 3.0).abs() < 1e-14);
        assert_eq!(a[4], 0.0);
    }
}
