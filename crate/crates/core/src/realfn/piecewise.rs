use crate::error::{Error, Result};
use crate::realfn::handle::RealFn;
use crate::realfn::polynomial::Polynomial;
use crate::scalar::{lit, sort_dedup, Scalar};

/// Breakpoints plus one polynomial per piece. Shared by the continuous
/// [`PiecewisePolynomial`] and the possibly discontinuous densities.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Pieces<T> {
    pub(crate) breaks: Vec<T>,
    pub(crate) polys: Vec<Polynomial<T>>,
}

impl<T: Scalar> Pieces<T> {
    pub(crate) fn new(breaks: Vec<T>, polys: Vec<Polynomial<T>>) -> Result<Self> {
        if polys.is_empty() || breaks.len() != polys.len() + 1 {
            return Err(Error::Parameter(format!(
                "{} breakpoints for {} pieces (need pieces + 1, at least one piece)",
                breaks.len(),
                polys.len()
            )));
        }
        if breaks[0] != T::zero() || *breaks.last().unwrap() != T::one() {
            return Err(Error::Parameter("breakpoints must start at 0 and end at 1".into()));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Parameter("breakpoints must be strictly increasing".into()));
        }
        Ok(Self { breaks, polys })
    }

    pub(crate) fn single(p: Polynomial<T>) -> Self {
        Self { breaks: vec![T::zero(), T::one()], polys: vec![p] }
    }

    pub(crate) fn index(&self, x: T) -> usize {
        let n = self.polys.len();
        // largest i with breaks[i] <= x, clamped to a valid piece
        let i = self.breaks.partition_point(|&b| b <= x);
        i.saturating_sub(1).min(n - 1)
    }

    pub(crate) fn eval(&self, x: T) -> T {
        self.polys[self.index(x)].eval(x)
    }

    pub(crate) fn map(&self, f: impl Fn(&Polynomial<T>) -> Polynomial<T>) -> Self {
        Self { breaks: self.breaks.clone(), polys: self.polys.iter().map(f).collect() }
    }

    /// Linear combination on the union of breakpoints.
    pub(crate) fn combine(terms: &[(T, &Pieces<T>)]) -> Self {
        let mut breaks: Vec<T> = terms.iter().flat_map(|(_, p)| p.breaks.iter().copied()).collect();
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup();
        let two = lit::<T>(2.0);
        let polys = breaks
            .windows(2)
            .map(|w| {
                let mid = (w[0] + w[1]) / two;
                terms.iter().fold(Polynomial::zero(), |acc, (c, p)| acc.add(&p.polys[p.index(mid)].scale(*c)))
            })
            .collect();
        Self { breaks, polys }
    }

    /// Breakpoints strictly inside `(lo, hi)`.
    pub(crate) fn interior_breaks(&self, lo: T, hi: T) -> impl Iterator<Item = T> + '_ {
        self.breaks.iter().copied().filter(move |&b| b > lo && b < hi)
    }

    /// Segment endpoints in `[lo, hi]` such that each piece is monotone on every
    /// segment; the piece index for each segment is returned with it.
    pub(crate) fn monotone_segments(&self, lo: T, hi: T) -> Vec<(T, T, usize)> {
        let mut out = Vec::new();
        if lo >= hi {
            return out;
        }
        let mut knots = vec![lo];
        knots.extend(self.interior_breaks(lo, hi));
        knots.push(hi);
        for w in knots.windows(2) {
            let (a, b) = (w[0], w[1]);
            let i = self.index((a + b) / lit(2.0));
            let mut pts = vec![a];
            pts.extend(self.polys[i].critical_points_in(a, b));
            pts.push(b);
            for s in pts.windows(2) {
                out.push((s[0], s[1], i));
            }
        }
        out
    }

    /// Breakpoints and critical points inside `[lo, hi]`.
    pub(crate) fn structural_points(&self, lo: T, hi: T) -> Vec<T> {
        let mut pts: Vec<T> = self
            .monotone_segments(lo, hi)
            .into_iter()
            .flat_map(|(a, b, _)| [a, b])
            .collect();
        sort_dedup(&mut pts);
        pts
    }

    /// Segment endpoints in `[lo, hi]` after splitting at breakpoints and at
    /// sign changes of each piece.
    pub(crate) fn sign_segments(&self, lo: T, hi: T) -> Vec<T> {
        let mut pts = vec![lo, hi];
        pts.extend(self.interior_breaks(lo, hi));
        let mut knots = pts.clone();
        sort_dedup(&mut knots);
        for w in knots.windows(2) {
            let i = self.index((w[0] + w[1]) / lit(2.0));
            pts.extend(self.polys[i].roots_in(w[0], w[1]));
        }
        sort_dedup(&mut pts);
        pts
    }

    pub(crate) fn integral(&self, lo: T, hi: T) -> T {
        let mut knots = vec![lo];
        knots.extend(self.interior_breaks(lo, hi));
        knots.push(hi);
        knots
            .windows(2)
            .map(|w| {
                let a = self.polys[self.index((w[0] + w[1]) / lit(2.0))].antiderivative();
                a.eval(w[1]) - a.eval(w[0])
            })
            .fold(T::zero(), |s, v| s + v)
    }
}

/// Continuous piecewise polynomial on `[0, 1]`.
///
/// Coefficients are given per piece in ascending powers of the global
/// coordinate `x`. At an interior breakpoint the right piece is used.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePolynomial<T> {
    pub(crate) inner: Pieces<T>,
}

impl<T: Scalar> PiecewisePolynomial<T> {
    /// Builds from breakpoints and per-piece coefficients, checking value
    /// continuity at every interior breakpoint.
    pub fn new(breakpoints: Vec<T>, coeffs: Vec<Vec<T>>) -> Result<Self> {
        let polys = coeffs.into_iter().map(Polynomial::new).collect();
        let inner = Pieces::new(breakpoints, polys)?;
        for (i, &b) in inner.breaks.iter().enumerate().skip(1).take(inner.polys.len() - 1) {
            let (l, r) = (&inner.polys[i - 1], &inner.polys[i]);
            let (vl, vr) = (l.eval(b), r.eval(b));
            let scale = T::one() + l.coeff_scale().max(r.coeff_scale());
            if (vl - vr).abs() > lit::<T>(1e-9) * scale {
                return Err(Error::Parameter(format!(
                    "discontinuity at breakpoint {b}: left {vl}, right {vr}"
                )));
            }
        }
        Ok(Self { inner })
    }

    pub fn from_polynomial(p: Polynomial<T>) -> Self {
        Self { inner: Pieces::single(p) }
    }

    pub fn zero() -> Self {
        Self::from_polynomial(Polynomial::zero())
    }

    pub fn constant(c: T) -> Self {
        Self::from_polynomial(Polynomial::constant(c))
    }

    /// Continuous piecewise-linear interpolant through `(xs[i], ys[i])`.
    pub fn linear_interpolant(xs: Vec<T>, ys: &[T]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch { left: xs.len(), right: ys.len() });
        }
        let polys = xs
            .windows(2)
            .zip(ys.windows(2))
            .map(|(x, y)| {
                let slope = (y[1] - y[0]) / (x[1] - x[0]);
                Polynomial::linear(y[0] - slope * x[0], slope)
            })
            .collect();
        Ok(Self { inner: Pieces::new(xs, polys)? })
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.inner.breaks
    }

    pub fn pieces(&self) -> &[Polynomial<T>] {
        &self.inner.polys
    }

    pub fn eval(&self, x: T) -> T {
        self.inner.eval(x)
    }

    /// Taylor coefficients of the piece active at `x` (right piece at a breakpoint).
    pub fn taylor_at(&self, x: T, n: usize) -> Vec<T> {
        self.inner.polys[self.inner.index(x)].taylor_at(x, n)
    }

    /// `j`-th derivative at `x`, right-continuous at breakpoints.
    pub fn derivative_at(&self, x: T, j: usize) -> T {
        let mut f = T::one();
        for i in 2..=j {
            f = f * T::from_usize_lossy(i);
        }
        self.taylor_at(x, j)[j] * f
    }

    pub fn is_zero(&self) -> bool {
        self.inner.polys.iter().all(|p| p.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.inner.polys.iter().all(|p| p.is_constant())
    }

    pub fn scale(&self, k: T) -> Self {
        Self { inner: self.inner.map(|p| p.scale(k)) }
    }

    pub fn add_constant(&self, c: T) -> Self {
        Self { inner: self.inner.map(|p| p.add(&Polynomial::constant(c))) }
    }

    /// Linear combination on the union of breakpoints.
    pub fn combine(terms: &[(T, &PiecewisePolynomial<T>)]) -> Self {
        let inner: Vec<(T, &Pieces<T>)> = terms.iter().map(|(c, p)| (*c, &p.inner)).collect();
        Self { inner: Pieces::combine(&inner) }
    }

    /// Exact `∫_lo^hi p`.
    pub fn integral(&self, lo: T, hi: T) -> T {
        self.inner.integral(lo, hi)
    }

    /// Exact total variation on `[lo, hi]`: the sum of `|Δp|` over segments on
    /// which every piece is monotone.
    pub fn variation(&self, lo: T, hi: T) -> T {
        self.inner
            .monotone_segments(lo, hi)
            .into_iter()
            .map(|(a, b, i)| (self.inner.polys[i].eval(b) - self.inner.polys[i].eval(a)).abs())
            .fold(T::zero(), |s, v| s + v)
    }

    /// Direction of monotonicity on `[lo, hi]`: `Some(1)` nondecreasing,
    /// `Some(-1)` nonincreasing, `Some(0)` constant, `None` otherwise.
    pub fn monotone_direction(&self, lo: T, hi: T) -> Option<i8> {
        let tiny = T::epsilon() * lit(64.0);
        let mut up = false;
        let mut down = false;
        for (a, b, i) in self.inner.monotone_segments(lo, hi) {
            let p = &self.inner.polys[i];
            let d = p.eval(b) - p.eval(a);
            let scale = T::one() + p.eval(a).abs().max(p.eval(b).abs());
            if d > tiny * scale {
                up = true;
            } else if d < -tiny * scale {
                down = true;
            }
        }
        match (up, down) {
            (false, false) => Some(0),
            (true, false) => Some(1),
            (false, true) => Some(-1),
            (true, true) => None,
        }
    }

    /// Largest `|p'|` on `[lo, hi]`.
    pub fn max_abs_slope(&self, lo: T, hi: T) -> T {
        let mut m = T::zero();
        let mut knots = vec![lo];
        knots.extend(self.inner.interior_breaks(lo, hi));
        knots.push(hi);
        for w in knots.windows(2) {
            let d = self.inner.polys[self.inner.index((w[0] + w[1]) / lit(2.0))].derivative();
            let mut cands = vec![w[0], w[1]];
            cands.extend(d.critical_points_in(w[0], w[1]));
            for x in cands {
                m = m.max(d.eval(x).abs());
            }
        }
        m
    }

    /// Checks that derivatives of orders `1..=order` agree from both sides of
    /// every interior breakpoint.
    pub fn is_smooth_to_order(&self, order: usize, tol: T) -> bool {
        let n = self.inner.polys.len();
        (1..n).all(|i| {
            let b = self.inner.breaks[i];
            let (l, r) = (&self.inner.polys[i - 1], &self.inner.polys[i]);
            (1..=order).all(|j| {
                let (dl, dr) = (l.nth_derivative(j).eval(b), r.nth_derivative(j).eval(b));
                (dl - dr).abs() <= tol * (T::one() + dl.abs().max(dr.abs()))
            })
        })
    }

    /// Breakpoints and critical points within `[lo, hi]`, endpoints included.
    pub fn structural_points(&self, lo: T, hi: T) -> Vec<T> {
        self.inner.structural_points(lo, hi)
    }
}

impl<T: Scalar> RealFn<T> for PiecewisePolynomial<T> {
    fn eval(&self, x: T) -> T {
        self.inner.eval(x)
    }

    fn breakpoints(&self, lo: T, hi: T) -> Vec<T> {
        self.inner.structural_points(lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parabola() -> PiecewisePolynomial<f64> {
        PiecewisePolynomial::from_polynomial(Polynomial::new(vec![0.0, 1.0, -1.0]))
    }

    #[test]
    fn rejects_discontinuity() {
        let err = PiecewisePolynomial::new(vec![0.0, 0.5, 1.0], vec![vec![0.0], vec![1.0]]);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(PiecewisePolynomial::<f64>::new(vec![0.0, 0.5, 0.5, 1.0], vec![vec![0.0]; 3]).is_err());
        assert!(PiecewisePolynomial::<f64>::new(vec![0.1, 1.0], vec![vec![0.0]]).is_err());
        assert!(PiecewisePolynomial::<f64>::new(vec![0.0, 1.0], vec![]).is_err());
    }

    #[test]
    fn interior_breakpoint_is_continuous() {
        let p = PiecewisePolynomial::<f64>::linear_interpolant(vec![0.0, 0.25, 1.0], &[0.0, 1.0, -0.5]).unwrap();
        assert!((p.inner.polys[0].eval(0.25) - p.inner.polys[1].eval(0.25)).abs() < 1e-15);
        assert_eq!(p.eval(0.25), 1.0);
    }

    #[test]
    fn variation_of_parabola() {
        assert!((parabola().variation(0.0, 1.0) - 0.5).abs() < 1e-15);
        assert!((parabola().variation(0.0, 0.5) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn combine_on_union_of_breakpoints() {
        let a = PiecewisePolynomial::<f64>::linear_interpolant(vec![0.0, 0.5, 1.0], &[0.0, 1.0, 0.0]).unwrap();
        let b = PiecewisePolynomial::linear_interpolant(vec![0.0, 0.25, 1.0], &[1.0, 0.0, 0.0]).unwrap();
        let c = PiecewisePolynomial::combine(&[(2.0, &a), (-1.0, &b)]);
        assert_eq!(c.breakpoints(), &[0.0, 0.25, 0.5, 1.0]);
        for x in [0.0, 0.1, 0.3, 0.5, 0.77, 1.0] {
            assert!((c.eval(x) - (2.0 * a.eval(x) - b.eval(x))).abs() < 1e-14);
        }
    }

    #[test]
    fn monotone_direction_detects_turning_point() {
        assert_eq!(parabola().monotone_direction(0.0, 0.5), Some(1));
        assert_eq!(parabola().monotone_direction(0.5, 1.0), Some(-1));
        assert_eq!(parabola().monotone_direction(0.0, 1.0), None);
        assert_eq!(PiecewisePolynomial::constant(3.0).monotone_direction(0.0, 1.0), Some(0));
    }

    #[test]
    fn smoothness_order() {
        let hat = PiecewisePolynomial::linear_interpolant(vec![0.0, 0.5, 1.0], &[0.0, 1.0, 0.0]).unwrap();
        assert!(!hat.is_smooth_to_order(1, 1e-9));
        assert!(parabola().is_smooth_to_order(3, 1e-9));
    }
}
