use crate::error::Result;
use crate::realfn::handle::RealFn;
use crate::realfn::piecewise::Pieces;
use crate::realfn::polynomial::Polynomial;
use crate::realfn::staircase::SingularStaircase;
use crate::scalar::Scalar;

/// A real function defined almost everywhere: a piecewise polynomial that may
/// jump at its breakpoints, plus the active sets of singular staircases on
/// which the value is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct Density<T> {
    pub(crate) inner: Pieces<T>,
    pub(crate) singular: Vec<SingularStaircase<T>>,
}

impl<T: Scalar> Density<T> {
    /// Piecewise polynomial density; no continuity is required.
    pub fn piecewise(breakpoints: Vec<T>, coeffs: Vec<Vec<T>>) -> Result<Self> {
        let polys = coeffs.into_iter().map(Polynomial::new).collect();
        Ok(Self { inner: Pieces::new(breakpoints, polys)?, singular: Vec::new() })
    }

    pub fn zero() -> Self {
        Self { inner: Pieces::single(Polynomial::zero()), singular: Vec::new() }
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.inner.breaks
    }

    pub fn pieces(&self) -> &[Polynomial<T>] {
        &self.inner.polys
    }

    /// Value of the absolutely continuous part, ignoring the flagged set.
    pub fn ac_value(&self, x: T) -> T {
        self.inner.eval(x)
    }

    /// `None` on a singular active set, where the density is undefined.
    pub fn eval(&self, x: T) -> Option<T> {
        if self.singular.iter().any(|s| s.in_active_set(x)) {
            None
        } else {
            Some(self.inner.eval(x))
        }
    }

    pub fn has_singular_support(&self) -> bool {
        !self.singular.is_empty()
    }

    /// Exact `∫_lo^hi` of the density.
    pub fn integral(&self, lo: T, hi: T) -> T {
        self.inner.integral(lo, hi)
    }

    pub fn scale(&self, k: T) -> Self {
        Self { inner: self.inner.map(|p| p.scale(k)), singular: self.singular.clone() }
    }

    /// Pointwise product with a polynomial density on the union of breakpoints.
    pub fn mul(&self, other: &Density<T>) -> Self {
        let mut breaks: Vec<T> = self.inner.breaks.iter().chain(other.inner.breaks.iter()).copied().collect();
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup();
        let polys = breaks
            .windows(2)
            .map(|w| {
                let mid = (w[0] + w[1]) / T::lit(2.0);
                self.inner.polys[self.inner.index(mid)].mul(&other.inner.polys[other.inner.index(mid)])
            })
            .collect();
        let mut singular = self.singular.clone();
        singular.extend(other.singular.iter().cloned());
        Self { inner: Pieces { breaks, polys }, singular }
    }

    pub fn combine(terms: &[(T, &Density<T>)]) -> Self {
        let inner: Vec<(T, &Pieces<T>)> = terms.iter().map(|(c, d)| (*c, &d.inner)).collect();
        let singular = terms.iter().flat_map(|(_, d)| d.singular.iter().cloned()).collect();
        Self { inner: Pieces::combine(&inner), singular }
    }
}

impl<T: Scalar> RealFn<T> for Density<T> {
    fn eval(&self, x: T) -> T {
        self.inner.eval(x)
    }

    /// Breakpoints and sign changes, so `|density|` is polynomial between them.
    fn breakpoints(&self, lo: T, hi: T) -> Vec<T> {
        self.inner.sign_segments(lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jump_is_allowed() {
        let d = Density::piecewise(vec![0.0, 0.5, 1.0], vec![vec![1.0], vec![-2.0]]).unwrap();
        assert_eq!(d.eval(0.25), Some(1.0));
        assert_eq!(d.eval(0.5), Some(-2.0));
        assert_eq!(d.integral(0.0, 1.0), -0.5);
    }
}
