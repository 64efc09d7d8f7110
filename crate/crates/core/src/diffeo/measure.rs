use crate::diffeo::element::Diffeo;
use crate::error::{Error, Result};
use crate::realfn::{integrate, Interval, QuadratureOptions};
use crate::scalar::Scalar;

/// Finite union of closed intervals in `[0, 1]`, sorted, meeting at most in
/// endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion<T> {
    parts: Vec<Interval<T>>,
}

impl<T: Scalar> IntervalUnion<T> {
    pub fn new(parts: Vec<Interval<T>>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0].hi() > w[1].lo()) {
            return Err(Error::Parameter("intervals must be sorted and pairwise disjoint".into()));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[Interval<T>] {
        &self.parts
    }

    /// Lebesgue measure.
    pub fn measure(&self) -> T {
        self.parts.iter().fold(T::zero(), |s, i| s + i.length())
    }

    /// Disjoint union; fails if the pieces overlap.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut parts: Vec<Interval<T>> = self.parts.iter().chain(&other.parts).copied().collect();
        parts.sort_by(|a, b| a.lo().partial_cmp(&b.lo()).unwrap());
        Self::new(parts)
    }
}

/// `λ(f(E)) = Σ ∫ f'` over the components of `E`.
pub fn pushforward_measure<T: Scalar>(f: &Diffeo<T>, e: &IntervalUnion<T>) -> Result<T> {
    let d = |x: T| f.derivatives_unchecked(x, 1)[1];
    let mut total = T::zero();
    for part in e.parts() {
        let (lo, hi) = (part.lo(), part.hi());
        let splits = f.breakpoints(lo, hi);
        total = total + integrate(d, lo, hi, &splits, QuadratureOptions::default())?.value;
    }
    Ok(total)
}
