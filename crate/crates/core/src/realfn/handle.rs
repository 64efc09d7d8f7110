//! Evaluable real functions on the unit interval.

use std::sync::Arc;

use crate::scalar::{sort_dedup, Scalar};

/// A real function on `[0, 1]` that can be sampled pointwise.
///
/// `breakpoints` reports points where the function may fail to be smooth or
/// monotone. Partition-based estimators seed their partitions with them; a
/// function that is monotone between consecutive reported breakpoints has
/// its variation resolved exactly by any partition that contains them.
pub trait RealFn<T: Scalar>: Send + Sync {
    fn eval(&self, x: T) -> T;

    fn breakpoints(&self, _lo: T, _hi: T) -> Vec<T> {
        Vec::new()
    }

    /// Exact total variation on `[lo, hi]` when the representation certifies it.
    fn structural_variation(&self, _lo: T, _hi: T) -> Option<T> {
        None
    }
}

impl<T: Scalar, F: RealFn<T> + ?Sized> RealFn<T> for Arc<F> {
    fn eval(&self, x: T) -> T {
        (**self).eval(x)
    }

    fn breakpoints(&self, lo: T, hi: T) -> Vec<T> {
        (**self).breakpoints(lo, hi)
    }

    fn structural_variation(&self, lo: T, hi: T) -> Option<T> {
        (**self).structural_variation(lo, hi)
    }
}

impl<T: Scalar, F: RealFn<T> + ?Sized> RealFn<T> for &F {
    fn eval(&self, x: T) -> T {
        (**self).eval(x)
    }

    fn breakpoints(&self, lo: T, hi: T) -> Vec<T> {
        (**self).breakpoints(lo, hi)
    }

    fn structural_variation(&self, lo: T, hi: T) -> Option<T> {
        (**self).structural_variation(lo, hi)
    }
}

/// Closure with an explicit breakpoint list.
pub struct FnHandle<T, F> {
    f: F,
    breaks: Vec<T>,
}

impl<T: Scalar, F: Fn(T) -> T + Send + Sync> FnHandle<T, F> {
    pub fn new(f: F, mut breaks: Vec<T>) -> Self {
        sort_dedup(&mut breaks);
        Self { f, breaks }
    }
}

impl<T: Scalar, F: Fn(T) -> T + Send + Sync> RealFn<T> for FnHandle<T, F> {
    fn eval(&self, x: T) -> T {
        (self.f)(x)
    }

    fn breakpoints(&self, lo: T, hi: T) -> Vec<T> {
        self.breaks.iter().copied().filter(|&b| b >= lo && b <= hi).collect()
    }
}

/// Pointwise linear combination `Σ c_i f_i` of arbitrary handles.
#[derive(Clone)]
pub struct Combination<T> {
    terms: Vec<(T, Arc<dyn RealFn<T>>)>,
}

impl<T: Scalar> Combination<T> {
    pub fn new() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn with(mut self, coeff: T, f: Arc<dyn RealFn<T>>) -> Self {
        self.terms.push((coeff, f));
        self
    }
}

impl<T: Scalar> Default for Combination<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> RealFn<T> for Combination<T> {
    fn eval(&self, x: T) -> T {
        self.terms.iter().fold(T::zero(), |acc, (c, f)| acc + *c * f.eval(x))
    }

    fn breakpoints(&self, lo: T, hi: T) -> Vec<T> {
        let mut out: Vec<T> = self.terms.iter().flat_map(|(_, f)| f.breakpoints(lo, hi)).collect();
        sort_dedup(&mut out);
        out
    }
}
