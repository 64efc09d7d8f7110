//! Scalar abstraction shared by the numeric core.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar representable as f64")
    }

    /// Default absolute tolerance for quadrature and oracle increments.
    fn default_tol() -> Self {
        Self::lit(1e-9).max(Self::epsilon() * Self::lit(256.0))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::lit(x)
}

/// Sorts and removes near-duplicates (within a few ulps of the larger magnitude).
pub(crate) fn sort_dedup<T: Scalar>(v: &mut Vec<T>) {
    v.retain(|x| x.is_finite());
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let eps = T::epsilon() * lit(4.0);
    v.dedup_by(|b, a| (*b - *a).abs() <= eps * a.abs().max(b.abs()).max(T::one()));
}
