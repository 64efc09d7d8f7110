use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Closed subinterval `[lo, hi]` of the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(lo >= T::zero() && lo <= hi && hi <= T::one()) {
            return Err(Error::Parameter(format!(
                "interval [{lo}, {hi}] is not a subinterval of [0, 1]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn unit() -> Self {
        Self { lo: T::zero(), hi: T::one() }
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn length(&self) -> T {
        self.hi - self.lo
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Splits at `e`, which must lie in the interval.
    pub fn split(&self, e: T) -> Result<(Self, Self)> {
        if !self.contains(e) {
            return Err(Error::Domain { x: e.as_f64(), lo: self.lo.as_f64(), hi: self.hi.as_f64() });
        }
        Ok((Self { lo: self.lo, hi: e }, Self { lo: e, hi: self.hi }))
    }
}
