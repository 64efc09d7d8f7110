use serde::{Deserialize, Serialize};

use crate::diffeo::element::{Diffeo, Repr};
use crate::diffeo::manifold::Manifold;
use crate::error::{Error, Result};
use crate::realfn::{BvFunc, FunctionDescriptor};
use crate::scalar::Scalar;

/// Serializable form of a diffeomorphism built from a log-derivative, or of
/// a rotation (`log_derivative: null`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffeoDescriptor {
    pub manifold: Manifold,
    pub k: usize,
    pub log_derivative: Option<FunctionDescriptor>,
    #[serde(default)]
    pub rotation_offset: f64,
}

impl<T: Scalar> Diffeo<T> {
    /// Fails for compositions, inverses and polynomial lifts.
    pub fn to_descriptor(&self) -> Result<DiffeoDescriptor> {
        let (log_derivative, rotation_offset) = match self.repr() {
            Repr::Translation { shift } => (None, shift.as_f64()),
            Repr::Exp { lift, offset } => (Some(lift.g.to_descriptor()), offset.as_f64()),
            _ => return Err(Error::Descriptor("only log-derivative diffeomorphisms and rotations have descriptors".into())),
        };
        Ok(DiffeoDescriptor { manifold: self.manifold(), k: self.order(), log_derivative, rotation_offset })
    }

    pub fn from_descriptor(d: &DiffeoDescriptor) -> Result<Self> {
        let r = T::lit(d.rotation_offset);
        match (&d.log_derivative, d.manifold) {
            (Some(g), m) => Self::from_log_derivative(BvFunc::from_descriptor(g)?, m, r, d.k),
            (None, Manifold::Circle) => Self::rotation(r, d.k),
            (None, Manifold::Interval) if d.rotation_offset == 0.0 => Self::identity(Manifold::Interval, d.k),
            (None, Manifold::Interval) => Err(Error::Descriptor("an interval diffeomorphism cannot rotate".into())),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_descriptor()?)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_descriptor(&serde_json::from_str(s)?)
    }
}
