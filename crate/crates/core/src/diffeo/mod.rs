//! Orientation-preserving diffeomorphisms of the interval and the circle:
//! lifts, composition, inversion, derivative towers and regularity.

mod descriptor;
mod element;
mod explift;
pub(crate) mod jet;
mod logderiv;
mod manifold;
mod measure;
mod regularity;
mod solve;

pub use descriptor::DiffeoDescriptor;
pub use element::{Diffeo, RegularityClass, TowerHandle, MAX_ORDER};
pub use logderiv::LogDerivative;
pub use manifold::{manifold_distance, Manifold};
pub use measure::{pushforward_measure, IntervalUnion};
pub use regularity::{regularity_check, RegularityReport};
