//! Real functions on `[0, 1]`: piecewise polynomials, singular staircases,
//! functions of bounded variation, quadrature, norms and total variation.

mod bvfunc;
mod compose;
mod density;
mod descriptor;
mod handle;
mod interval;
mod norms;
mod piecewise;
mod polynomial;
pub mod quadrature;
mod staircase;
mod variation;

pub use bvfunc::BvFunc;
pub use compose::{compose_with, Composed};
pub use density::Density;
pub use descriptor::{AcDescriptor, FunctionDescriptor, StaircaseDescriptor};
pub use handle::{Combination, FnHandle, RealFn};
pub use interval::Interval;
pub use norms::{l1_norm, l1_norm_with, sup_estimate, uniform_norm};
pub use piecewise::PiecewisePolynomial;
pub use polynomial::Polynomial;
pub use quadrature::{gauss_kronrod, integrate, Estimate, QuadratureOptions};
pub use staircase::{active_sets_disjoint, SingularStaircase, StaircaseBase, CLASSICAL_RADIX};
pub use variation::{
    bv_norm, total_variation, total_variation_detailed, variation_oracle, variation_oracle_with, OracleOptions,
    VariationEstimate, VariationMode,
};
