#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diffeo;
pub mod error;
pub mod experiments;
pub mod metrics;
pub mod realfn;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type BvFunc64 = realfn::BvFunc<f64>;
pub type Density64 = realfn::Density<f64>;
pub type PiecewisePolynomial64 = realfn::PiecewisePolynomial<f64>;
pub type Polynomial64 = realfn::Polynomial<f64>;
pub type Diffeo64 = diffeo::Diffeo<f64>;
pub type MetricValue64 = metrics::MetricValue<f64>;
