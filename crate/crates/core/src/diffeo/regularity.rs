use serde::Serialize;

use crate::diffeo::element::{Diffeo, RegularityClass};
use crate::error::Result;
use crate::realfn::{total_variation, Interval};
use crate::scalar::Scalar;

/// Structural class of a diffeomorphism and the variation of `log f'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularityReport<T> {
    pub class: RegularityClass,
    pub log_derivative_variation: T,
    pub singular_part_empty: bool,
}

pub fn regularity_check<T: Scalar>(f: &Diffeo<T>) -> Result<RegularityReport<T>> {
    let v = total_variation(&f.log_derivative(), Interval::unit())?;
    Ok(RegularityReport {
        class: f.class(),
        log_derivative_variation: v,
        singular_part_empty: f.class() != RegularityClass::CkBv,
    })
}
