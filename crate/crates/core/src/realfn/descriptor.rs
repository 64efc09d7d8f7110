use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::realfn::bvfunc::BvFunc;
use crate::realfn::piecewise::PiecewisePolynomial;
use crate::realfn::staircase::{SingularStaircase, StaircaseBase, CLASSICAL_RADIX};
use crate::scalar::Scalar;

/// Serializable form of a [`BvFunc`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionDescriptor {
    pub ac: AcDescriptor,
    #[serde(default)]
    pub singular: Vec<StaircaseDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcDescriptor {
    pub breakpoints: Vec<f64>,
    pub coeffs: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaircaseDescriptor {
    pub base: StaircaseBase,
    pub depth: u32,
    pub a: f64,
    pub b: f64,
    pub scale: f64,
    pub offset: f64,
    #[serde(default = "classical_radix")]
    pub radix: u32,
}

fn classical_radix() -> u32 {
    CLASSICAL_RADIX
}

impl<T: Scalar> BvFunc<T> {
    pub fn to_descriptor(&self) -> FunctionDescriptor {
        let ac = AcDescriptor {
            breakpoints: self.ac().breakpoints().iter().map(|x| x.as_f64()).collect(),
            coeffs: self.ac().pieces().iter().map(|p| p.coeffs().iter().map(|c| c.as_f64()).collect()).collect(),
        };
        let singular = self
            .singular()
            .iter()
            .map(|s| StaircaseDescriptor {
                base: s.base(),
                depth: s.depth(),
                a: s.a().as_f64(),
                b: s.b().as_f64(),
                scale: s.scale().as_f64(),
                offset: s.offset().as_f64(),
                radix: s.radix(),
            })
            .collect();
        FunctionDescriptor { ac, singular }
    }

    pub fn from_descriptor(d: &FunctionDescriptor) -> Result<Self> {
        let conv = |v: &[f64]| v.iter().map(|&x| T::lit(x)).collect::<Vec<T>>();
        let ac = PiecewisePolynomial::new(conv(&d.ac.breakpoints), d.ac.coeffs.iter().map(|c| conv(c)).collect())
            .map_err(|e| Error::Descriptor(format!("ac part: {e}")))?;
        let singular = d
            .singular
            .iter()
            .map(|s| {
                SingularStaircase::new(s.base, s.radix, s.depth, T::lit(s.a), T::lit(s.b), T::lit(s.scale), T::lit(s.offset))
                    .map_err(|e| Error::Descriptor(format!("staircase: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BvFunc::new(ac, singular))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_descriptor())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_descriptor(&serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realfn::polynomial::Polynomial;

    #[test]
    fn round_trip_is_exact() {
        let f = BvFunc::linear_combine(
            &[0.1, -3.7],
            &[
                &BvFunc::from_polynomial(Polynomial::new(vec![0.1, 1.0 / 3.0, -std::f64::consts::PI])),
                &BvFunc::separated_family_member_with_radix(0.7, 1.0 / 7.0, 13, 4).unwrap(),
            ],
        )
        .unwrap();
        let back = BvFunc::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn radix_defaults_to_classical() {
        let s = r#"{"ac":{"breakpoints":[0,1],"coeffs":[[0]]},"singular":[{"base":"cantor","depth":5,"a":0,"b":1,"scale":1,"offset":0}]}"#;
        let f = BvFunc::<f64>::from_json(s).unwrap();
        assert_eq!(f.singular()[0].radix(), 3);
        assert!((f.value(1.0 / 3.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_malformed() {
        assert!(BvFunc::<f64>::from_json(r#"{"ac":{"breakpoints":[0,0.5],"coeffs":[[0]]}}"#).is_err());
        assert!(BvFunc::<f64>::from_json(r#"{"ac":{"breakpoints":[0,1],"coeffs":[[0]]},"singular":[{"base":"cantor","depth":0,"a":0,"b":1,"scale":1,"offset":0}]}"#).is_err());
    }
}
