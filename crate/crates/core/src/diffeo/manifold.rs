use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Scalar};

/// The unit interval or the circle `ℝ/ℤ`, parametrized by `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Manifold {
    Interval,
    Circle,
}

impl Manifold {
    pub fn name(self) -> &'static str {
        match self {
            Manifold::Interval => "interval",
            Manifold::Circle => "circle",
        }
    }

    /// Distance between points given in the `[0, 1]` parametrization: `|x − y|`
    /// on the interval, the chord `|e^{2πix} − e^{2πiy}|` on the circle.
    pub fn distance<T: Scalar>(self, x: T, y: T) -> T {
        match self {
            Manifold::Interval => (x - y).abs(),
            Manifold::Circle => {
                let d = x - y;
                // the chord length 2|sin(πd)| only depends on d mod 1
                let d = d - d.round();
                lit::<T>(2.0) * (T::PI() * d).sin().abs()
            }
        }
    }
}

impl std::str::FromStr for Manifold {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "interval" => Ok(Manifold::Interval),
            "circle" => Ok(Manifold::Circle),
            other => Err(format!("unknown manifold `{other}` (expected interval or circle)")),
        }
    }
}

impl std::fmt::Display for Manifold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `d_M(x, y)`.
pub fn manifold_distance<T: Scalar>(m: Manifold, x: T, y: T) -> T {
    m.distance(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_distance() {
        assert!(Manifold::Circle.distance(0.0, 1.0_f64).abs() < 1e-15);
        assert!((Manifold::Circle.distance(0.0, 0.5_f64) - 2.0).abs() < 1e-15);
        let h = 0.1_f64;
        let chord = ((2.0 * std::f64::consts::PI * h).cos() - 1.0).hypot((2.0 * std::f64::consts::PI * h).sin());
        assert!((Manifold::Circle.distance(h, 0.0) - chord).abs() < 1e-15);
        assert!((Manifold::Interval.distance(0.2, 0.7_f64) - 0.5).abs() < 1e-15);
    }
}
