//! Seeded, reproducible numeric experiments and their reports.

pub mod ac_continuity;
pub mod bv_discontinuity;
pub mod change_of_variables;
pub mod random;
pub mod report;
pub mod separated;
pub mod variation_invariance;
pub mod wiener_young;

use std::fmt;
use std::str::FromStr;

use crate::diffeo::Manifold;
use crate::error::{Error, Result};

pub use report::{format_number, Cell, ExperimentReport, Format, Row};

/// Environment variable overriding [`DEFAULT_TOL`].
pub const TOL_ENV: &str = "DIFFLAB_TOL";
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Experiment {
    SeparatedFamily,
    WienerYoung,
    BvDiscontinuity,
    AcContinuity,
    ChangeOfVariables,
    VariationInvariance,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::SeparatedFamily,
        Experiment::WienerYoung,
        Experiment::BvDiscontinuity,
        Experiment::AcContinuity,
        Experiment::ChangeOfVariables,
        Experiment::VariationInvariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SeparatedFamily => "separated-family",
            Experiment::WienerYoung => "wiener-young",
            Experiment::BvDiscontinuity => "bv-discontinuity",
            Experiment::AcContinuity => "ac-continuity",
            Experiment::ChangeOfVariables => "change-of-variables",
            Experiment::VariationInvariance => "variation-invariance",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown experiment {s:?}")))
    }
}

/// Knobs shared by all experiments. `None` means the experiment default.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub depth: Option<u32>,
    pub seed: u64,
    pub k: Option<usize>,
    pub trials: Option<usize>,
    pub manifold: Option<Manifold>,
    pub tol: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self { depth: None, seed: 1, k: None, trials: None, manifold: None, tol: DEFAULT_TOL }
    }
}

impl Params {
    /// Defaults with the tolerance read from the environment.
    pub fn from_env() -> Result<Self> {
        Ok(Self { tol: tol_from_env()?, ..Self::default() })
    }
}

/// Assertion tolerance: the parsed value of the environment variable if set.
pub fn tol_from_env() -> Result<f64> {
    match std::env::var(TOL_ENV) {
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(Error::Parameter(format!("{TOL_ENV} must be a positive number, got {s:?}"))),
        },
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn both(m: Option<Manifold>) -> Vec<Manifold> {
    m.map_or_else(|| vec![Manifold::Interval, Manifold::Circle], |m| vec![m])
}

pub fn run(exp: Experiment, p: &Params) -> Result<ExperimentReport> {
    if !(p.tol > 0.0 && p.tol.is_finite()) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {}", p.tol)));
    }
    match exp {
        Experiment::SeparatedFamily => separated::run(1.0, p.trials.unwrap_or(8), p.depth.unwrap_or(16), p.seed, p.tol),
        Experiment::WienerYoung => wiener_young::run(p.depth.unwrap_or(16), p.trials.unwrap_or(20), p.seed, p.tol),
        Experiment::BvDiscontinuity => bv_discontinuity::run(p.depth.unwrap_or(12), &both(p.manifold), p.seed, p.tol),
        Experiment::AcContinuity => {
            let orders = p.k.map_or_else(|| vec![1, 2], |k| vec![k]);
            ac_continuity::run(&orders, p.manifold.unwrap_or(Manifold::Interval), p.seed, p.tol)
        }
        Experiment::ChangeOfVariables => {
            change_of_variables::run(p.trials.unwrap_or(100), &both(p.manifold), p.seed, p.tol)
        }
        Experiment::VariationInvariance => variation_invariance::run(p.trials.unwrap_or(200), p.seed, p.tol),
    }
}
