use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {x} lies outside [{lo}, {hi}]")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("length mismatch: {left} coefficients vs {right} functions")]
    LengthMismatch { left: usize, right: usize },

    #[error("quadrature did not reach tolerance {tol:e} (error estimate {error:e} after {intervals} intervals)")]
    Quadrature { tol: f64, error: f64, intervals: usize },

    #[error("variation oracle did not converge: last increment {increment:e} ≥ {tol:e} at level {level} (estimate {estimate})")]
    OracleNonConvergence { estimate: f64, increment: f64, tol: f64, level: u32 },

    #[error("root finding did not converge for target {target}")]
    RootNonConvergence { target: f64 },

    #[error("manifold mismatch: {0}")]
    ManifoldMismatch(String),

    #[error("regularity order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("derivative order {order} out of range 1..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("circle compatibility violated: {0}")]
    CircleCompatibility(String),

    #[error("regularity: {0}")]
    Regularity(String),

    #[error("metric outside its domain: {0}")]
    MetricDomain(String),

    #[error("misalignment: {0}")]
    Misalignment(String),

    #[error("descriptor: {0}")]
    Descriptor(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
