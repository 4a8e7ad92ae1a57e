use thiserror::Error;

/// Errors raised by the numeric pipeline and the harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("field evaluated at conductor {index} (distance {distance:e} m)")]
    EvaluationAtConductor { index: usize, distance: f64 },

    #[error("degenerate contour segment between samples {0} and {1}")]
    DegenerateSegment(usize, usize),

    #[error("invalid measurement set: {0}")]
    InvalidMeasurementSet(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("moment vector too short: need index {needed}, have {available} values")]
    TooFewMoments { needed: usize, available: usize },

    #[error("singular system: pivot ratio {ratio:e} below threshold")]
    SingularSystem { ratio: f64 },

    #[error("clustered roots: min separation {separation:e}")]
    ClusteredRoots { separation: f64 },

    #[error("root finder did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("kernel inversion of zero value")]
    ZeroArgument,

    #[error("root {re}{im:+}j maps outside the kernel invertibility strip")]
    OutsideStrip { re: f64, im: f64 },

    #[error("conductor lies outside the circle")]
    ConductorOutsideCircle,

    #[error("measurement count {0} is not divisible by 2")]
    OddSampleCount(usize),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("io: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake_case identifier for machine-readable reporting.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFinite(_) => "non_finite",
            Error::EvaluationAtConductor { .. } => "evaluation_at_conductor",
            Error::DegenerateSegment(..) => "degenerate_segment",
            Error::InvalidMeasurementSet(_) => "invalid_measurement_set",
            Error::LengthMismatch(..) => "length_mismatch",
            Error::TooFewMoments { .. } => "too_few_moments",
            Error::SingularSystem { .. } => "singular_system",
            Error::ClusteredRoots { .. } => "clustered_roots",
            Error::NoConvergence(_) => "no_convergence",
            Error::ZeroArgument => "zero_argument",
            Error::OutsideStrip { .. } => "outside_strip",
            Error::ConductorOutsideCircle => "conductor_outside_circle",
            Error::OddSampleCount(_) => "odd_sample_count",
            Error::InvalidScenario(_) => "invalid_scenario",
            Error::Io(_) => "io",
            Error::Parse(_) => "parse",
        }
    }
}
