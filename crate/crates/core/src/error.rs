use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a physical state: Bloch vector norm {norm} exceeds 1")]
    InvalidState { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid measurement axis {0} (expected 1, 2 or 3)")]
    InvalidAxis(usize),

    #[error("plus count {plus} exceeds number of measurements {n}")]
    CountOutOfRange { plus: u64, n: u64 },

    #[error("number of measurements per axis must be at least 1")]
    ZeroMeasurements,

    #[error("invalid prior: kappa = {kappa}, lambda = {lambda} (need 0 <= lambda <= kappa)")]
    InvalidPrior { kappa: f64, lambda: f64 },

    #[error("invalid integrator configuration: {0}")]
    InvalidIntegrator(String),

    #[error("conditioning integral failed: {0}")]
    Integration(String),

    #[error("{0} requires a non-empty input")]
    Empty(&'static str),

    #[error("{what} requires at least {min} samples, got {got}")]
    TooFewSamples {
        what: &'static str,
        min: usize,
        got: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("at n = {n}, repetition {rep}: {source}")]
    Experiment {
        n: u64,
        rep: u32,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
