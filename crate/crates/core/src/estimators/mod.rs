//! State estimators: constrained least squares and Bayesian estimation with
//! and without conditioning on the Bloch ball.

mod bayes;
mod conditioning;
mod least_squares;
pub mod quadrature;

use std::fmt;
use std::str::FromStr;

pub use bayes::{
    bayes_conditioned, bayes_posterior_mean, bayes_posterior_variance, bayes_unconditioned,
    AxisPosterior, PosteriorSummary, PriorParams,
};
pub use conditioning::{DomainConvention, IntegratorConfig};
pub use least_squares::{ls_estimate, ls_relative_frequencies};

use crate::error::Error;
use crate::qubit::BlochVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    LeastSquares,
    BayesUnconditioned,
    BayesConditioned,
}

impl Method {
    /// Output order used by the experiment tables.
    pub const ALL: [Method; 3] = [
        Method::LeastSquares,
        Method::BayesUnconditioned,
        Method::BayesConditioned,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::LeastSquares => "ls",
            Method::BayesUnconditioned => "bayes_unconditioned",
            Method::BayesConditioned => "bayes_conditioned",
        }
    }

    pub fn is_bayesian(self) -> bool {
        !matches!(self, Method::LeastSquares)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::Config(format!("unknown method {s:?}")))
    }
}

/// Output of one estimator on one data set.
///
/// `constrained` is set when a projection (least squares) or conditioning
/// step produced the vector; `physical` records whether it lies in the ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawEstimate {
    pub method: Method,
    pub vector: BlochVector,
    pub constrained: bool,
    pub physical: bool,
}

impl RawEstimate {
    fn new(method: Method, vector: BlochVector, constrained: bool) -> Self {
        RawEstimate {
            method,
            vector,
            constrained,
            physical: vector.is_physical(),
        }
    }
}
