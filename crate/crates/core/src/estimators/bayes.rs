//! Bayesian estimation with a beta-form prior.
//!
//! Each axis is estimated independently. With `ℓ` plus outcomes out of `n`
//! and prior parameters `(κ, λ)`, the posterior of `u = (1 + s)/2` is
//! `Beta(ℓ + λ + 1, n + κ − ℓ − λ + 1)`.

use super::conditioning::{self, IntegratorConfig};
use super::{Method, RawEstimate};
use crate::error::{Error, Result};
use crate::measurement::MeasurementDataSet;
use crate::qubit::{Axis, BlochVector};

/// Prior shape parameters, shared by all three axes.
///
/// The prior has the same form as a likelihood with `κ` pseudo-measurements
/// of which `λ` were `+1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorParams {
    kappa: f64,
    lambda: f64,
}

impl PriorParams {
    /// Flat prior, `κ = λ = 0`.
    pub const FLAT: PriorParams = PriorParams {
        kappa: 0.0,
        lambda: 0.0,
    };

    pub fn new(kappa: f64, lambda: f64) -> Result<Self> {
        if kappa.is_finite() && lambda.is_finite() && (0.0..=kappa).contains(&lambda) {
            Ok(PriorParams { kappa, lambda })
        } else {
            Err(Error::InvalidPrior { kappa, lambda })
        }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl Default for PriorParams {
    fn default() -> Self {
        Self::FLAT
    }
}

fn check_count(l: u64, n: u64) -> Result<()> {
    if l > n {
        Err(Error::CountOutOfRange { plus: l, n })
    } else {
        Ok(())
    }
}

/// Posterior mean of `u`: `(ℓ + 1 + λ) / (n + κ + 2)`.
pub fn bayes_posterior_mean(l: u64, n: u64, prior: PriorParams) -> Result<f64> {
    check_count(l, n)?;
    Ok((l as f64 + 1.0 + prior.lambda) / (n as f64 + prior.kappa + 2.0))
}

/// Posterior variance of `u`:
/// `(ℓ + 1 + λ)(n − ℓ + 1 + κ − λ) / ((n + κ + 2)² (n + κ + 3))`.
pub fn bayes_posterior_variance(l: u64, n: u64, prior: PriorParams) -> Result<f64> {
    check_count(l, n)?;
    let (l, n) = (l as f64, n as f64);
    let total = n + prior.kappa + 2.0;
    Ok(
        (l + 1.0 + prior.lambda) * (n - l + 1.0 + prior.kappa - prior.lambda)
            / (total * total * (total + 1.0)),
    )
}

/// Per-axis posterior means and variances (of `u`) with the Bloch estimate
/// `ŝ_i = 2 m_i − 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorSummary {
    pub mean: [f64; 3],
    pub variance: [f64; 3],
    pub estimate: BlochVector,
}

impl PosteriorSummary {
    pub fn from_data(data: &MeasurementDataSet, prior: PriorParams) -> Result<Self> {
        let n = data.n();
        let mut mean = [0.0; 3];
        let mut variance = [0.0; 3];
        for axis in Axis::ALL {
            let l = data.plus_count(axis);
            mean[axis.index()] = bayes_posterior_mean(l, n, prior)?;
            variance[axis.index()] = bayes_posterior_variance(l, n, prior)?;
        }
        Ok(PosteriorSummary {
            mean,
            variance,
            estimate: BlochVector(mean.map(|m| 2.0 * m - 1.0)),
        })
    }
}

/// Componentwise posterior-mean estimate. Its norm may exceed 1.
pub fn bayes_unconditioned(data: &MeasurementDataSet, prior: PriorParams) -> Result<RawEstimate> {
    if data.n() == 0 {
        return Err(Error::ZeroMeasurements);
    }
    let summary = PosteriorSummary::from_data(data, prior)?;
    Ok(RawEstimate::new(
        Method::BayesUnconditioned,
        summary.estimate,
        false,
    ))
}

/// Mean of the product posterior restricted to the ball selected by
/// `cfg.domain` (the Bloch ball by default).
pub fn bayes_conditioned(
    data: &MeasurementDataSet,
    prior: PriorParams,
    cfg: &IntegratorConfig,
) -> Result<RawEstimate> {
    cfg.validate()?;
    if data.n() == 0 {
        return Err(Error::ZeroMeasurements);
    }
    let [a1, a2, a3] =
        Axis::ALL.map(|axis| AxisPosterior::new(data.plus_count(axis), data.n(), prior));
    let axes = [a1?, a2?, a3?];
    let (center, radius) = cfg.domain.ball();
    let mean = conditioning::conditioned_mean(&axes, center, radius, cfg.grid_points_per_axis)?;
    Ok(RawEstimate::new(
        Method::BayesConditioned,
        BlochVector(mean),
        true,
    ))
}

/// Unnormalized posterior of one Bloch component on `[-1, 1]`:
/// `(1 + s)^a (1 − s)^b` with `a = ℓ + λ`, `b = n + κ − ℓ − λ`.
///
/// Densities are handled in log space relative to the peak value, so
/// `log_density` is `≤ 0` everywhere and `0` at the mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisPosterior {
    plus_exponent: f64,
    minus_exponent: f64,
    log_peak: f64,
}

impl AxisPosterior {
    pub fn new(l: u64, n: u64, prior: PriorParams) -> Result<Self> {
        check_count(l, n)?;
        Ok(Self::from_exponents(
            l as f64 + prior.lambda,
            n as f64 + prior.kappa - l as f64 - prior.lambda,
        ))
    }

    pub(crate) fn from_exponents(plus_exponent: f64, minus_exponent: f64) -> Self {
        let mut post = AxisPosterior {
            plus_exponent,
            minus_exponent,
            log_peak: 0.0,
        };
        if let Some(mode) = post.mode() {
            post.log_peak = post.raw_log(mode);
        }
        post
    }

    pub fn exponents(&self) -> (f64, f64) {
        (self.plus_exponent, self.minus_exponent)
    }

    /// `None` for the flat posterior (`a = b = 0`).
    pub fn mode(&self) -> Option<f64> {
        let (a, b) = (self.plus_exponent, self.minus_exponent);
        (a + b > 0.0).then(|| (a - b) / (a + b))
    }

    fn raw_log(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        if self.plus_exponent != 0.0 {
            acc += self.plus_exponent * s.ln_1p();
        }
        if self.minus_exponent != 0.0 {
            acc += self.minus_exponent * (-s).ln_1p();
        }
        acc
    }

    /// Log density minus its maximum; `-inf` where the density vanishes.
    pub fn log_density(&self, s: f64) -> f64 {
        self.raw_log(s) - self.log_peak
    }

    /// Smallest interval containing every `s` with `log_density(s) >= floor`.
    pub fn support(&self, floor: f64) -> (f64, f64) {
        let Some(mode) = self.mode() else {
            return (-1.0, 1.0);
        };
        let keep = |s: f64| self.log_density(s) >= floor;
        let lo = if keep(-1.0) {
            -1.0
        } else {
            let (mut out, mut inside) = (-1.0, mode);
            for _ in 0..100 {
                let mid = 0.5 * (out + inside);
                if keep(mid) {
                    inside = mid;
                } else {
                    out = mid;
                }
            }
            out
        };
        let hi = if keep(1.0) {
            1.0
        } else {
            let (mut inside, mut out) = (mode, 1.0);
            for _ in 0..100 {
                let mid = 0.5 * (inside + out);
                if keep(mid) {
                    inside = mid;
                } else {
                    out = mid;
                }
            }
            out
        };
        (lo, hi)
    }

    /// Maximizer over `[-1, 1]` of `log_density(s) − ½ μ (s − center)²`.
    pub(crate) fn penalized_argmax(&self, mu: f64, center: f64) -> f64 {
        let (a, b) = (self.plus_exponent, self.minus_exponent);
        if a == 0.0 && b == 0.0 {
            return center.clamp(-1.0, 1.0);
        }
        let slope = |s: f64| -> f64 {
            let up = if a == 0.0 { 0.0 } else { a / (1.0 + s) };
            let down = if b == 0.0 { 0.0 } else { b / (1.0 - s) };
            up - down - mu * (s - center)
        };
        if a == 0.0 && slope(-1.0) <= 0.0 {
            return -1.0;
        }
        if b == 0.0 && slope(1.0) >= 0.0 {
            return 1.0;
        }
        let (mut lo, mut hi) = (-1.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if slope(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}
