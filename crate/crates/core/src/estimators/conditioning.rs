//! Posterior mean of the product of three axis posteriors restricted to a
//! ball.
//!
//! The triple integral is evaluated as an iterated integral over the ball
//! itself: Gauss–Legendre in `s₁` over the ball's extent, Gauss–Legendre in
//! `s₂` over the chord at that `s₁`, and an exact antiderivative (Chebyshev
//! series of the third-axis density) over the remaining segment in `s₃`.
//! When the joint peak sits far down the third axis' tail the series is not
//! accurate enough there and `s₃` is integrated by Gauss–Legendre as well.
//! Every integrand is therefore smooth on its interval and the ball boundary
//! never cuts through a quadrature cell.
//!
//! Densities are evaluated as `exp(Σ log_density_i − G*)` where `G*` is the
//! maximum of the joint log density over the ball, so values stay in
//! `(0, 1]`. Each axis is truncated to the interval where its own log
//! density is at least `G* − TAIL_LOG`; anything outside is below
//! `e^{-TAIL_LOG}` of the peak.

use super::bayes::AxisPosterior;
use super::quadrature::{ChebSeries, GaussLegendre};
use crate::error::{Error, Result};

const TAIL_LOG: f64 = 50.0;
/// Largest log-density drop from the third axis' maximum to its value at the
/// joint peak for which the antiderivative path is used.
const CHEB_RANGE: f64 = 12.0;
/// Beyond this the mass inside the ball is too small to represent.
const MAX_LOG_DEFICIT: f64 = 600.0;

/// Which region the componentwise posterior is conditioned on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DomainConvention {
    /// `‖s‖ ≤ 1` in Bloch coordinates.
    #[default]
    BlochBall,
    /// `‖u‖ ≤ 1` with `u = (1 + s)/2 ∈ [0, 1]³`, i.e. the ball of radius 2
    /// around `(−1, −1, −1)` in Bloch coordinates.
    PaperUBall,
}

impl DomainConvention {
    /// Center (equal in every coordinate) and radius in Bloch coordinates.
    pub fn ball(self) -> (f64, f64) {
        match self {
            DomainConvention::BlochBall => (0.0, 1.0),
            DomainConvention::PaperUBall => (-1.0, 2.0),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            DomainConvention::BlochBall => "bloch",
            DomainConvention::PaperUBall => "paper-u",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "bloch" | "bloch_ball" => Ok(DomainConvention::BlochBall),
            "paper-u" | "paper_u_ball" => Ok(DomainConvention::PaperUBall),
            other => Err(Error::Config(format!(
                "unknown conditioning domain {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegratorConfig {
    /// Nodes per axis of the iterated rule (also the Chebyshev degree).
    pub grid_points_per_axis: usize,
    pub domain: DomainConvention,
    /// Proposal count for the rejection-sampling cross-check.
    pub mc_oracle_samples: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            grid_points_per_axis: 128,
            domain: DomainConvention::BlochBall,
            mc_oracle_samples: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_grid(mut self, points: usize) -> Self {
        self.grid_points_per_axis = points;
        self
    }

    pub fn with_domain(mut self, domain: DomainConvention) -> Self {
        self.domain = domain;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.grid_points_per_axis;
        if k < 32 || !k.is_multiple_of(2) {
            return Err(Error::InvalidIntegrator(format!(
                "grid_points_per_axis must be even and at least 32, got {k}"
            )));
        }
        Ok(())
    }
}

/// Constrained maximum of the joint log density over the ball ∩ [-1, 1]³.
///
/// Stationarity gives `∇ log p = μ (s − c)`; each axis is solved for given
/// `μ` and `μ` is bisected until the point lands on the sphere.
fn constrained_peak(axes: &[AxisPosterior; 3], center: f64, radius: f64) -> ([f64; 3], f64) {
    let at = |mu: f64| axes.map(|a| a.penalized_argmax(mu, center));
    let dist = |s: &[f64; 3]| s.iter().map(|x| (x - center).powi(2)).sum::<f64>().sqrt();
    let joint = |s: &[f64; 3]| -> f64 { axes.iter().zip(s).map(|(a, &x)| a.log_density(x)).sum() };

    let free = at(0.0);
    if dist(&free) <= radius {
        return (free, joint(&free));
    }
    let mut hi = 1.0;
    while dist(&at(hi)) > radius && hi < 1e300 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if dist(&at(mid)) > radius {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let peak = at(hi);
    (peak, joint(&peak))
}

/// `E[s | s ∈ ball]` under the product density of `axes`.
pub(crate) fn conditioned_mean(
    axes: &[AxisPosterior; 3],
    center: f64,
    radius: f64,
    points: usize,
) -> Result<[f64; 3]> {
    let (peak, peak_log) = constrained_peak(axes, center, radius);
    if !peak_log.is_finite() || peak_log < -MAX_LOG_DEFICIT {
        return Err(Error::Integration(format!(
            "posterior mass inside the ball is negligible (log density deficit {peak_log:.1})"
        )));
    }
    let floor = peak_log - TAIL_LOG;
    let support = axes.map(|a| a.support(floor));

    let third = &axes[2];
    let (lo3, hi3) = support[2];
    // The antiderivative is accurate relative to the largest density on the
    // fitted interval; it is only used when the density near the peak is
    // not far below that.
    let top3 = match third.mode() {
        Some(m) => third.log_density(m.clamp(lo3, hi3)),
        None => 0.0,
    };
    let antiderivatives = (top3 - third.log_density(peak[2]) <= CHEB_RANGE).then(|| {
        let density3 = ChebSeries::fit(lo3, hi3, points, |s| third.log_density(s).exp());
        (
            density3.antiderivative(),
            density3.times_t().antiderivative(),
        )
    });

    let gl = GaussLegendre::new(points);
    let r_sq = radius * radius;
    let lo1 = support[0].0.max(center - radius);
    let hi1 = support[0].1.min(center + radius);
    if lo1 >= hi1 {
        return Err(Error::Integration(
            "ball misses the posterior support".into(),
        ));
    }

    let (mut z, mut m1, mut m2, mut m3) = (0.0, 0.0, 0.0, 0.0);
    for (s1, w1) in gl.mapped(lo1, hi1) {
        let rho1_sq = (r_sq - (s1 - center).powi(2)).max(0.0);
        let rho1 = rho1_sq.sqrt();
        let lo2 = support[1].0.max(center - rho1);
        let hi2 = support[1].1.min(center + rho1);
        if lo2 >= hi2 {
            continue;
        }
        let log1 = axes[0].log_density(s1) - peak_log;
        let (mut z_row, mut m2_row, mut m3_row) = (0.0, 0.0, 0.0);
        for (s2, w2) in gl.mapped(lo2, hi2) {
            let rho2 = (rho1_sq - (s2 - center).powi(2)).max(0.0).sqrt();
            let a = lo3.max(center - rho2);
            let b = hi3.min(center + rho2);
            if a >= b {
                continue;
            }
            let log12 = log1 + axes[1].log_density(s2);
            let (seg_mass, seg_moment) = match &antiderivatives {
                Some((mass3, moment3)) => {
                    let scale = log12.exp();
                    (
                        scale * (mass3.eval(b) - mass3.eval(a)),
                        scale * (moment3.eval(b) - moment3.eval(a)),
                    )
                }
                None => gl.mapped(a, b).fold((0.0, 0.0), |(zm, mm), (s3, w3)| {
                    let w = w3 * (log12 + third.log_density(s3)).exp();
                    (zm + w, mm + w * s3)
                }),
            };
            z_row += w2 * seg_mass;
            m2_row += w2 * s2 * seg_mass;
            m3_row += w2 * seg_moment;
        }
        z += w1 * z_row;
        m1 += w1 * s1 * z_row;
        m2 += w1 * m2_row;
        m3 += w1 * m3_row;
    }

    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Integration(format!(
            "normalizer is {z} at {points} points per axis"
        )));
    }
    Ok([m1 / z, m2 / z, m3 / z])
}
