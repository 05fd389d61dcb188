//! Experiment sweeps over the number of measurements and over the Bloch
//! vector length.
//!
//! For every sweep point and repetition one data set is simulated and all
//! three estimators run on that same data set. The data set for `(n, rep)`
//! is drawn from stream `(n << 32) | rep` of the base seed, so a length sweep
//! reuses the same random stream at every length.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{
    bayes_conditioned, bayes_unconditioned, ls_estimate, IntegratorConfig, Method,
    PosteriorSummary, PriorParams,
};
use crate::measurement::{simulate_dataset, MeasurementDataSet, SimSeed};
use crate::metrics::{AggregateRow, Aggregator, RepetitionResult};
use crate::qubit::BlochVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    SweepN,
    SweepLength,
    Single,
}

impl ExperimentKind {
    pub fn tag(self) -> &'static str {
        match self {
            ExperimentKind::SweepN => "sweep_n",
            ExperimentKind::SweepLength => "sweep_length",
            ExperimentKind::Single => "single",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sweep_n" => Ok(ExperimentKind::SweepN),
            "sweep_length" => Ok(ExperimentKind::SweepLength),
            "single" => Ok(ExperimentKind::Single),
            other => Err(Error::Config(format!("unknown experiment kind {other:?}"))),
        }
    }
}

/// How the true state is given.
#[derive(Debug, Clone, PartialEq)]
pub enum TrueState {
    Explicit(BlochVector),
    /// `length × direction / ‖direction‖` for each length.
    Along {
        direction: BlochVector,
        lengths: Vec<f64>,
    },
}

impl TrueState {
    /// `(length, state)` for each sweep point.
    pub fn points(&self) -> Vec<(f64, BlochVector)> {
        match self {
            TrueState::Explicit(s) => vec![(s.norm(), *s)],
            TrueState::Along { direction, lengths } => {
                let unit = direction.scale(1.0 / direction.norm());
                lengths.iter().map(|&l| (l, unit.scale(l))).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub state: TrueState,
    pub n_values: Vec<u64>,
    pub reps: u32,
    pub seed: u64,
    pub prior: PriorParams,
    pub integrator: IntegratorConfig,
    pub out: Option<PathBuf>,
    pub emit_reps: bool,
    /// Worker threads; `None` uses every available core.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, state: TrueState, n_values: Vec<u64>) -> Self {
        ExperimentConfig {
            kind,
            state,
            n_values,
            reps: 5,
            seed: 1,
            prior: PriorParams::FLAT,
            integrator: IntegratorConfig::default(),
            out: None,
            emit_reps: false,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n_values.is_empty() {
            return fail("at least one n value is required".into());
        }
        if self.n_values.contains(&0) {
            return fail("n values must be at least 1".into());
        }
        if self.n_values.iter().any(|&n| n >= 1 << 32) {
            return fail("n values must be below 2^32".into());
        }
        if self.reps == 0 {
            return fail("repetition count must be at least 1".into());
        }
        if self.threads == Some(0) {
            return fail("thread count must be at least 1".into());
        }
        self.integrator.validate()?;
        match &self.state {
            TrueState::Explicit(s) => s.ensure_physical()?,
            TrueState::Along { direction, lengths } => {
                if !direction.is_finite() || direction.norm() == 0.0 {
                    return fail("direction must be a nonzero finite vector".into());
                }
                if lengths.is_empty() {
                    return fail("at least one length is required".into());
                }
                if let Some(l) = lengths.iter().find(|l| !(0.0..=1.0).contains(*l)) {
                    return fail(format!("length {l} is outside [0, 1]"));
                }
            }
        }
        let points = self.state.points().len();
        match self.kind {
            ExperimentKind::SweepN if points != 1 => {
                fail("an n sweep needs a single true state".into())
            }
            ExperimentKind::SweepLength if self.n_values.len() != 1 => {
                fail("a length sweep needs exactly one n value".into())
            }
            ExperimentKind::Single if points != 1 || self.n_values.len() != 1 => {
                fail("a single experiment needs one true state and one n value".into())
            }
            _ => Ok(()),
        }
    }
}

/// Stream id of repetition `rep` at `n`.
pub fn stream_id(n: u64, rep: u32) -> u64 {
    (n << 32) | rep as u64
}

/// Per-repetition record with its sweep coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepRecord {
    pub n: u64,
    pub length: f64,
    pub result: RepetitionResult,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOutput {
    /// Ordered by sweep point, then method.
    pub rows: Vec<AggregateRow>,
    /// Ordered by sweep point, method, repetition.
    pub reps: Vec<RepRecord>,
}

pub type MethodEstimate = (Method, BlochVector, Option<[f64; 3]>);

/// The three estimates of one data set.
///
/// Each entry is `(method, estimate, posterior variance)`; the variance is the
/// per-axis beta posterior variance and is only reported for Bayesian methods.
pub fn estimate_all(
    data: &MeasurementDataSet,
    prior: PriorParams,
    integrator: &IntegratorConfig,
) -> Result<[MethodEstimate; 3]> {
    let post = PosteriorSummary::from_data(data, prior)?;
    Ok([
        (Method::LeastSquares, ls_estimate(data).vector, None),
        (
            Method::BayesUnconditioned,
            bayes_unconditioned(data, prior)?.vector,
            Some(post.variance),
        ),
        (
            Method::BayesConditioned,
            bayes_conditioned(data, prior, integrator)?.vector,
            Some(post.variance),
        ),
    ])
}

fn run_repetition(
    cfg: &ExperimentConfig,
    truth: &BlochVector,
    n: u64,
    rep: u32,
) -> Result<[RepetitionResult; 3]> {
    let wrap = |e: Error| Error::Experiment {
        n,
        rep,
        source: Box::new(e),
    };
    let data =
        simulate_dataset(truth, n, SimSeed::new(cfg.seed, stream_id(n, rep))).map_err(wrap)?;
    let fingerprint = data.fingerprint();
    let ests = estimate_all(&data, cfg.prior, &cfg.integrator).map_err(wrap)?;
    let mut out = Vec::with_capacity(3);
    for (method, est, postvar) in ests {
        out.push(
            RepetitionResult::evaluate(rep, method, truth, est, postvar, fingerprint)
                .map_err(wrap)?,
        );
    }
    Ok([out[0], out[1], out[2]])
}

fn run_points(cfg: &ExperimentConfig, points: &[(u64, f64, BlochVector)]) -> Result<SweepOutput> {
    let work: Vec<(usize, u32)> = (0..points.len())
        .flat_map(|p| (0..cfg.reps).map(move |rep| (p, rep)))
        .collect();
    let compute = || -> Result<Vec<[RepetitionResult; 3]>> {
        work.par_iter()
            .map(|&(p, rep)| {
                let (n, _, truth) = points[p];
                run_repetition(cfg, &truth, n, rep)
            })
            .collect()
    };
    let results = match cfg.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(compute)?,
        None => compute()?,
    };

    // `results` is in (point, rep) order regardless of scheduling.
    let mut out = SweepOutput::default();
    for (p, &(n, length, truth)) in points.iter().enumerate() {
        let chunk = &results[p * cfg.reps as usize..(p + 1) * cfg.reps as usize];
        for (m, method) in Method::ALL.into_iter().enumerate() {
            let mut agg = Aggregator::new(cfg.kind, method, n, truth, length);
            for triple in chunk {
                let r = &triple[m];
                agg.push(r)?;
                out.reps.push(RepRecord {
                    n,
                    length,
                    result: *r,
                });
            }
            out.rows.push(agg.finish()?);
        }
    }
    Ok(out)
}

/// One row per `(n, method)` for a fixed true state.
pub fn run_sweep_n(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    if cfg.kind != ExperimentKind::SweepN {
        return Err(Error::Config(format!(
            "expected a sweep_n config, got {}",
            cfg.kind
        )));
    }
    let (length, truth) = cfg.state.points()[0];
    let points: Vec<_> = cfg.n_values.iter().map(|&n| (n, length, truth)).collect();
    run_points(cfg, &points)
}

/// One row per `(length, method)` at a fixed `n`.
pub fn run_sweep_length(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    if cfg.kind != ExperimentKind::SweepLength {
        return Err(Error::Config(format!(
            "expected a sweep_length config, got {}",
            cfg.kind
        )));
    }
    let n = cfg.n_values[0];
    let points: Vec<_> = cfg
        .state
        .points()
        .into_iter()
        .map(|(length, truth)| (n, length, truth))
        .collect();
    run_points(cfg, &points)
}

/// Three rows for one true state and one `n`.
pub fn run_single(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let (length, truth) = cfg.state.points()[0];
    run_points(cfg, &[(cfg.n_values[0], length, truth)])
}

pub fn run(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    match cfg.kind {
        ExperimentKind::SweepN => run_sweep_n(cfg),
        ExperimentKind::SweepLength => run_sweep_length(cfg),
        ExperimentKind::Single => run_single(cfg),
    }
}
