//! Single-qubit state tomography: simulated Pauli measurements, least-squares
//! and Bayesian estimators, and fidelity / Hilbert-Schmidt performance sweeps.

pub mod config;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod measurement;
pub mod metrics;
pub mod qubit;
pub mod report;

pub use error::{Error, Result};
pub use estimators::{
    bayes_conditioned, bayes_unconditioned, ls_estimate, DomainConvention, IntegratorConfig,
    Method, PriorParams, RawEstimate,
};
pub use experiment::{ExperimentConfig, ExperimentKind, SweepOutput, TrueState};
pub use measurement::{parse_raw_datasets, simulate_dataset, MeasurementDataSet, SimSeed};
pub use metrics::{AggregateRow, RepetitionResult};
pub use qubit::{
    bloch_to_density, density_to_bloch, fidelity, fidelity_bloch, hs_distance, hs_distance_bloch,
    Axis, BlochVector, DensityMatrix, MetricsPair,
};
pub use report::{emit_csv, read_aggregate, read_repetitions, RepetitionRow};
