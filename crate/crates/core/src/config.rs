//! Flat `key = value` run configuration.
//!
//! Keys are the long command-line flag names without the leading dashes.
//! Blank lines and lines starting with `#` are ignored. Flags given on the
//! command line override values from a file.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::estimators::{DomainConvention, IntegratorConfig, PriorParams};
use crate::experiment::{ExperimentConfig, ExperimentKind, TrueState};
use crate::qubit::BlochVector;

pub const KEYS: [&str; 13] = [
    "true-state",
    "direction",
    "lengths",
    "n-values",
    "reps",
    "seed",
    "prior-kappa",
    "prior-lambda",
    "grid-points",
    "conditioning-domain",
    "out",
    "emit-reps",
    "threads",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPlan {
    pub states: Vec<BlochVector>,
    pub n_values: Vec<u64>,
    pub reps: u32,
    pub seed: u64,
}

/// Partially specified run settings. `None` means "use the default".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub true_state: Option<BlochVector>,
    pub direction: Option<BlochVector>,
    pub lengths: Option<Vec<f64>>,
    pub n_values: Option<Vec<u64>>,
    pub reps: Option<u32>,
    pub seed: Option<u64>,
    pub prior_kappa: Option<f64>,
    pub prior_lambda: Option<f64>,
    pub grid_points: Option<usize>,
    pub domain: Option<DomainConvention>,
    pub out: Option<PathBuf>,
    pub emit_reps: Option<bool>,
    pub threads: Option<usize>,
}

fn bad(key: &str, value: &str, why: &str) -> Error {
    Error::Config(format!("{key} = {value:?}: {why}"))
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| bad(key, value, "not a valid number"))
}

fn finite(key: &str, value: &str) -> Result<f64> {
    let x: f64 = number(key, value)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad(key, value, "must be finite"))
    }
}

/// Three comma-separated components, optionally in brackets.
pub fn parse_vector3(text: &str) -> Result<BlochVector> {
    let inner = text.trim();
    let inner = inner
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(inner);
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 3 {
        return Err(bad(
            "vector",
            text,
            "expected three comma-separated components",
        ));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = finite("vector", part)?;
    }
    Ok(BlochVector(v))
}

/// Comma-separated floats.
pub fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| finite("list", p))
        .collect::<Result<Vec<_>>>()
        .and_then(|v| {
            if v.is_empty() {
                Err(bad("list", text, "empty list"))
            } else {
                Ok(v)
            }
        })
}

/// Comma-separated integers or inclusive ranges `a:b` and `a:b:step`.
pub fn parse_u64_list(text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bounds: Vec<&str> = item.split(':').collect();
        match bounds.as_slice() {
            [single] => out.push(number("list", single)?),
            [a, b] | [a, b, _] => {
                let start: u64 = number("list", a)?;
                let end: u64 = number("list", b)?;
                let step: u64 = match bounds.get(2) {
                    Some(s) => number("list", s)?,
                    None => 1,
                };
                if step == 0 || end < start {
                    return Err(bad("list", item, "range needs start <= end and step >= 1"));
                }
                if (end - start) / step >= 1_000_000 {
                    return Err(bad("list", item, "range is too long"));
                }
                out.extend((start..=end).step_by(step as usize));
            }
            _ => return Err(bad("list", item, "too many ':' separators")),
        }
    }
    if out.is_empty() {
        return Err(bad("list", text, "empty list"));
    }
    Ok(out)
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(bad(key, value, "expected true or false")),
    }
}

impl Settings {
    /// Parses a configuration file body.
    pub fn parse(text: &str) -> Result<Settings> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: "expected key = value".into(),
            })?;
            s.set(key.trim(), value.trim()).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(s)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "true-state" => self.true_state = Some(parse_vector3(value)?),
            "direction" => self.direction = Some(parse_vector3(value)?),
            "lengths" => self.lengths = Some(parse_f64_list(value)?),
            "n-values" => self.n_values = Some(parse_u64_list(value)?),
            "reps" => self.reps = Some(number(key, value)?),
            "seed" => self.seed = Some(number(key, value)?),
            "prior-kappa" => self.prior_kappa = Some(finite(key, value)?),
            "prior-lambda" => self.prior_lambda = Some(finite(key, value)?),
            "grid-points" => self.grid_points = Some(number(key, value)?),
            "conditioning-domain" => self.domain = Some(DomainConvention::from_tag(value.trim())?),
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "emit-reps" => self.emit_reps = Some(parse_bool(key, value)?),
            "threads" => self.threads = Some(number(key, value)?),
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            true_state: over.true_state.or(self.true_state),
            direction: over.direction.or(self.direction),
            lengths: over.lengths.or(self.lengths),
            n_values: over.n_values.or(self.n_values),
            reps: over.reps.or(self.reps),
            seed: over.seed.or(self.seed),
            prior_kappa: over.prior_kappa.or(self.prior_kappa),
            prior_lambda: over.prior_lambda.or(self.prior_lambda),
            grid_points: over.grid_points.or(self.grid_points),
            domain: over.domain.or(self.domain),
            out: over.out.or(self.out),
            emit_reps: over.emit_reps.or(self.emit_reps),
            threads: over.threads.or(self.threads),
        }
    }

    pub fn prior(&self) -> Result<PriorParams> {
        PriorParams::new(
            self.prior_kappa.unwrap_or(0.0),
            self.prior_lambda.unwrap_or(0.0),
        )
    }

    pub fn integrator(&self) -> IntegratorConfig {
        let mut cfg = IntegratorConfig::default();
        if let Some(k) = self.grid_points {
            cfg.grid_points_per_axis = k;
        }
        if let Some(d) = self.domain {
            cfg.domain = d;
        }
        cfg
    }

    /// The true state(s): an explicit vector wins over direction and lengths.
    fn state(&self, kind: ExperimentKind) -> Result<TrueState> {
        if let Some(s) = self.true_state {
            return Ok(TrueState::Explicit(s));
        }
        match kind {
            ExperimentKind::SweepLength => Ok(TrueState::Along {
                direction: self.direction.unwrap_or(BlochVector::new(1.0, 1.0, 1.0)),
                lengths: self
                    .lengths
                    .clone()
                    .unwrap_or_else(|| (1..=10).map(|i| i as f64 / 10.0).collect()),
            }),
            _ => match (self.direction, &self.lengths) {
                (Some(direction), Some(lengths)) => Ok(TrueState::Along {
                    direction,
                    lengths: lengths.clone(),
                }),
                _ => Err(Error::Config(
                    "a true state is required (true-state, or direction with lengths)".into(),
                )),
            },
        }
    }

    /// States, n values and seeds for plain simulation, where any number of
    /// states and n values may be combined.
    pub fn simulation_plan(&self) -> Result<SimulationPlan> {
        let state = self.state(ExperimentKind::Single)?;
        let mut probe = ExperimentConfig::new(
            ExperimentKind::SweepLength,
            state,
            vec![self.n_values.as_ref().map_or(100, |v| v[0])],
        );
        probe.reps = self.reps.unwrap_or(probe.reps);
        probe.validate()?;
        let n_values = self.n_values.clone().unwrap_or(vec![100]);
        if let Some(n) = n_values.iter().find(|&&n| n == 0 || n >= 1 << 32) {
            return Err(Error::Config(format!("n value {n} is outside [1, 2^32)")));
        }
        Ok(SimulationPlan {
            states: probe.state.points().into_iter().map(|(_, s)| s).collect(),
            n_values,
            reps: probe.reps,
            seed: self.seed.unwrap_or(probe.seed),
        })
    }

    /// Builds and validates a full experiment configuration.
    pub fn experiment(&self, kind: ExperimentKind) -> Result<ExperimentConfig> {
        let default_n = match kind {
            ExperimentKind::SweepN => (100..=900).step_by(100).collect(),
            _ => vec![100],
        };
        let mut cfg = ExperimentConfig::new(
            kind,
            self.state(kind)?,
            self.n_values.clone().unwrap_or(default_n),
        );
        if let Some(r) = self.reps {
            cfg.reps = r;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg.prior = self.prior()?;
        cfg.integrator = self.integrator();
        cfg.out = self.out.clone();
        cfg.emit_reps = self.emit_reps.unwrap_or(false);
        cfg.threads = self.threads;
        cfg.validate()?;
        Ok(cfg)
    }
}
