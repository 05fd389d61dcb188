use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qtomo::config::Settings;
use qtomo::experiment::{estimate_all, run, stream_id};
use qtomo::measurement::{parse_raw_datasets, simulate_dataset, MeasurementDataSet, SimSeed};
use qtomo::qubit::{BlochVector, MetricsPair};
use qtomo::report::{emit_csv, write_aggregate, write_repetitions, RepetitionRow};
use qtomo::{Error, ExperimentKind, Result};

#[derive(Parser)]
#[command(
    name = "qtomo",
    version,
    about = "Single-qubit state tomography experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate raw ±1 outcome strings for each (n, repetition).
    Simulate(RunArgs),
    /// Estimate the state with all three methods, from a raw dump or fresh simulation.
    Estimate {
        /// Raw dump written by `simulate`.
        #[arg(long)]
        data: Option<PathBuf>,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Sweep the number of measurements per axis for a fixed state.
    SweepN(RunArgs),
    /// Sweep the Bloch vector length along a direction at fixed n.
    SweepLength(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// True Bloch vector, e.g. `0.3,-0.4,0.3`.
    #[arg(long, allow_hyphen_values = true)]
    true_state: Option<String>,
    /// Direction for length sweeps; normalized before use.
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<String>,
    /// Comma-separated vector lengths in [0, 1].
    #[arg(long)]
    lengths: Option<String>,
    /// Comma-separated n values or ranges `a:b:step`.
    #[arg(long)]
    n_values: Option<String>,
    #[arg(long)]
    reps: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    prior_kappa: Option<String>,
    #[arg(long)]
    prior_lambda: Option<String>,
    /// Quadrature nodes per axis for the conditioned estimator.
    #[arg(long)]
    grid_points: Option<String>,
    /// `bloch` or `paper-u`.
    #[arg(long)]
    conditioning_domain: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-repetition rows to `<out stem>.reps.csv`.
    #[arg(long)]
    emit_reps: bool,
    #[arg(long)]
    threads: Option<String>,
}

impl RunArgs {
    fn settings(&self) -> Result<Settings> {
        let file = match &self.config {
            Some(path) => Settings::parse(&fs::read_to_string(path)?)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        let pairs = [
            ("true-state", &self.true_state),
            ("direction", &self.direction),
            ("lengths", &self.lengths),
            ("n-values", &self.n_values),
            ("reps", &self.reps),
            ("seed", &self.seed),
            ("prior-kappa", &self.prior_kappa),
            ("prior-lambda", &self.prior_lambda),
            ("grid-points", &self.grid_points),
            ("conditioning-domain", &self.conditioning_domain),
            ("threads", &self.threads),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v)?;
            }
        }
        flags.out = self.out.clone();
        if self.emit_reps {
            flags.emit_reps = Some(true);
        }
        Ok(file.overlay(flags))
    }
}

fn write_output(out: Option<&Path>, body: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, body)?,
        None => io::stdout().lock().write_all(body)?,
    }
    Ok(())
}

/// `results/run.csv` becomes `results/run.reps.csv`.
fn reps_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    out.with_file_name(format!("{stem}.reps.csv"))
}

fn simulate(args: &RunArgs) -> Result<()> {
    let settings = args.settings()?;
    let plan = settings.simulation_plan()?;
    let mut body = String::new();
    for truth in plan.states {
        for &n in &plan.n_values {
            for rep in 0..plan.reps {
                let seed = SimSeed::new(plan.seed, stream_id(n, rep));
                body.push_str(&format!("# n={n} rep={rep} state={truth}\n"));
                body.push_str(&simulate_dataset(&truth, n, seed)?.to_raw_dump());
            }
        }
    }
    write_output(settings.out.as_deref(), body.as_bytes())
}

fn estimate(data: Option<&Path>, args: &RunArgs) -> Result<()> {
    let settings = args.settings()?;
    let prior = settings.prior()?;
    let integrator = settings.integrator();
    integrator.validate()?;

    let (sets, truth): (Vec<(u32, MeasurementDataSet)>, Option<BlochVector>) = match data {
        Some(path) => {
            let sets = parse_raw_datasets(&fs::read_to_string(path)?)?;
            if sets.is_empty() {
                return Err(Error::Empty("raw data file"));
            }
            (
                sets.into_iter()
                    .enumerate()
                    .map(|(i, s)| (i as u32, s))
                    .collect(),
                settings.true_state,
            )
        }
        None => {
            let plan = settings.simulation_plan()?;
            let [truth] = plan.states[..] else {
                return Err(Error::Config(
                    "estimate simulates a single true state".into(),
                ));
            };
            let mut sets = Vec::new();
            for &n in &plan.n_values {
                for rep in 0..plan.reps {
                    let seed = SimSeed::new(plan.seed, stream_id(n, rep));
                    sets.push((rep, simulate_dataset(&truth, n, seed)?));
                }
            }
            (sets, Some(truth))
        }
    };
    if let Some(t) = &truth {
        t.ensure_physical()?;
    }

    let mut rows = Vec::new();
    for (rep, set) in &sets {
        for (method, estimate, _) in estimate_all(set, prior, &integrator)? {
            let metrics = truth
                .map(|t| MetricsPair::between_bloch(&t, &estimate))
                .transpose()?;
            rows.push(RepetitionRow {
                method,
                n: set.n(),
                rep: *rep,
                estimate,
                fidelity: metrics.map(|m| m.fidelity),
                hs: metrics.map(|m| m.hs_distance),
            });
        }
    }
    let mut body = Vec::new();
    write_repetitions(&rows, &mut body)?;
    write_output(settings.out.as_deref(), &body)
}

fn sweep(kind: ExperimentKind, args: &RunArgs) -> Result<()> {
    let cfg = args.settings()?.experiment(kind)?;
    if cfg.emit_reps && cfg.out.is_none() {
        return Err(Error::Config("emit-reps requires an output path".into()));
    }
    let output = run(&cfg)?;
    match &cfg.out {
        Some(path) => {
            emit_csv(&output.rows, path)?;
            if cfg.emit_reps {
                let rows: Vec<RepetitionRow> =
                    output.reps.iter().map(RepetitionRow::from).collect();
                let file = io::BufWriter::new(fs::File::create(reps_path(path))?);
                write_repetitions(&rows, file)?;
            }
        }
        None => write_aggregate(&output.rows, io::stdout().lock())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Estimate { data, args } => estimate(data.as_deref(), args),
        Command::SweepN(args) => sweep(ExperimentKind::SweepN, args),
        Command::SweepLength(args) => sweep(ExperimentKind::SweepLength, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
