//! Acceptance criteria A1–A10. Each test prints one `PASS`/`FAIL` line with
//! the measured quantities, then asserts. Run with `--nocapture` to see the
//! lines:
//!
//! ```text
//! cargo test --test acceptance -- --nocapture --test-threads 1
//! ```

mod common;

use std::time::{Duration, Instant};

use rand::Rng;

use qtomo::estimators::{bayes_posterior_mean, bayes_posterior_variance, ls_relative_frequencies};
use qtomo::experiment::run;
use qtomo::measurement::{simulate_dataset, SimSeed};
use qtomo::qubit::{bloch_to_density, fidelity, fidelity_bloch, hs_distance_bloch};
use qtomo::report::write_aggregate;
use qtomo::{
    bayes_conditioned, ls_estimate, AggregateRow, BlochVector, ExperimentConfig, ExperimentKind,
    IntegratorConfig, MeasurementDataSet, Method, PriorParams, TrueState,
};

fn verdict(id: &str, title: &str, ok: bool, detail: String) {
    println!(
        "{id} {} {title}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "{id} {title}: {detail}");
}

fn s_mixed() -> BlochVector {
    BlochVector::new(0.3, -0.4, 0.3)
}

fn diagonal() -> BlochVector {
    BlochVector::new(1.0, 1.0, 1.0)
}

fn sweep_n(truth: BlochVector, n_values: Vec<u64>, reps: u32) -> ExperimentConfig {
    let mut cfg =
        ExperimentConfig::new(ExperimentKind::SweepN, TrueState::Explicit(truth), n_values);
    cfg.reps = reps;
    cfg
}

fn row(rows: &[AggregateRow], n: u64, length: f64, method: Method) -> AggregateRow {
    *rows
        .iter()
        .find(|r| r.n == n && r.method == method && r.length == length)
        .expect("row present")
}

#[test]
fn a01_metric_oracles() {
    let start = Instant::now();
    let mut rng = common::rng(1001);
    let (mut worst_f, mut worst_hs) = (0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let s = common::random_physical(&mut rng);
        let r = common::random_physical(&mut rng);
        let matrix = fidelity(
            &bloch_to_density(&s).unwrap(),
            &bloch_to_density(&r).unwrap(),
        );
        worst_f = worst_f.max((fidelity_bloch(&s, &r) - matrix).abs());
        worst_hs = worst_hs.max((hs_distance_bloch(&s, &r) - (s - r).norm() / 2f64.sqrt()).abs());
    }
    let elapsed = start.elapsed();
    verdict(
        "A1",
        "metric oracles",
        worst_f < 1e-9 && worst_hs < 1e-12 && elapsed < Duration::from_secs(5),
        format!("max |ΔF| = {worst_f:.2e}, max |Δd| = {worst_hs:.2e}, {elapsed:.2?}"),
    );
}

#[test]
fn a02_closed_form_posterior_vs_quadrature() {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for prior in [PriorParams::FLAT, PriorParams::new(2.0, 1.0).unwrap()] {
        for n in [1u64, 5, 10, 50, 200] {
            let mut ls = vec![0, 1, n / 2, n - 1, n];
            ls.dedup();
            for l in ls {
                let a = l as f64 + prior.lambda();
                let b = n as f64 + prior.kappa() - l as f64 - prior.lambda();
                let (mean, var) = common::beta_form_moments(a, b);
                worst = worst
                    .max((bayes_posterior_mean(l, n, prior).unwrap() - mean).abs())
                    .max((bayes_posterior_variance(l, n, prior).unwrap() - var).abs());
                cases += 1;
            }
        }
    }
    verdict(
        "A2",
        "closed-form posterior vs quadrature",
        worst < 1e-9,
        format!("{cases} cases, max deviation {worst:.2e}"),
    );
}

#[test]
fn a03_conditioned_estimator_vs_rejection_oracle() {
    let start = Instant::now();
    let cfg = IntegratorConfig::default();
    let mut rng = common::rng(1003);
    let mut worst_z = 0.0f64;
    let mut min_acceptance = 1.0f64;
    for i in 0..20u64 {
        let n = [10u64, 50, 200][i as usize % 3];
        let truth = common::random_physical(&mut rng);
        let data = simulate_dataset(&truth, n, SimSeed::new(1003, i)).unwrap();
        let est = bayes_conditioned(&data, PriorParams::FLAT, &cfg).unwrap();
        let mc = common::rejection_mean(
            common::exponents(n, data.plus_counts(), 0.0, 0.0),
            0.0,
            1.0,
            1_000_000,
            5000 + i,
        );
        min_acceptance = min_acceptance.min(mc.acceptance);
        for k in 0..3 {
            worst_z = worst_z.max((est.vector.0[k] - mc.mean[k]).abs() / mc.std_err[k]);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        "A3",
        "conditioned estimator vs rejection oracle",
        worst_z <= 3.0 && elapsed < Duration::from_secs(60),
        format!(
            "20 data sets, max |Δ|/SE = {worst_z:.2}, min acceptance {min_acceptance:.3}, {elapsed:.2?}"
        ),
    );
}

#[test]
fn a04_ls_optimality_and_unbiasedness() {
    let mut rng = common::rng(1004);
    let mut worst_kkt = 0.0f64;
    let mut projected = 0;
    while projected < 1000 {
        let n = rng.random_range(1..=30u64);
        let data =
            MeasurementDataSet::from_counts(n, [0; 3].map(|_| rng.random_range(0..=n))).unwrap();
        let pi = ls_relative_frequencies(&data);
        if pi.norm() <= 1.0 {
            continue;
        }
        projected += 1;
        let s = ls_estimate(&data).vector;
        let mu = pi.norm() - 1.0;
        worst_kkt = worst_kkt.max((s.norm() - 1.0).abs());
        for i in 0..3 {
            worst_kkt = worst_kkt.max((pi.0[i] - s.0[i] - mu * s.0[i]).abs());
        }
    }

    let truth = s_mixed();
    let reps = 10_000u64;
    let mut sum = [0.0; 3];
    for rep in 0..reps {
        let data = simulate_dataset(&truth, 100, SimSeed::new(1004, rep)).unwrap();
        let pi = ls_relative_frequencies(&data);
        for (acc, c) in sum.iter_mut().zip(pi.0) {
            *acc += c;
        }
    }
    let bias = [0, 1, 2].map(|i| (sum[i] / reps as f64 - truth.0[i]).abs());
    let worst_bias = bias.iter().cloned().fold(0.0, f64::max);
    verdict(
        "A4",
        "LS optimality and unbiasedness",
        worst_kkt < 1e-12 && worst_bias < 0.005,
        format!("max KKT residual {worst_kkt:.2e} over {projected} projections, bias {bias:.4?}"),
    );
}

#[test]
fn a05_low_n_bayes_advantage() {
    let start = Instant::now();
    let ns = vec![5u64, 10, 15, 20, 25];
    let rows = run(&sweep_n(s_mixed(), ns.clone(), 200)).unwrap().rows;
    let length = s_mixed().norm();
    let mut ok = true;
    let mut detail = Vec::new();
    for &n in &ns {
        let bayes = row(&rows, n, length, Method::BayesConditioned).phi;
        let ls = row(&rows, n, length, Method::LeastSquares).phi;
        ok &= bayes >= ls - 0.005;
        if n <= 10 {
            ok &= bayes > ls;
        }
        detail.push(format!("n={n}: {bayes:.4} vs {ls:.4}"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(120);
    verdict(
        "A5",
        "low-n Bayes advantage (Φ conditioned vs LS)",
        ok,
        format!("{}; {elapsed:.2?}", detail.join(", ")),
    );
}

#[test]
fn a06_conditioning_negligible_for_mixed_state() {
    let out = run(&sweep_n(s_mixed(), vec![100], 200)).unwrap();
    let pick = |m: Method| -> Vec<BlochVector> {
        out.reps
            .iter()
            .filter(|r| r.result.method == m)
            .map(|r| r.result.estimate)
            .collect()
    };
    let (cond, unc) = (
        pick(Method::BayesConditioned),
        pick(Method::BayesUnconditioned),
    );
    let gap = [0, 1, 2].map(|i| {
        cond.iter()
            .zip(&unc)
            .map(|(c, u)| (c.0[i] - u.0[i]).abs())
            .sum::<f64>()
            / cond.len() as f64
    });
    verdict(
        "A6",
        "conditioning negligible for mixed state at n=100",
        gap.iter().all(|&g| g < 0.01),
        format!(
            "mean |conditioned − unconditioned| per axis {:.2e}, {:.2e}, {:.2e}",
            gap[0], gap[1], gap[2]
        ),
    );
}

#[test]
fn a07_near_pure_degradation() {
    let mut cfg = ExperimentConfig::new(
        ExperimentKind::SweepLength,
        TrueState::Along {
            direction: diagonal(),
            lengths: vec![0.9, 1.0],
        },
        vec![900],
    );
    cfg.reps = 50;
    let rows = run(&cfg).unwrap().rows;
    let drop = |m: Method| row(&rows, 900, 0.9, m).phi - row(&rows, 900, 1.0, m).phi;
    let (bayes, ls) = (drop(Method::BayesConditioned), drop(Method::LeastSquares));
    verdict(
        "A7",
        "near-pure degradation at n=900",
        bayes > 0.0 && ls <= bayes,
        format!(
            "Φ conditioned {:.5} → {:.5} (drop {bayes:.2e}); Φ LS {:.5} → {:.5} (drop {ls:.2e})",
            row(&rows, 900, 0.9, Method::BayesConditioned).phi,
            row(&rows, 900, 1.0, Method::BayesConditioned).phi,
            row(&rows, 900, 0.9, Method::LeastSquares).phi,
            row(&rows, 900, 1.0, Method::LeastSquares).phi,
        ),
    );
}

#[test]
fn a08_convergence() {
    let rows = run(&sweep_n(s_mixed(), vec![25, 900], 50)).unwrap().rows;
    let length = s_mixed().norm();
    let mut ok = true;
    let mut detail = Vec::new();
    for m in [Method::LeastSquares, Method::BayesConditioned] {
        let (low, high) = (row(&rows, 25, length, m), row(&rows, 900, length, m));
        ok &= high.phi > 0.99 && high.chi < 0.05 && high.phi > low.phi;
        detail.push(format!(
            "{m}: Φ(25)={:.4} Φ(900)={:.5} χ(900)={:.4}",
            low.phi, high.phi, high.chi
        ));
    }
    verdict("A8", "convergence at n=900", ok, detail.join("; "));
}

#[test]
fn a09_variance_scaling() {
    let analytic = bayes_posterior_variance(450, 900, PriorParams::FLAT).unwrap()
        / bayes_posterior_variance(50, 100, PriorParams::FLAT).unwrap();
    let rows = run(&sweep_n(BlochVector::ORIGIN, vec![100, 900], 400))
        .unwrap()
        .rows;
    let mut ok = (analytic * 9.0 - 1.0).abs() < 0.2;
    let mut detail = vec![format!(
        "analytic ratio {analytic:.4} (1/9 = {:.4})",
        1.0 / 9.0
    )];
    for m in Method::ALL {
        let (low, high) = (row(&rows, 100, 0.0, m), row(&rows, 900, 0.0, m));
        if let (Some(lo), Some(hi)) = (low.postvar, high.postvar) {
            for i in 0..3 {
                ok &= (hi[i] / lo[i] * 9.0 - 1.0).abs() < 0.2;
            }
        }
        let (lo, hi) = (low.empvar.unwrap(), high.empvar.unwrap());
        let ratios = [0, 1, 2].map(|i| hi[i] / lo[i]);
        ok &= ratios.iter().all(|r| (r * 9.0 - 1.0).abs() < 0.35);
        detail.push(format!("{m} empirical ratios {ratios:.4?}"));
    }
    verdict("A9", "variance scaling 1/n", ok, detail.join("; "));
}

#[test]
fn a10_determinism() {
    let cfg = sweep_n(s_mixed(), vec![10, 50, 200], 8);
    let bytes = |threads: Option<usize>, seed: u64| {
        let mut c = cfg.clone();
        c.threads = threads;
        c.seed = seed;
        let mut buf = Vec::new();
        write_aggregate(&run(&c).unwrap().rows, &mut buf).unwrap();
        buf
    };
    let one = bytes(Some(1), cfg.seed);
    let again = bytes(Some(1), cfg.seed);
    let max = bytes(None, cfg.seed);
    let four = bytes(Some(4), cfg.seed);
    let different = bytes(Some(1), cfg.seed + 1);
    verdict(
        "A10",
        "determinism across runs and thread counts",
        one == again && one == max && one == four && one != different,
        format!(
            "{} bytes; repeat {}, all cores ({}) {}, 4 threads {}",
            one.len(),
            if one == again { "identical" } else { "differs" },
            std::thread::available_parallelism().map_or(1, |n| n.get()),
            if one == max { "identical" } else { "differs" },
            if one == four { "identical" } else { "differs" },
        ),
    );
}
