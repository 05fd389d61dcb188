//! Performance indicators aggregated over repetitions: average fidelity Φ,
//! average Hilbert-Schmidt distance χ, mean posterior variance and the
//! empirical variance of the estimates.

use crate::error::{Error, Result};
use crate::estimators::Method;
use crate::experiment::ExperimentKind;
use crate::qubit::{BlochVector, MetricsPair};

/// One estimator applied to one simulated data set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepetitionResult {
    pub rep: u32,
    pub method: Method,
    pub estimate: BlochVector,
    pub fidelity: f64,
    pub hs_distance: f64,
    /// Beta posterior variance per axis (of `u = (1 + s)/2`); Bayesian
    /// methods only.
    pub posterior_variance: Option<[f64; 3]>,
    /// Fingerprint of the data set the estimate was computed from.
    pub data_fingerprint: u64,
}

impl RepetitionResult {
    pub fn evaluate(
        rep: u32,
        method: Method,
        truth: &BlochVector,
        estimate: BlochVector,
        posterior_variance: Option<[f64; 3]>,
        data_fingerprint: u64,
    ) -> Result<Self> {
        let m = MetricsPair::between_bloch(truth, &estimate)?;
        Ok(RepetitionResult {
            rep,
            method,
            estimate,
            fidelity: m.fidelity,
            hs_distance: m.hs_distance,
            posterior_variance,
            data_fingerprint,
        })
    }
}

/// `Φ(ρ, m) = (1/m) Σ F(ρ, ω_i)`.
pub fn average_fidelity(truth: &BlochVector, estimates: &[BlochVector]) -> Result<f64> {
    mean_metric(truth, estimates, |m| m.fidelity)
}

/// `χ(ρ, m) = (1/m) Σ d(ρ, ω_i)`.
pub fn average_hs(truth: &BlochVector, estimates: &[BlochVector]) -> Result<f64> {
    mean_metric(truth, estimates, |m| m.hs_distance)
}

fn mean_metric(
    truth: &BlochVector,
    estimates: &[BlochVector],
    pick: impl Fn(&MetricsPair) -> f64,
) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::Empty("averaging over estimates"));
    }
    let mut sum = 0.0;
    for est in estimates {
        sum += pick(&MetricsPair::between_bloch(truth, est)?);
    }
    Ok(sum / estimates.len() as f64)
}

/// Per-axis sample variance with divisor `m − 1`.
pub fn empirical_variance(estimates: &[BlochVector]) -> Result<[f64; 3]> {
    if estimates.len() < 2 {
        return Err(Error::TooFewSamples {
            what: "empirical variance",
            min: 2,
            got: estimates.len(),
        });
    }
    let m = estimates.len() as f64;
    let mut out = [0.0; 3];
    for (axis, slot) in out.iter_mut().enumerate() {
        let mean = estimates.iter().map(|e| e.0[axis]).sum::<f64>() / m;
        *slot = estimates
            .iter()
            .map(|e| (e.0[axis] - mean).powi(2))
            .sum::<f64>()
            / (m - 1.0);
    }
    Ok(out)
}

/// Aggregated record of one `(sweep point, method)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateRow {
    pub kind: ExperimentKind,
    pub method: Method,
    pub n: u64,
    pub truth: BlochVector,
    pub length: f64,
    pub reps: u32,
    pub phi: f64,
    pub chi: f64,
    pub postvar: Option<[f64; 3]>,
    pub empvar: Option<[f64; 3]>,
}

impl AggregateRow {
    /// Folds stored repetitions (in the given order) through an [`Aggregator`].
    pub fn from_repetitions(
        kind: ExperimentKind,
        n: u64,
        truth: BlochVector,
        length: f64,
        results: &[RepetitionResult],
    ) -> Result<Self> {
        let first = results.first().ok_or(Error::Empty("aggregation"))?;
        let mut agg = Aggregator::new(kind, first.method, n, truth, length);
        for r in results {
            agg.push(r)?;
        }
        agg.finish()
    }
}

/// Streaming fold over repetitions of one method. Welford updates keep the
/// empirical variance numerically stable.
#[derive(Debug, Clone)]
pub struct Aggregator {
    kind: ExperimentKind,
    method: Method,
    n: u64,
    truth: BlochVector,
    length: f64,
    count: u32,
    fidelity_sum: f64,
    hs_sum: f64,
    mean: [f64; 3],
    sq_dev: [f64; 3],
    postvar_sum: Option<[f64; 3]>,
}

impl Aggregator {
    pub fn new(
        kind: ExperimentKind,
        method: Method,
        n: u64,
        truth: BlochVector,
        length: f64,
    ) -> Self {
        Aggregator {
            kind,
            method,
            n,
            truth,
            length,
            count: 0,
            fidelity_sum: 0.0,
            hs_sum: 0.0,
            mean: [0.0; 3],
            sq_dev: [0.0; 3],
            postvar_sum: None,
        }
    }

    pub fn push(&mut self, r: &RepetitionResult) -> Result<()> {
        if r.method != self.method {
            return Err(Error::Config(format!(
                "cannot aggregate {} results into a {} row",
                r.method, self.method
            )));
        }
        self.count += 1;
        self.fidelity_sum += r.fidelity;
        self.hs_sum += r.hs_distance;
        let k = self.count as f64;
        for axis in 0..3 {
            let x = r.estimate.0[axis];
            let delta = x - self.mean[axis];
            self.mean[axis] += delta / k;
            self.sq_dev[axis] += delta * (x - self.mean[axis]);
        }
        if let Some(v) = r.posterior_variance {
            let sum = self.postvar_sum.get_or_insert([0.0; 3]);
            for axis in 0..3 {
                sum[axis] += v[axis];
            }
        }
        Ok(())
    }

    pub fn finish(&self) -> Result<AggregateRow> {
        if self.count == 0 {
            return Err(Error::Empty("aggregation"));
        }
        let m = self.count as f64;
        Ok(AggregateRow {
            kind: self.kind,
            method: self.method,
            n: self.n,
            truth: self.truth,
            length: self.length,
            reps: self.count,
            phi: self.fidelity_sum / m,
            chi: self.hs_sum / m,
            postvar: self.postvar_sum.map(|s| s.map(|v| v / m)),
            empvar: (self.count >= 2).then(|| self.sq_dev.map(|v| (v / (m - 1.0)).max(0.0))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn averages_on_simple_lists() {
        let up = BlochVector::new(0.0, 0.0, 1.0);
        let down = BlochVector::new(0.0, 0.0, -1.0);
        assert!((average_fidelity(&up, &[up, up, up]).unwrap() - 1.0).abs() < 1e-12);
        assert!((average_fidelity(&up, &[up, down]).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(average_hs(&up, &[up, up]).unwrap(), 0.0);
        assert!((average_hs(&up, &[down]).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(average_fidelity(&up, &[]), Err(Error::Empty(_))));
        assert!(average_hs(&up, &[]).is_err());
    }

    #[test]
    fn variance_cases() {
        let a = BlochVector::new(0.1, 0.2, 0.3);
        assert!(empirical_variance(&[a, a, a])
            .unwrap()
            .iter()
            .all(|v| v.abs() < 1e-30));
        let v = empirical_variance(&[
            BlochVector::new(0.0, 0.0, 0.0),
            BlochVector::new(1.0, 0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(v, [0.5, 0.0, 0.0]);
        assert!(matches!(
            empirical_variance(&[a]),
            Err(Error::TooFewSamples { min: 2, got: 1, .. })
        ));
    }

    #[test]
    fn aggregator_matches_direct_computation() {
        let truth = BlochVector::new(0.3, -0.4, 0.3);
        let ests = [
            BlochVector::new(0.25, -0.35, 0.4),
            BlochVector::new(0.4, -0.5, 0.2),
            BlochVector::new(0.1, -0.3, 0.35),
        ];
        let results: Vec<_> = ests
            .iter()
            .enumerate()
            .map(|(i, e)| {
                RepetitionResult::evaluate(i as u32, Method::LeastSquares, &truth, *e, None, 0)
                    .unwrap()
            })
            .collect();
        let row = AggregateRow::from_repetitions(
            ExperimentKind::Single,
            10,
            truth,
            truth.norm(),
            &results,
        )
        .unwrap();
        assert!((row.phi - average_fidelity(&truth, &ests).unwrap()).abs() < 1e-15);
        assert!((row.chi - average_hs(&truth, &ests).unwrap()).abs() < 1e-15);
        let ev = empirical_variance(&ests).unwrap();
        for (got, want) in row.empvar.unwrap().iter().zip(ev) {
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(row.postvar, None);
        assert_eq!(row.reps, 3);
    }

    #[test]
    fn aggregator_rejects_mixed_methods() {
        let t = BlochVector::ORIGIN;
        let a = RepetitionResult::evaluate(0, Method::LeastSquares, &t, t, None, 0).unwrap();
        let b = RepetitionResult::evaluate(1, Method::BayesConditioned, &t, t, Some([0.1; 3]), 0)
            .unwrap();
        assert!(
            AggregateRow::from_repetitions(ExperimentKind::Single, 1, t, 0.0, &[a, b]).is_err()
        );
        let single =
            AggregateRow::from_repetitions(ExperimentKind::Single, 1, t, 0.0, &[b]).unwrap();
        assert_eq!(single.empvar, None);
        assert_eq!(single.postvar, Some([0.1; 3]));
    }

    #[test]
    fn nonphysical_estimate_still_scored() {
        let truth = BlochVector::new(0.0, 0.0, 1.0);
        let long = BlochVector::new(0.0, 0.0, 1.2);
        let r = RepetitionResult::evaluate(0, Method::BayesUnconditioned, &truth, long, None, 0)
            .unwrap();
        assert!(r.fidelity <= 1.0 && r.fidelity >= 0.0);
        assert!((r.hs_distance - 0.2 / 2f64.sqrt()).abs() < 1e-15);
    }
}
