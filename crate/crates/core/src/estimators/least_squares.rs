use super::{Method, RawEstimate};
use crate::measurement::MeasurementDataSet;
use crate::qubit::BlochVector;

/// `π_i = π_i(+) − π_i(−) = (2ℓ(i) − n) / n`.
pub fn ls_relative_frequencies(data: &MeasurementDataSet) -> BlochVector {
    let n = data.n() as f64;
    BlochVector(data.plus_counts().map(|l| (2.0 * l as f64 - n) / n))
}

/// Minimizer of `‖s − π‖²` over the unit ball: `π` itself when inside,
/// otherwise the radial projection `π / ‖π‖`.
pub fn ls_estimate(data: &MeasurementDataSet) -> RawEstimate {
    let pi = ls_relative_frequencies(data);
    let norm = pi.norm();
    if norm <= 1.0 {
        RawEstimate::new(Method::LeastSquares, pi, false)
    } else {
        RawEstimate::new(
            Method::LeastSquares,
            BlochVector(pi.0.map(|c| c / norm)),
            true,
        )
    }
}
