//! Reference computations shared by the integration tests. Nothing here uses
//! the library's numerics.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};

use qtomo::BlochVector;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the closed unit ball.
pub fn random_physical(rng: &mut impl Rng) -> BlochVector {
    loop {
        let v = [0; 3].map(|_| rng.random_range(-1.0..=1.0));
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return BlochVector(v);
        }
    }
}

/// Uniform point on the unit sphere.
pub fn random_pure(rng: &mut impl Rng) -> BlochVector {
    loop {
        let v = random_physical(rng);
        let r = v.norm();
        if r > 0.1 {
            return BlochVector(v.0.map(|x| x / r));
        }
    }
}

// 5-point Gauss–Legendre on [-1, 1].
const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// `∫₀¹ f(u) du` by composite 5-point Gauss–Legendre on `panels` equal panels.
pub fn composite_gl5(panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = 1.0 / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        let mut part = 0.0;
        for (x, w) in GL5_NODES.iter().zip(GL5_WEIGHTS) {
            part += w * f(mid + 0.5 * h * x);
        }
        total += 0.5 * h * part;
    }
    total
}

/// `∫₀¹ f(u, 1 − u) du` on panels graded geometrically toward both ends,
/// which keeps the rule accurate for `u^a (1 − u)^b` with fractional
/// exponents. `f` receives both `u` and `1 − u` so neither loses digits.
pub fn graded_gl5(f: impl Fn(f64, f64) -> f64) -> f64 {
    const LEVELS: i32 = 60;
    const PER_LEVEL: usize = 40;
    let mut total = 0.0;
    // Left half: dyadic intervals [2^-(k+1), 2^-k] ∩ [0, ½], then the same
    // mirrored on the right half in terms of v = 1 − u.
    for side in 0..2 {
        for k in 1..=LEVELS {
            let hi = 0.5f64.powi(k);
            let lo = if k == LEVELS { 0.0 } else { 0.5 * hi };
            let h = (hi - lo) / PER_LEVEL as f64;
            for p in 0..PER_LEVEL {
                let mid = lo + (p as f64 + 0.5) * h;
                let mut part = 0.0;
                for (x, w) in GL5_NODES.iter().zip(GL5_WEIGHTS) {
                    let t = mid + 0.5 * h * x;
                    part += w * if side == 0 {
                        f(t, 1.0 - t)
                    } else {
                        f(1.0 - t, t)
                    };
                }
                total += 0.5 * h * part;
            }
        }
    }
    total
}

/// Mean and variance of `u` under the density proportional to
/// `u^a (1 − u)^b` on `[0, 1]`, by direct quadrature. The density is scaled by
/// its value at the mode to stay representable.
pub fn beta_form_moments(a: f64, b: f64) -> (f64, f64) {
    let log_at = |u: f64, v: f64| {
        let la = if a == 0.0 { 0.0 } else { a * u.ln() };
        let lb = if b == 0.0 { 0.0 } else { b * v.ln() };
        la + lb
    };
    let peak = if a + b > 0.0 {
        log_at(a / (a + b), b / (a + b))
    } else {
        0.0
    };
    let density = |u: f64, v: f64| (log_at(u, v) - peak).exp();
    let z = graded_gl5(density);
    let m1 = graded_gl5(|u, v| u * density(u, v)) / z;
    let m2 = graded_gl5(|u, v| (u - m1).powi(2) * density(u, v)) / z;
    (m1, m2)
}

#[derive(Debug, Clone, Copy)]
pub struct McMean {
    pub mean: [f64; 3],
    pub std_err: [f64; 3],
    pub accepted: usize,
    pub acceptance: f64,
}

/// Rejection sampler for the mean of the product of beta posteriors
/// restricted to a ball. Each axis draws `u ~ Beta(a + 1, b + 1)` and
/// `s = 2u − 1`; samples with `‖s − c‖ > r` are discarded.
///
/// Panics when fewer than one proposal in a thousand is accepted.
pub fn rejection_mean(
    exponents: [(f64, f64); 3],
    center: f64,
    radius: f64,
    proposals: usize,
    seed: u64,
) -> McMean {
    let mut rng = rng(seed);
    let betas = exponents.map(|(a, b)| Beta::new(a + 1.0, b + 1.0).unwrap());
    let mut sum = [0.0; 3];
    let mut sum_sq = [0.0; 3];
    let mut accepted = 0usize;
    for _ in 0..proposals {
        let s = [0, 1, 2].map(|i| 2.0 * betas[i].sample(&mut rng) - 1.0);
        let d2: f64 = s.iter().map(|x| (x - center).powi(2)).sum();
        if d2 <= radius * radius {
            accepted += 1;
            for i in 0..3 {
                sum[i] += s[i];
                sum_sq[i] += s[i] * s[i];
            }
        }
    }
    let acceptance = accepted as f64 / proposals as f64;
    assert!(
        acceptance >= 1e-3,
        "rejection oracle acceptance {acceptance:.2e} is below 1e-3; result would be unreliable"
    );
    let k = accepted as f64;
    let mean = sum.map(|v| v / k);
    let mut std_err = [0.0; 3];
    for i in 0..3 {
        let var = (sum_sq[i] / k - mean[i] * mean[i]).max(0.0) * k / (k - 1.0);
        std_err[i] = (var / k).sqrt();
    }
    McMean {
        mean,
        std_err,
        accepted,
        acceptance,
    }
}

/// Posterior exponents `(ℓ + λ, n + κ − ℓ − λ)` per axis.
pub fn exponents(n: u64, l: [u64; 3], kappa: f64, lambda: f64) -> [(f64, f64); 3] {
    l.map(|l| (l as f64 + lambda, n as f64 + kappa - l as f64 - lambda))
}
