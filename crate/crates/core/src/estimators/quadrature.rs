//! One-dimensional quadrature building blocks.

use std::f64::consts::PI;

/// Gauss–Legendre rule on `[-1, 1]`.
///
/// Nodes are found by Newton iteration on `P_n` and mirrored, so the rule is
/// exactly symmetric: `nodes[i] == -nodes[n - 1 - i]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(points: usize) -> Self {
        assert!(points >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; points];
        let mut weights = vec![0.0; points];
        let nf = points as f64;
        for i in 0..points.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(points, x);
                deriv = dp;
                let step = p / dp;
                x -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(points, x);
            if dp.is_finite() {
                deriv = dp;
            }
            let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            nodes[i] = -x;
            nodes[points - 1 - i] = x;
            weights[i] = w;
            weights[points - 1 - i] = w;
        }
        if points % 2 == 1 {
            nodes[points / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped affinely onto `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, lo: f64, hi: f64, mut f: F) -> f64 {
        self.mapped(lo, hi).map(|(t, w)| w * f(t)).sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let deriv = n as f64 * (x * cur - prev) / (x * x - 1.0);
    (cur, deriv)
}

/// Chebyshev expansion `Σ c_j T_j(x)` of a function on `[lo, hi]`, with
/// `x = (2t - lo - hi) / (hi - lo)`.
#[derive(Debug, Clone)]
pub(crate) struct ChebSeries {
    lo: f64,
    hi: f64,
    coeffs: Vec<f64>,
}

impl ChebSeries {
    /// Interpolates `f` at the `degree + 1` Chebyshev–Lobatto points.
    pub(crate) fn fit<F: FnMut(f64) -> f64>(lo: f64, hi: f64, degree: usize, mut f: F) -> Self {
        let d = degree.max(1);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let values: Vec<f64> = (0..=d)
            .map(|k| f(mid + half * (PI * k as f64 / d as f64).cos()))
            .collect();
        // cos(π j k / d) depends only on j k mod 2d.
        let table: Vec<f64> = (0..2 * d)
            .map(|m| (PI * m as f64 / d as f64).cos())
            .collect();
        let mut coeffs = vec![0.0; d + 1];
        for (j, c) in coeffs.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, &v) in values.iter().enumerate() {
                let term = v * table[(j * k) % (2 * d)];
                acc += if k == 0 || k == d { 0.5 * term } else { term };
            }
            *c = 2.0 * acc / d as f64;
        }
        coeffs[0] *= 0.5;
        coeffs[d] *= 0.5;
        ChebSeries { lo, hi, coeffs }
    }

    pub(crate) fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(self.lo, self.hi);
        let x = if self.hi > self.lo {
            (2.0 * t - self.lo - self.hi) / (self.hi - self.lo)
        } else {
            0.0
        };
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs[1..].iter().rev() {
            let b0 = c + 2.0 * x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + x * b1 - b2
    }

    /// Antiderivative in `t`, vanishing at `lo`.
    pub(crate) fn antiderivative(&self) -> Self {
        let c = &self.coeffs;
        let d = c.len() - 1;
        let half = 0.5 * (self.hi - self.lo);
        let at = |j: usize| c.get(j).copied().unwrap_or(0.0);
        let mut out = vec![0.0; d + 2];
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            let lower = if k == 1 { 2.0 * at(0) } else { at(k - 1) };
            *slot = half * (lower - at(k + 1)) / (2.0 * k as f64);
        }
        // F(lo) = Σ C_j (-1)^j = 0.
        let alternating: f64 = out
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &v)| if j % 2 == 0 { v } else { -v })
            .sum();
        out[0] = -alternating;
        ChebSeries {
            lo: self.lo,
            hi: self.hi,
            coeffs: out,
        }
    }

    /// Series of `t · f(t)`.
    pub(crate) fn times_t(&self) -> Self {
        let c = &self.coeffs;
        let mid = 0.5 * (self.lo + self.hi);
        let half = 0.5 * (self.hi - self.lo);
        let mut out = vec![0.0; c.len() + 1];
        for (j, &cj) in c.iter().enumerate() {
            out[j] += mid * cj;
            // x T_0 = T_1, x T_j = (T_{j+1} + T_{j-1}) / 2.
            if j == 0 {
                out[1] += half * cj;
            } else {
                out[j + 1] += 0.5 * half * cj;
                out[j - 1] += 0.5 * half * cj;
            }
        }
        ChebSeries {
            lo: self.lo,
            hi: self.hi,
            coeffs: out,
        }
    }
}
