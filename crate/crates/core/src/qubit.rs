//! Qubit state representations and distances between states.
//!
//! A qubit state is either a 2x2 density matrix or, equivalently, a point of
//! the unit ball (its Bloch vector). Both distance measures are available on
//! each representation: the matrix versions follow the defining formulas and
//! the Bloch versions are closed forms, so each pair cross-checks the other.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on the unit-ball constraint and on density-matrix invariants.
pub const EPS_BALL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// The 2x2 identity.
pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
/// Pauli X.
pub const SIGMA_1: Mat2 = Mat2([[ZERO, ONE], [ONE, ZERO]]);
/// Pauli Y.
pub const SIGMA_2: Mat2 = Mat2([[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]]);
/// Pauli Z.
pub const SIGMA_3: Mat2 = Mat2([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]);

/// One of the three Pauli measurement directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Axis from its 1-based label.
    pub fn from_label(label: usize) -> Result<Self> {
        match label {
            1 => Ok(Axis::X),
            2 => Ok(Axis::Y),
            3 => Ok(Axis::Z),
            other => Err(Error::InvalidAxis(other)),
        }
    }

    /// 1-based label (1, 2 or 3).
    pub fn label(self) -> usize {
        self.index() + 1
    }

    /// 0-based index into Bloch components.
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn pauli(self) -> Mat2 {
        match self {
            Axis::X => SIGMA_1,
            Axis::Y => SIGMA_2,
            Axis::Z => SIGMA_3,
        }
    }
}

/// Eigenvalue of a Pauli observable: the outcome of a single measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Real 3-vector parameterizing a qubit state.
///
/// Any vector can be stored (estimators may produce points outside the ball);
/// only vectors with `is_physical()` describe states.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector([0.0; 3]);

    pub fn new(s1: f64, s2: f64, s3: f64) -> Self {
        BlochVector([s1, s2, s3])
    }

    /// Checked constructor: rejects points outside the Bloch ball.
    pub fn physical(s1: f64, s2: f64, s3: f64) -> Result<Self> {
        let s = Self::new(s1, s2, s3);
        s.ensure_physical()?;
        Ok(s)
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn component(&self, axis: Axis) -> f64 {
        self.0[axis.index()]
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn scale(&self, factor: f64) -> BlochVector {
        BlochVector(self.0.map(|c| c * factor))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// `‖s‖² ≤ 1 + EPS_BALL`.
    pub fn is_physical(&self) -> bool {
        self.is_finite() && self.norm_squared() <= 1.0 + EPS_BALL
    }

    /// On the surface of the ball, within `EPS_BALL`.
    pub fn is_pure(&self) -> bool {
        (self.norm() - 1.0).abs() <= EPS_BALL
    }

    pub fn ensure_physical(&self) -> Result<()> {
        if self.is_physical() {
            Ok(())
        } else {
            Err(Error::InvalidState { norm: self.norm() })
        }
    }
}

impl Add for BlochVector {
    type Output = BlochVector;
    fn add(self, rhs: BlochVector) -> BlochVector {
        BlochVector([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl Sub for BlochVector {
    type Output = BlochVector;
    fn sub(self, rhs: BlochVector) -> BlochVector {
        BlochVector([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
        ])
    }
}

impl fmt::Display for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.0[0], self.0[1], self.0[2])
    }
}

/// Plain 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn scalar(c: f64) -> Mat2 {
        IDENTITY.scale(c)
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn scale(&self, c: f64) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0] * c, m[0][1] * c], [m[1][0] * c, m[1][1] * c]])
    }

    pub fn adjoint(&self) -> Mat2 {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    /// Frobenius norm squared, `Tr(M† M)`.
    pub fn frobenius_sq(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues of the Hermitian part, descending.
    ///
    /// Uses `mean ± sqrt(((a - d)/2)² + |b|²)` which avoids the cancellation
    /// in `tr²/4 - det`.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let (a, d, b) = self.hermitian_parts();
        let mean = 0.5 * (a + d);
        let half_gap = 0.5 * (a - d);
        let radius = half_gap.hypot(b.norm());
        (mean + radius, mean - radius)
    }

    /// Principal square root of a Hermitian PSD matrix via its
    /// eigendecomposition. Negative eigenvalues are clamped to zero.
    pub fn hermitian_sqrt(&self) -> Mat2 {
        let (a, d, b) = self.hermitian_parts();
        let (hi, lo) = self.hermitian_eigenvalues();
        let (sqrt_hi, sqrt_lo) = (hi.max(0.0).sqrt(), lo.max(0.0).sqrt());
        if hi - lo == 0.0 {
            return Mat2::scalar(sqrt_hi);
        }
        // Two candidate eigenvectors for `hi`; take the better-conditioned one.
        let v1 = [b, Complex64::new(hi - a, 0.0)];
        let v2 = [Complex64::new(hi - d, 0.0), b.conj()];
        let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
        let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
        let (v, norm_sq) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
        let p_hi = Mat2([
            [v[0] * v[0].conj(), v[0] * v[1].conj()],
            [v[1] * v[0].conj(), v[1] * v[1].conj()],
        ])
        .scale(1.0 / norm_sq);
        let p_lo = IDENTITY - p_hi;
        p_hi.scale(sqrt_hi) + p_lo.scale(sqrt_lo)
    }

    /// Real diagonal and symmetrized off-diagonal entry.
    fn hermitian_parts(&self) -> (f64, f64, Complex64) {
        let m = &self.0;
        (m[0][0].re, m[1][1].re, 0.5 * (m[0][1] + m[1][0].conj()))
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + rhs.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Mat2(out)
    }
}

/// A validated qubit density matrix: Hermitian, unit trace, PSD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Mat2);

impl DensityMatrix {
    /// Validates the density-matrix invariants within `EPS_BALL`.
    pub fn new(m: Mat2) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidDensityMatrix(msg));
        if m.0
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return bad("non-finite entry".into());
        }
        let skew = (m.0[1][0] - m.0[0][1].conj()).norm();
        if skew > EPS_BALL || m.0[0][0].im.abs() > EPS_BALL || m.0[1][1].im.abs() > EPS_BALL {
            return bad("not Hermitian".into());
        }
        let tr = m.trace().re;
        if (tr - 1.0).abs() > EPS_BALL {
            return bad(format!("trace {tr} != 1"));
        }
        let (_, lo) = m.hermitian_eigenvalues();
        if lo < -EPS_BALL {
            return bad(format!("negative eigenvalue {lo}"));
        }
        Ok(DensityMatrix(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0.entry(row, col)
    }

    /// `Tr(ρ A)`.
    pub fn expectation(&self, observable: &Mat2) -> Complex64 {
        (self.0 * *observable).trace()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }
}

/// `ρ = ½(I + s₁σ₁ + s₂σ₂ + s₃σ₃)`.
pub fn bloch_to_density(s: &BlochVector) -> Result<DensityMatrix> {
    s.ensure_physical()?;
    Ok(DensityMatrix(bloch_matrix(s)))
}

/// `½(I + s·σ)` for any vector. Outside the ball this is Hermitian with unit
/// trace but has a negative eigenvalue.
pub fn bloch_matrix(s: &BlochVector) -> Mat2 {
    let [s1, s2, s3] = s.0;
    Mat2([
        [
            Complex64::new(0.5 * (1.0 + s3), 0.0),
            Complex64::new(0.5 * s1, -0.5 * s2),
        ],
        [
            Complex64::new(0.5 * s1, 0.5 * s2),
            Complex64::new(0.5 * (1.0 - s3), 0.0),
        ],
    ])
}

/// Inverse of [`bloch_to_density`]: `s_i = Tr(ρ σ_i)`.
pub fn density_to_bloch(rho: &DensityMatrix) -> BlochVector {
    BlochVector(Axis::ALL.map(|axis| rho.expectation(&axis.pauli()).re))
}

/// Spectral projection `P = ½(I ± σ_axis)` onto the ±1 eigenspace.
pub fn spectral_projection(axis: Axis, sign: Sign) -> Mat2 {
    (IDENTITY + axis.pauli().scale(sign.value())).scale(0.5)
}

/// Same as [`spectral_projection`] with a 1-based axis label.
pub fn spectral_projection_labeled(axis: usize, sign: Sign) -> Result<Mat2> {
    Ok(spectral_projection(Axis::from_label(axis)?, sign))
}

/// Uhlmann fidelity `Tr √(ρ^½ ω ρ^½)`, computed as `√λ₁ + √λ₂` from the
/// eigenvalues of `A = ρ^½ ω ρ^½` (clamped at zero).
pub fn fidelity(rho: &DensityMatrix, omega: &DensityMatrix) -> f64 {
    matrix_fidelity(&rho.0, &omega.0)
}

/// The fidelity formula applied to arbitrary Hermitian matrices: negative
/// eigenvalues of `ρ` and of `ρ^½ ω ρ^½` are clamped to zero and the result
/// is capped at 1. Agrees with [`fidelity`] on valid states.
pub fn matrix_fidelity(rho: &Mat2, omega: &Mat2) -> f64 {
    let root = rho.hermitian_sqrt();
    let a = root * *omega * root;
    let (l1, l2) = a.hermitian_eigenvalues();
    (l1.max(0.0).sqrt() + l2.max(0.0).sqrt()).min(1.0)
}

/// Closed-form fidelity in terms of the two Bloch vectors:
///
/// `F = ½(√(1 + r·s + T) + √(1 + r·s − T))`,
/// `T = √(‖r + s‖² + (r·s)² − ‖r‖²‖s‖²)`.
///
/// Both roots enter with a plus sign; squaring gives `Tr A + 2√det A` as the
/// eigenvalue form requires. The second root is evaluated through
/// `(1 + r·s)² − T² = (1 − ‖r‖²)(1 − ‖s‖²)` to avoid cancellation.
pub fn fidelity_bloch(s: &BlochVector, r: &BlochVector) -> f64 {
    let dot = r.dot(s);
    let (ns, nr) = (s.norm_squared(), r.norm_squared());
    let t_sq = (*r + *s).norm_squared() + dot * dot - nr * ns;
    let t = t_sq.max(0.0).sqrt();
    let big = (1.0 + dot + t).max(0.0);
    let small = if big > 0.0 {
        ((1.0 - nr).max(0.0) * (1.0 - ns).max(0.0) / big).sqrt()
    } else {
        0.0
    };
    (0.5 * (big.sqrt() + small)).min(1.0)
}

/// Hilbert-Schmidt distance `√Tr(ρ − ω)²`.
///
/// In Bloch terms this is `‖s − r‖ / √2`.
pub fn hs_distance(rho: &DensityMatrix, omega: &DensityMatrix) -> f64 {
    (rho.0 - omega.0).frobenius_sq().sqrt()
}

/// Hilbert-Schmidt distance via Bloch vectors, `‖s − r‖ / √2`.
pub fn hs_distance_bloch(s: &BlochVector, r: &BlochVector) -> f64 {
    (*s - *r).norm() * std::f64::consts::FRAC_1_SQRT_2
}

/// Plain Euclidean distance `‖s − r‖` between Bloch vectors.
///
/// This is the scale used by some published plots of "Hilbert-Schmidt"
/// error; it is `√2` times [`hs_distance`]. Not used by the metric harness.
pub fn bloch_hs_paper_convention(s: &BlochVector, r: &BlochVector) -> f64 {
    (*s - *r).norm()
}

/// Fidelity and Hilbert-Schmidt distance between two states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsPair {
    pub fidelity: f64,
    pub hs_distance: f64,
}

impl MetricsPair {
    pub fn between(rho: &DensityMatrix, omega: &DensityMatrix) -> Self {
        MetricsPair {
            fidelity: fidelity(rho, omega),
            hs_distance: hs_distance(rho, omega),
        }
    }

    /// Metrics of an estimate against a physical true state. The estimate
    /// may lie outside the ball; it is then evaluated through
    /// [`bloch_matrix`] and [`matrix_fidelity`].
    pub fn between_bloch(truth: &BlochVector, estimate: &BlochVector) -> Result<Self> {
        let rho = bloch_to_density(truth)?;
        if !estimate.is_finite() {
            return Err(Error::InvalidState {
                norm: estimate.norm(),
            });
        }
        let omega = bloch_matrix(estimate);
        Ok(MetricsPair {
            fidelity: matrix_fidelity(rho.matrix(), &omega),
            hs_distance: (*rho.matrix() - omega).frobenius_sq().sqrt(),
        })
    }
}
