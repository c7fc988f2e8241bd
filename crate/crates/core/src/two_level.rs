//! Two-level states, Hermitian operators and the Pauli algebra.
//!
//! Units: hbar = 1, so every operator entry is an angular frequency.
//! A Hermitian 2x2 operator is stored as its matrix but can always be
//! written `a0 * 1 + a . sigma` with real coefficients; most of the
//! spectral code works with that decomposition.

use nalgebra::{Complex, Matrix2, Vector2};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type ComplexAmplitude = C64;
/// Unnormalized vector in the two-dimensional state space.
pub type Ket = Vector2<C64>;

/// Loosest norm defect a [`StateVector`] may carry. Matches the largest
/// norm drift the integrator accepts (100 x the loosest tolerance, 1e-6).
pub const STATE_NORM_TOLERANCE: f64 = 1e-4;
const HERMITIAN_TOLERANCE: f64 = 1e-12;
const UNIT_VECTOR_TOLERANCE: f64 = 1e-9;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

pub fn sigma_x() -> Matrix2<C64> {
    Matrix2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> Matrix2<C64> {
    Matrix2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> Matrix2<C64> {
    Matrix2::new(ONE, ZERO, ZERO, -ONE)
}

fn ket_is_finite(k: &Ket) -> bool {
    k.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `<a|b>`.
pub fn inner(a: &Ket, b: &Ket) -> C64 {
    a.dotc(b)
}

/// Distance between two vectors after removing their relative global
/// phase: `min_phi |a - e^{i phi} b|`.
pub fn phase_aligned_distance(a: &Ket, b: &Ket) -> f64 {
    let d2 = a.norm_squared() + b.norm_squared() - 2.0 * inner(a, b).norm();
    d2.max(0.0).sqrt()
}

/// Normalized two-level state. Construction rejects non-finite amplitudes
/// and norms further than [`STATE_NORM_TOLERANCE`] from one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector(Ket);

impl StateVector {
    pub fn new(up: C64, down: C64) -> Result<Self> {
        Self::from_ket(Ket::new(up, down))
    }

    pub fn from_ket(ket: Ket) -> Result<Self> {
        if !ket_is_finite(&ket) {
            return Err(Error::NonFinite);
        }
        let norm = ket.norm();
        if (norm - 1.0).abs() > STATE_NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(ket))
    }

    /// Rescales an arbitrary nonzero finite vector to unit norm.
    pub fn normalized(ket: Ket) -> Result<Self> {
        if !ket_is_finite(&ket) {
            return Err(Error::NonFinite);
        }
        let norm = ket.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(ket / C64::from(norm)))
    }

    /// Computational basis state `|0>` (index 0, spin up along z) or `|1>`.
    pub fn basis(index: usize) -> Self {
        assert!(index < 2, "two-level basis index must be 0 or 1");
        let mut k = Ket::zeros();
        k[index] = ONE;
        Self(k)
    }

    pub fn ket(&self) -> &Ket {
        &self.0
    }

    pub fn into_ket(self) -> Ket {
        self.0
    }

    pub fn amplitudes(&self) -> [ComplexAmplitude; 2] {
        [self.0[0], self.0[1]]
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &StateVector) -> C64 {
        inner(&self.0, &other.0)
    }

    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.overlap(other).norm()
    }

    pub fn with_phase(&self, phase: f64) -> Self {
        Self(self.0 * C64::from_polar(1.0, phase))
    }

    /// Largest componentwise modulus of the difference.
    pub fn max_amplitude_difference(&self, other: &StateVector) -> f64 {
        (self.0 - other.0)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Hermitian 2x2 operator, validated at construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermitianOperator2(Matrix2<C64>);

impl HermitianOperator2 {
    /// Accepts `m` if `|m - m^dagger| <= 1e-12 |m|` (Frobenius norms) and
    /// stores its exactly Hermitian part.
    pub fn new(m: Matrix2<C64>) -> Result<Self> {
        if !m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let adjoint = m.adjoint();
        let defect = (m - adjoint).norm();
        if defect > HERMITIAN_TOLERANCE * m.norm() {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self((m + adjoint) * C64::from(0.5)))
    }

    /// `a0 * 1 + a . sigma`; Hermitian for any real coefficients.
    pub fn from_pauli(a0: f64, a: [f64; 3]) -> Self {
        let [ax, ay, az] = a;
        Self(Matrix2::new(
            C64::from(a0 + az),
            C64::new(ax, -ay),
            C64::new(ax, ay),
            C64::from(a0 - az),
        ))
    }

    pub fn zero() -> Self {
        Self(Matrix2::zeros())
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    /// Returns `(a0, [ax, ay, az])` with `H = a0 + a . sigma`.
    pub fn pauli_components(&self) -> (f64, [f64; 3]) {
        let m = &self.0;
        let a0 = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
        let az = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
        let off = m[(1, 0)];
        (a0, [off.re, off.im, az])
    }

    pub fn trace(&self) -> f64 {
        self.0[(0, 0)].re + self.0[(1, 1)].re
    }

    pub fn apply(&self, ket: &Ket) -> Ket {
        self.0 * ket
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0 * C64::from(factor))
    }

    /// `U^dagger H U`.
    pub fn conjugated_by(&self, u: &Unitary2) -> Self {
        let m = u.matrix().adjoint() * self.0 * u.matrix();
        let adjoint = m.adjoint();
        Self((m + adjoint) * C64::from(0.5))
    }

    /// Spectral norm; for `a0 + a . sigma` this is `|a0| + |a|`.
    pub fn operator_norm(&self) -> f64 {
        let (a0, a) = self.pauli_components();
        a0.abs() + norm3(&a)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        Self(self.0 - other.0).operator_norm()
    }
}

impl std::ops::Neg for HermitianOperator2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// 2x2 unitary, validated against a caller-chosen defect bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2(Matrix2<C64>);

impl Unitary2 {
    /// Accepts `m` when `|m^dagger m - 1|` (Frobenius) is at most `bound`.
    pub fn new(m: Matrix2<C64>, bound: f64) -> Result<Self> {
        if !m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let defect = unitarity_defect(&m);
        if defect > bound {
            return Err(Error::NotUnitary { defect, bound });
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: Matrix2<C64>) -> Self {
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn from_columns(c0: &Ket, c1: &Ket, bound: f64) -> Result<Self> {
        Self::new(Matrix2::from_columns(&[*c0, *c1]), bound)
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn apply(&self, ket: &Ket) -> Ket {
        self.0 * ket
    }

    pub fn apply_state(&self, state: &StateVector) -> StateVector {
        StateVector(self.0 * state.ket())
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Self(self.0 * rhs.0)
    }

    pub fn defect(&self) -> f64 {
        unitarity_defect(&self.0)
    }
}

fn unitarity_defect(m: &Matrix2<C64>) -> f64 {
    (m.adjoint() * m - Matrix2::identity()).norm()
}

pub(crate) fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `n . sigma` for a unit vector `n`.
pub fn pauli_dot(n: [f64; 3]) -> Result<HermitianOperator2> {
    let norm = norm3(&n);
    if !norm.is_finite() || (norm - 1.0).abs() > UNIT_VECTOR_TOLERANCE {
        return Err(Error::NotUnitVector { norm });
    }
    Ok(HermitianOperator2::from_pauli(0.0, n))
}

/// `exp(-i H t)` in closed form. Writing `H = a0 + |a| (a_hat . sigma)`,
/// the result is `e^{-i a0 t} (cos(|a| t) - i t sinc(|a| t) (a . sigma))`,
/// which stays finite as `|a| -> 0`.
pub fn exp_i_hamiltonian(h: &HermitianOperator2, t: f64) -> Unitary2 {
    let (a0, a) = h.pauli_components();
    let r = norm3(&a);
    let c = C64::from((r * t).cos());
    let s = C64::new(0.0, -t * sinc(r * t));
    let generator = HermitianOperator2::from_pauli(0.0, a);
    let m = (Matrix2::identity() * c + generator.matrix() * s) * C64::from_polar(1.0, -a0 * t);
    Unitary2(m)
}

/// `sin(x)/x`, with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}
