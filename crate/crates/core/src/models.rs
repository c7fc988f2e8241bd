//! Spin 1/2 in a uniformly rotating magnetic field.
//!
//! `H(t) = -(omega0 / 2) sigma . n(t)` with
//! `n(t) = (sin(theta) cos(omega t), sin(theta) sin(omega t), cos(theta))`.
//!
//! Going to the frame rotating with the field adds a component `omega`
//! along the rotation axis. The resulting static effective field is
//! `B = (omega0 sin(theta), 0, omega0 cos(theta) + omega)`, with magnitude
//! `omega_bar` and tilt `beta` from the z axis.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::two_level::{norm3, pauli_dot, HermitianOperator2, Unitary2};

/// Anything that can be sampled as a Hermitian operator in time.
pub trait Hamiltonian {
    fn at(&self, t: f64) -> HermitianOperator2;
}

impl<T: Hamiltonian + ?Sized> Hamiltonian for &T {
    fn at(&self, t: f64) -> HermitianOperator2 {
        (**self).at(t)
    }
}

/// Time-independent Hamiltonian.
#[derive(Clone, Copy, Debug)]
pub struct Static(pub HermitianOperator2);

impl Hamiltonian for Static {
    fn at(&self, _t: f64) -> HermitianOperator2 {
        self.0
    }
}

/// Wraps a closure as a model.
pub struct FnHamiltonian<F>(pub F);

impl<F: Fn(f64) -> HermitianOperator2> Hamiltonian for FnHamiltonian<F> {
    fn at(&self, t: f64) -> HermitianOperator2 {
        (self.0)(t)
    }
}

/// `-H(t_final - t)`: running this forward from `psi(t_final)` retraces the
/// original evolution back to `psi(0)`.
#[derive(Clone, Copy, Debug)]
pub struct TimeMirrored<H> {
    pub inner: H,
    pub t_final: f64,
}

impl<H: Hamiltonian> Hamiltonian for TimeMirrored<H> {
    fn at(&self, t: f64) -> HermitianOperator2 {
        -self.inner.at(self.t_final - t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RotatingFieldParams {
    pub omega0: f64,
    pub omega: f64,
    pub theta: f64,
}

impl RotatingFieldParams {
    /// `omega0 > 0`, `theta` in `[0, pi/2]`, any finite signed `omega`.
    pub fn new(omega0: f64, omega: f64, theta: f64) -> Result<Self> {
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(Error::Domain {
                name: "omega0",
                value: omega0,
                reason: "gap must be positive and finite",
            });
        }
        if !omega.is_finite() {
            return Err(Error::Domain {
                name: "omega",
                value: omega,
                reason: "must be finite",
            });
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::Domain {
                name: "theta",
                value: theta,
                reason: "cone angle must lie in [0, pi/2]",
            });
        }
        Ok(Self {
            omega0,
            omega,
            theta,
        })
    }

    /// Rotation period `2 pi / |omega|`, falling back to `2 pi / omega0`
    /// for a static field.
    pub fn rotation_period(&self) -> f64 {
        let rate = if self.omega != 0.0 {
            self.omega.abs()
        } else {
            self.omega0
        };
        std::f64::consts::TAU / rate
    }

    /// Effective static field in the rotating frame.
    pub fn effective_field(&self) -> [f64; 3] {
        let (s, c) = self.theta.sin_cos();
        [self.omega0 * s, 0.0, self.omega0 * c + self.omega]
    }

    /// `|<1_dot|0>|` for this model: `|omega| sin(theta) / 2`, independent of t.
    pub fn coupling_magnitude(&self) -> f64 {
        0.5 * self.omega.abs() * self.theta.sin()
    }
}

impl Hamiltonian for RotatingFieldParams {
    fn at(&self, t: f64) -> HermitianOperator2 {
        rotating_field_hamiltonian(self, t)
    }
}

pub fn field_direction(p: &RotatingFieldParams, t: f64) -> [f64; 3] {
    let (s, c) = p.theta.sin_cos();
    let (sw, cw) = (p.omega * t).sin_cos();
    [s * cw, s * sw, c]
}

pub fn rotating_field_hamiltonian(p: &RotatingFieldParams, t: f64) -> HermitianOperator2 {
    let n = field_direction(p, t);
    HermitianOperator2::from_pauli(0.0, n.map(|x| -0.5 * p.omega0 * x))
}

/// `dH/dt`, exact.
pub fn rotating_field_hamiltonian_rate(p: &RotatingFieldParams, t: f64) -> HermitianOperator2 {
    let (sw, cw) = (p.omega * t).sin_cos();
    let k = -0.5 * p.omega0 * p.omega * p.theta.sin();
    HermitianOperator2::from_pauli(0.0, [-k * sw, k * cw, 0.0])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RotatingFrameGeometry {
    pub omega_bar: f64,
    pub beta: f64,
}

impl RotatingFrameGeometry {
    /// Signed `sin(theta - beta)`; its magnitude is `|omega sin(theta)| / omega_bar`.
    pub fn tilt_mismatch(&self, p: &RotatingFieldParams) -> f64 {
        (p.theta - self.beta).sin()
    }
}

/// Magnitude and tilt of the effective field. `beta` comes from a
/// two-argument arctangent, so `omega < -omega0 cos(theta)` gives
/// `beta > pi/2`.
pub fn rotating_frame_geometry(p: &RotatingFieldParams) -> Result<RotatingFrameGeometry> {
    let [bx, _, bz] = p.effective_field();
    let omega_bar = bx.hypot(bz);
    if omega_bar <= 1e-14 * p.omega0 {
        return Err(Error::DegenerateGeometry);
    }
    Ok(RotatingFrameGeometry {
        omega_bar,
        beta: bx.atan2(bz),
    })
}

/// Rotating-field parameters of the primed system, brought back to the
/// canonical cell `theta' in [0, pi/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PrimedParams {
    pub params: RotatingFieldParams,
    /// `theta - beta` before folding.
    pub raw_theta: f64,
    /// `-omega_bar` before folding.
    pub raw_omega: f64,
    /// `theta - beta < 0` was replaced by its absolute value, i.e. a global
    /// rotation by pi about z; the rotation rate is unchanged.
    pub theta_sign_folded: bool,
    /// The cone opened beyond pi/2 and was re-expressed about the opposite
    /// axis: `theta' -> pi - theta'`, `omega' -> -omega'` (rotation by pi
    /// about x).
    pub axis_flipped: bool,
}

pub fn primed_params(p: &RotatingFieldParams) -> Result<PrimedParams> {
    let geometry = rotating_frame_geometry(p)?;
    let raw_theta = p.theta - geometry.beta;
    let raw_omega = -geometry.omega_bar;

    let theta_sign_folded = raw_theta < 0.0;
    let mut theta = raw_theta.abs();
    let mut omega = raw_omega;
    let axis_flipped = theta > std::f64::consts::FRAC_PI_2;
    if axis_flipped {
        theta = std::f64::consts::PI - theta;
        omega = -omega;
    }
    Ok(PrimedParams {
        params: RotatingFieldParams {
            omega0: p.omega0,
            omega,
            theta,
        },
        raw_theta,
        raw_omega,
        theta_sign_folded,
        axis_flipped,
    })
}

/// `H'(t) = -U^dagger(t) H(t) U(t)` with `U` the evolution operator of `H`.
pub fn primed_hamiltonian_numeric(
    p: &RotatingFieldParams,
    t: f64,
    u: &Unitary2,
) -> Result<HermitianOperator2> {
    let defect = u.defect();
    if defect > 1e-8 {
        return Err(Error::NotUnitary {
            defect,
            bound: 1e-8,
        });
    }
    Ok(-rotating_field_hamiltonian(p, t).conjugated_by(u))
}

/// Numeric primed Hamiltonian compared against the analytic rotating-field
/// form of [`primed_params`] under one fixed global rotation.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PrimedComparison {
    pub primed: PrimedParams,
    /// Rotation taking the analytic primed field direction onto the numeric one.
    pub rotation: [[f64; 3]; 3],
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// Field direction `m` such that `H = a0 - (|a|) sigma . m` i.e. the
/// direction the ground state points along.
fn ground_direction(h: &HermitianOperator2) -> Option<Vector3<f64>> {
    let (_, a) = h.pauli_components();
    let r = norm3(&a);
    (r > 0.0).then(|| Vector3::new(-a[0] / r, -a[1] / r, -a[2] / r))
}

/// Right-handed orthonormal frame built from a direction and a velocity.
/// A vanishing velocity gets an arbitrary perpendicular completion.
fn frame_from(direction: Vector3<f64>, velocity: Vector3<f64>) -> Matrix3<f64> {
    let e1 = direction.normalize();
    let mut e2 = velocity - e1 * e1.dot(&velocity);
    if e2.norm() <= 1e-12 * velocity.norm().max(1.0) {
        let probe = if e1.x.abs() < 0.9 {
            Vector3::x()
        } else {
            Vector3::y()
        };
        e2 = probe - e1 * e1.dot(&probe);
    }
    let e2 = e2.normalize();
    let e3 = e1.cross(&e2);
    Matrix3::from_columns(&[e1, e2, e3])
}

/// Compares `-U^dagger H U` on `times` with the analytic primed Hamiltonian.
///
/// The global rotation is fitted once, at the first sample, by aligning the
/// field direction and its velocity. The numeric velocity uses
/// `d/dt (U^dagger H U) = U^dagger (dH/dt) U`, exact at `t = 0` where `U = 1`.
/// `times[0]` must therefore be 0 and `unitaries[0]` the identity (within
/// the unitarity tolerance).
pub fn primed_comparison(
    p: &RotatingFieldParams,
    times: &[f64],
    unitaries: &[Unitary2],
) -> Result<PrimedComparison> {
    if times.len() != unitaries.len() || times.is_empty() {
        return Err(Error::GridTooShort {
            needed: 1,
            got: times.len().min(unitaries.len()),
        });
    }
    if times[0] != 0.0 {
        return Err(Error::Domain {
            name: "first comparison time",
            value: times[0],
            reason: "global rotation is fitted at t = 0",
        });
    }
    let primed = primed_params(p)?;
    let analytic = primed.params;

    let numeric0 = primed_hamiltonian_numeric(p, 0.0, &unitaries[0])?;
    let rate0 = -rotating_field_hamiltonian_rate(p, 0.0).conjugated_by(&unitaries[0]);
    let m0 = ground_direction(&numeric0).ok_or(Error::DegenerateGeometry)?;
    let (_, dm) = rate0.pauli_components();
    // H = -(omega0/2) sigma . m  =>  m_dot = -(2/omega0) a_dot
    let vm = Vector3::from(dm.map(|x| -2.0 * x / p.omega0));

    let n0 = Vector3::from(field_direction(&analytic, 0.0));
    let (_, dn) = rotating_field_hamiltonian_rate(&analytic, 0.0).pauli_components();
    let vn = Vector3::from(dn.map(|x| -2.0 * x / p.omega0));

    let rotation = frame_from(m0, vm) * frame_from(n0, vn).transpose();

    let mut residuals = Vec::with_capacity(times.len());
    for (&t, u) in times.iter().zip(unitaries) {
        let numeric = primed_hamiltonian_numeric(p, t, u)?;
        let n = rotation * Vector3::from(field_direction(&analytic, t));
        let predicted = pauli_dot([n.x, n.y, n.z])
            .map(|m| m.scaled(-0.5 * p.omega0))
            .unwrap_or_else(|_| unreachable!("rotated unit vector"));
        residuals.push(numeric.distance(&predicted));
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let r = rotation;
    Ok(PrimedComparison {
        primed,
        rotation: [
            [r[(0, 0)], r[(0, 1)], r[(0, 2)]],
            [r[(1, 0)], r[(1, 1)], r[(1, 2)]],
            [r[(2, 0)], r[(2, 1)], r[(2, 2)]],
        ],
        residuals,
        max_residual,
    })
}
