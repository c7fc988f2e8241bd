//! Time evolution: adaptive numerical integration of the Schrödinger
//! equation, the evolution operator, and the closed-form solution of the
//! rotating-field model.
//!
//! The closed form goes to the frame co-rotating with the field, where the
//! Hamiltonian is static: `U(t) = exp(-i omega t sigma_z / 2) exp(+i t sigma . B / 2)`
//! with `B` the effective field of [`RotatingFieldParams::effective_field`].

mod dopri5;

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::models::{rotating_field_hamiltonian, Hamiltonian, RotatingFieldParams};
use crate::spectral::{instantaneous_eigensystem, validate_grid};
use crate::two_level::{
    exp_i_hamiltonian, sinc, HermitianOperator2, Ket, StateVector, Unitary2, C64,
};

use dopri5::{solve, StepControl};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_SAMPLES: usize = 1000;
const MIN_TOLERANCE: f64 = 1e-13;
const MAX_TOLERANCE: f64 = 1e-6;
const LOCAL_TOLERANCE_DIVISOR: f64 = 50.0;
const MIN_LOCAL_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorOptions {
    /// Accuracy target (relative and absolute), in `[1e-13, 1e-6]`.
    pub tol: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOLERANCE,
            max_steps: 2_000_000,
        }
    }
}

impl IntegratorOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    /// Per-step tolerance handed to the stepper. Global error on oscillatory
    /// problems grows to tens of local errors over a few tens of periods, so
    /// steps are controlled well below `tol`.
    pub fn local_tolerance(&self) -> f64 {
        (self.tol / LOCAL_TOLERANCE_DIVISOR).max(MIN_LOCAL_TOLERANCE)
    }

    /// Largest norm drift a run may accumulate before it is rejected.
    pub fn norm_bound(&self) -> f64 {
        100.0 * self.tol
    }

    fn validate(&self) -> Result<()> {
        if !(MIN_TOLERANCE..=MAX_TOLERANCE).contains(&self.tol) {
            return Err(Error::Domain {
                name: "tolerance",
                value: self.tol,
                reason: "must lie in [1e-13, 1e-6]",
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Clone, Debug)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    /// `max |1 - |psi||` over accepted steps and output samples.
    pub norm_drift: f64,
    pub step_stats: StepStats,
}

/// `n` uniform samples on `[0, t_final]`, endpoints included.
pub fn uniform_grid(t_final: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t_final],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    t_final
                } else {
                    t_final * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn split(ket: &Ket) -> [f64; 4] {
    [ket[0].re, ket[0].im, ket[1].re, ket[1].im]
}

fn join(y: &[f64; 4]) -> Ket {
    Ket::new(C64::new(y[0], y[1]), C64::new(y[2], y[3]))
}

fn norm4(y: &[f64; 4]) -> f64 {
    y.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `psi' = -i H(t) psi` on the real-imaginary split state.
fn schrodinger_rhs<H: Hamiltonian>(model: &H) -> impl FnMut(f64, &[f64; 4]) -> [f64; 4] + '_ {
    move |t, y| {
        let h_psi = model.at(t).apply(&join(y));
        // -i (x + i y) = y - i x
        [h_psi[0].im, -h_psi[0].re, h_psi[1].im, -h_psi[1].re]
    }
}

fn check_output_grid(grid: &[f64], t_final: f64) -> Result<()> {
    validate_grid(grid, 1)?;
    let (first, last) = (grid[0], grid[grid.len() - 1]);
    if first < 0.0 || last > t_final {
        return Err(Error::OutOfRange {
            t: if first < 0.0 { first } else { last },
            start: 0.0,
            end: t_final,
        });
    }
    Ok(())
}

/// Integrates `i d/dt psi = H(t) psi` from `t = 0` and samples the solution
/// on `output_grid` (strictly increasing, within `[0, t_final]`).
///
/// Norm is monitored, never restored: a run whose norm drifts by more than
/// `100 tol` fails with [`Error::NormDrift`].
pub fn integrate<H: Hamiltonian>(
    model: &H,
    psi0: &StateVector,
    t_final: f64,
    opts: &IntegratorOptions,
    output_grid: &[f64],
) -> Result<EvolutionResult> {
    opts.validate()?;
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::Domain {
            name: "final time",
            value: t_final,
            reason: "must be finite and non-negative",
        });
    }
    let norm0 = psi0.norm();
    if (norm0 - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm: norm0 });
    }
    check_output_grid(output_grid, t_final)?;

    let bound = opts.norm_bound();
    let ctrl = StepControl {
        rtol: opts.local_tolerance(),
        atol: opts.local_tolerance(),
        h_max: f64::INFINITY,
        max_steps: opts.max_steps,
    };
    let mut drift: f64 = 0.0;
    let mut rhs = schrodinger_rhs(model);
    let mut monitor = |_t: f64, y: &[f64; 4]| {
        drift = drift.max((1.0 - norm4(y)).abs());
        if drift > bound {
            Err(Error::NormDrift { drift, bound })
        } else {
            Ok(())
        }
    };
    let sol = solve(
        &mut rhs,
        0.0,
        split(psi0.ket()),
        t_final,
        output_grid,
        &ctrl,
        &mut monitor,
    )?;

    let mut states = Vec::with_capacity(sol.samples.len());
    for y in &sol.samples {
        drift = drift.max((1.0 - norm4(y)).abs());
        states.push(StateVector::from_ket(join(y))?);
    }
    if drift > bound {
        return Err(Error::NormDrift { drift, bound });
    }
    Ok(EvolutionResult {
        times: output_grid.to_vec(),
        states,
        norm_drift: drift,
        step_stats: StepStats {
            accepted: sol.accepted,
            rejected: sol.rejected,
        },
    })
}

/// Evolution operators `U(t_k)` for every `t_k` in `grid`; the columns are
/// the evolved computational basis states.
pub fn evolution_operator_series<H: Hamiltonian>(
    model: &H,
    grid: &[f64],
    opts: &IntegratorOptions,
) -> Result<Vec<Unitary2>> {
    validate_grid(grid, 1)?;
    let t_final = grid[grid.len() - 1];
    let col0 = integrate(model, &StateVector::basis(0), t_final, opts, grid)?;
    let col1 = integrate(model, &StateVector::basis(1), t_final, opts, grid)?;
    col0.states
        .iter()
        .zip(&col1.states)
        .map(|(a, b)| Unitary2::from_columns(a.ket(), b.ket(), opts.norm_bound()))
        .collect()
}

pub fn evolution_operator<H: Hamiltonian>(
    model: &H,
    t_final: f64,
    opts: &IntegratorOptions,
) -> Result<Unitary2> {
    if t_final == 0.0 {
        opts.validate()?;
        return Ok(Unitary2::identity());
    }
    let mut series = evolution_operator_series(model, &[t_final], opts)?;
    Ok(series.pop().expect("one sample per grid point"))
}

/// Exact propagator of the rotating-field model. Finite through the
/// degenerate point `omega_bar = 0`.
pub fn rabi_propagator(p: &RotatingFieldParams, t: f64) -> Unitary2 {
    let half = 0.5 * p.omega * t;
    let frame = Matrix2::new(
        C64::from_polar(1.0, -half),
        C64::from(0.0),
        C64::from(0.0),
        C64::from_polar(1.0, half),
    );
    let effective = HermitianOperator2::from_pauli(0.0, p.effective_field().map(|b| -0.5 * b));
    let rotating = exp_i_hamiltonian(&effective, t);
    Unitary2::new_unchecked(frame * rotating.matrix())
}

/// Instantaneous ground state of `H(0)`: the spin aligned with the field.
pub fn aligned_initial_state(p: &RotatingFieldParams) -> StateVector {
    let ground = instantaneous_eigensystem(&rotating_field_hamiltonian(p, 0.0)).states[0];
    StateVector::from_ket(ground).expect("eigenvectors are normalized")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiSolution {
    pub state: StateVector,
    /// `|<0(t)|psi(t)>|`.
    pub ground_fidelity: f64,
}

/// `sin(theta - beta) sin(omega_bar t / 2)` written without dividing by
/// `omega_bar`.
fn excitation_amplitude(p: &RotatingFieldParams, t: f64) -> f64 {
    let [bx, _, bz] = p.effective_field();
    let omega_bar = bx.hypot(bz);
    p.omega * p.theta.sin() * 0.5 * t * sinc(0.5 * omega_bar * t)
}

/// Exact state at `t` for a spin initially aligned with the field, and its
/// fidelity with the instantaneous ground state,
/// `sqrt(1 - sin^2(theta - beta) sin^2(omega_bar t / 2))`.
pub fn rabi_exact(p: &RotatingFieldParams, t: f64) -> RabiSolution {
    let psi0 = aligned_initial_state(p);
    let state = rabi_propagator(p, t).apply_state(&psi0);
    let a = excitation_amplitude(p, t);
    RabiSolution {
        state,
        ground_fidelity: (1.0 - a * a).max(0.0).sqrt(),
    }
}

/// Smallest ground-state fidelity of the exact solution over `[0, horizon]`.
pub fn rabi_min_fidelity(p: &RotatingFieldParams, horizon: f64) -> f64 {
    let [bx, _, bz] = p.effective_field();
    let omega_bar = bx.hypot(bz);
    // |sin(omega_bar t/2)| first reaches 1 at t = pi / omega_bar
    let t_worst = if omega_bar * horizon >= std::f64::consts::PI {
        std::f64::consts::PI / omega_bar
    } else {
        horizon
    };
    let a = excitation_amplitude(p, t_worst);
    (1.0 - a * a).max(0.0).sqrt()
}
