//! Adiabatic reference state, the jump expansion to first order, the a priori
//! and a posteriori criteria of the rotating-field model, and the epsilon
//! scaling of the adiabatic error.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{rotating_frame_geometry, RotatingFieldParams, RotatingFrameGeometry};
use crate::propagator::{rabi_exact, uniform_grid};
use crate::scaled::ScaledProblem;
use crate::spectral::{build_eigenframe, coupling, EigenFrame};
use crate::two_level::{inner, phase_aligned_distance, Ket, StateVector, C64};

pub const DEFAULT_THRESHOLD: f64 = 0.1;

/// Largest phase advance of the oscillatory integrand per grid cell.
pub const MAX_PHASE_ADVANCE: f64 = std::f64::consts::FRAC_PI_4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CriteriaReport {
    /// `|omega sin(theta) / omega0|`.
    pub a_priori_value: f64,
    /// `|<1_dot|0>| / (E_1 - E_0)`, half of `a_priori_value` for this model.
    pub a_priori_generic: f64,
    /// `|omega sin(theta) / omega_bar|`, the worst case over time of the
    /// excited amplitude.
    pub a_posteriori_amplitude: f64,
    pub geometry: RotatingFrameGeometry,
    pub verdict_a_priori: bool,
    pub verdict_a_posteriori: bool,
    pub threshold: f64,
}

pub fn a_priori_value(p: &RotatingFieldParams) -> f64 {
    (p.omega * p.theta.sin() / p.omega0).abs()
}

/// `1 - |<0(t)|psi(t)>|` for the spin initially aligned with the field.
pub fn a_posteriori_deviation(p: &RotatingFieldParams, t: f64) -> f64 {
    1.0 - rabi_exact(p, t).ground_fidelity
}

/// `|omega sin(theta)| / omega_bar = |sin(theta - beta)|`.
pub fn a_posteriori_envelope(p: &RotatingFieldParams) -> Result<f64> {
    let geometry = rotating_frame_geometry(p)?;
    Ok((p.omega * p.theta.sin()).abs() / geometry.omega_bar)
}

/// Both criteria at `threshold`; a criterion holds when its value is below
/// the threshold.
pub fn criteria_report(p: &RotatingFieldParams, threshold: f64) -> Result<CriteriaReport> {
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::Domain {
            name: "threshold",
            value: threshold,
            reason: "must be positive and finite",
        });
    }
    let geometry = rotating_frame_geometry(p)?;
    let a_priori = a_priori_value(p);
    let amplitude = (p.omega * p.theta.sin()).abs() / geometry.omega_bar;
    Ok(CriteriaReport {
        a_priori_value: a_priori,
        a_priori_generic: p.coupling_magnitude() / p.omega0,
        a_posteriori_amplitude: amplitude,
        geometry,
        verdict_a_priori: a_priori < threshold,
        verdict_a_posteriori: amplitude < threshold,
        threshold,
    })
}

/// Value at `x` of the quadratic through three points.
fn lagrange3(x: [f64; 3], y: [f64; 3], at: f64) -> f64 {
    let l0 = (at - x[1]) * (at - x[2]) / ((x[0] - x[1]) * (x[0] - x[2]));
    let l1 = (at - x[0]) * (at - x[2]) / ((x[1] - x[0]) * (x[1] - x[2]));
    let l2 = (at - x[0]) * (at - x[1]) / ((x[2] - x[0]) * (x[2] - x[1]));
    l0 * y[0] + l1 * y[1] + l2 * y[2]
}

/// `int_{t_k}^{b} E_band` for `b` inside cell `k`, exact for energies that are
/// quadratic in time. The interpolant runs through the cell's end points and
/// one neighbour.
fn cell_energy_integral(frame: &EigenFrame, band: usize, k: usize, b: f64) -> f64 {
    let t = frame.times();
    let e = frame.energies();
    let a = t[k];
    if t.len() == 2 {
        let eb = e[0][band] + (e[1][band] - e[0][band]) * (b - a) / (t[1] - t[0]);
        return 0.5 * (b - a) * (e[0][band] + eb);
    }
    let first = if k == 0 { 0 } else { (k - 1).min(t.len() - 3) };
    let x = [t[first], t[first + 1], t[first + 2]];
    let y = [e[first][band], e[first + 1][band], e[first + 2][band]];
    // two-point Gauss-Legendre
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let offset = half / 3f64.sqrt();
    half * (lagrange3(x, y, mid - offset) + lagrange3(x, y, mid + offset))
}

/// Cumulative dynamical phases `int_{t_0}^{t_k} E_band` at every node.
fn dynamical_phases(frame: &EigenFrame) -> Vec<[f64; 2]> {
    let t = frame.times();
    let mut acc = [0.0; 2];
    let mut out = Vec::with_capacity(t.len());
    out.push(acc);
    for k in 0..t.len() - 1 {
        for (band, value) in acc.iter_mut().enumerate() {
            *value += cell_energy_integral(frame, band, k, t[k + 1]);
        }
        out.push(acc);
    }
    out
}

/// Phase integral up to an arbitrary `t` in the frame.
fn dynamical_phase_at(frame: &EigenFrame, phases: &[[f64; 2]], band: usize, t: f64) -> Result<f64> {
    let (k, _) = frame.locate(t)?;
    Ok(phases[k][band] + cell_energy_integral(frame, band, k, t))
}

/// Transported eigenvector of `band` at `t`: the stored vector at a node,
/// otherwise the renormalized linear interpolant between nodes.
fn transported_state(frame: &EigenFrame, band: usize, t: f64) -> Result<Ket> {
    let (k, frac) = frame.locate(t)?;
    let s = frame.states();
    if frac == 0.0 {
        return Ok(s[k][band]);
    }
    if frac == 1.0 {
        return Ok(s[k + 1][band]);
    }
    let v = s[k][band] * C64::from(1.0 - frac) + s[k + 1][band] * C64::from(frac);
    Ok(v.unscale(v.norm()))
}

/// `exp(-i int_{t_0}^t E_0) |0(t)>` with `|0>` in the frame's
/// parallel-transport gauge; `t_0` is the start of the frame. The phase
/// integral uses composite quadratic interpolation of the stored energies.
pub fn adiabatic_state(frame: &EigenFrame, t: f64) -> Result<StateVector> {
    let phases = dynamical_phases(frame);
    let phi = dynamical_phase_at(frame, &phases, 0, t)?;
    let ground = transported_state(frame, 0, t)?;
    StateVector::normalized(ground * C64::from_polar(1.0, -phi))
}

/// Filon weights for `int_0^1 ((1-u) f_a + u f_b) e^{i delta u} du`.
fn filon_weights(delta: f64) -> (C64, C64) {
    let (i0, i1) = if delta.abs() < 1e-2 {
        // power series: int u^m e^{i d u} = sum (i d)^n / (n! (n + m + 1))
        let z = C64::new(0.0, delta);
        let mut term = C64::from(1.0);
        let (mut i0, mut i1) = (C64::from(0.0), C64::from(0.0));
        for n in 0..10 {
            i0 += term / (n as f64 + 1.0);
            i1 += term / (n as f64 + 2.0);
            term *= z / (n as f64 + 1.0);
        }
        (i0, i1)
    } else {
        let iz = C64::new(0.0, delta);
        let e = iz.exp();
        let i0 = (e - 1.0) / iz;
        (i0, (e - i0) / iz)
    };
    (i0 - i1, i1)
}

/// Amplitude integral `J(t_k) = int_{t_0}^{t_k} e^{i g(t1)} c(t1) dt1` at
/// every node, where `g = Phi_1 - Phi_0` and `c = <1_dot|0>`.
fn transition_integrals(frame: &EigenFrame, phases: &[[f64; 2]]) -> Result<Vec<C64>> {
    let t = frame.times();
    let relative: Vec<f64> = phases.iter().map(|p| p[1] - p[0]).collect();
    let c: Vec<C64> = (0..t.len()).map(|k| coupling(frame, k).value).collect();
    let mut acc = C64::from(0.0);
    let mut out = Vec::with_capacity(t.len());
    out.push(acc);
    for k in 0..t.len() - 1 {
        let delta = relative[k + 1] - relative[k];
        if delta.abs() >= MAX_PHASE_ADVANCE {
            return Err(Error::PhaseUnresolved {
                index: k,
                advance: delta.abs(),
            });
        }
        let (wa, wb) = filon_weights(delta);
        let h = t[k + 1] - t[k];
        acc += C64::from_polar(h, relative[k]) * (wa * c[k] + wb * c[k + 1]);
        out.push(acc);
    }
    Ok(out)
}

/// First jump term at every node of the frame: one transition `0 -> 1` at
/// some `t1`, adiabatic evolution on either side.
pub fn first_order_series(frame: &EigenFrame) -> Result<Vec<Ket>> {
    let phases = dynamical_phases(frame);
    let integrals = transition_integrals(frame, &phases)?;
    Ok(frame
        .states()
        .iter()
        .zip(&phases)
        .zip(&integrals)
        .map(|((s, p), j)| s[1] * (C64::from_polar(1.0, -p[1]) * j))
        .collect())
}

/// `psi^(1)(t) = |1(t)> int_{t_0}^t e^{-i int_{t1}^t E_1} <1_dot|0>(t1)
/// e^{-i int_{t_0}^{t1} E_0} dt1`.
///
/// Composite Filon quadrature: the coupling is linear and the relative phase
/// exact-linear within each grid cell. The relative phase may advance by at
/// most [`MAX_PHASE_ADVANCE`] per cell. Off-grid `t` closes with a partial
/// cell.
pub fn first_order_term(frame: &EigenFrame, t: f64) -> Result<Ket> {
    let (k, frac) = frame.locate(t)?;
    let phases = dynamical_phases(frame);
    let integrals = transition_integrals(frame, &phases)?;
    let times = frame.times();
    let relative = |p: &[f64; 2]| p[1] - p[0];

    let mut j = integrals[k];
    let mut phi1 = phases[k][1];
    if frac > 0.0 {
        let end = [
            dynamical_phase_at(frame, &phases, 0, t)?,
            dynamical_phase_at(frame, &phases, 1, t)?,
        ];
        let delta = relative(&end) - relative(&phases[k]);
        let (c0, c1) = (coupling(frame, k).value, coupling(frame, k + 1).value);
        let ct = c0 + (c1 - c0) * frac;
        let (wa, wb) = filon_weights(delta);
        j += C64::from_polar(t - times[k], relative(&phases[k])) * (wa * c0 + wb * ct);
        phi1 = end[1];
    }
    Ok(transported_state(frame, 1, t)? * (C64::from_polar(1.0, -phi1) * j))
}

/// Order-of-magnitude excited amplitude `|<1_dot|0>| / (E_1 - E_0)` at `t`,
/// linearly interpolated between nodes.
pub fn first_order_estimate(frame: &EigenFrame, t: f64) -> Result<f64> {
    let (k, frac) = frame.locate(t)?;
    let ratio = |i: usize| {
        let e = frame.energies()[i];
        coupling(frame, i).value.norm() / (e[1] - e[0])
    };
    if frac == 0.0 {
        return Ok(ratio(k));
    }
    Ok(ratio(k) * (1.0 - frac) + ratio(k + 1) * frac)
}

/// Exact state set against the first two terms of the jump expansion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpExpansionState {
    pub order0: StateVector,
    /// Not normalized; orthogonal to the instantaneous ground state.
    pub order1: Ket,
    /// `|psi - order0 - order1|`.
    pub residual_norm: f64,
    /// `min_phi |psi - e^{i phi} (order0 + order1)|`. Removes the secular
    /// second-order phase of the ground amplitude.
    pub phase_aligned_residual: f64,
    /// `|psi - order0|`.
    pub adiabatic_error: f64,
}

impl JumpExpansionState {
    /// How much of the adiabatic error the first jump term leaves over.
    pub fn completeness_ratio(&self) -> f64 {
        self.phase_aligned_residual / self.adiabatic_error
    }
}

pub fn jump_expansion(
    frame: &EigenFrame,
    t: f64,
    exact: &StateVector,
) -> Result<JumpExpansionState> {
    let order0 = adiabatic_state(frame, t)?;
    let order1 = first_order_term(frame, t)?;
    let psi = exact.ket();
    let sum = order0.ket() + order1;
    Ok(JumpExpansionState {
        order0,
        order1,
        residual_norm: (psi - sum).norm(),
        phase_aligned_residual: phase_aligned_distance(psi, &sum),
        adiabatic_error: (psi - order0.ket()).norm(),
    })
}

/// Half a turn of the rotating field in scaled time: `H_hat(s)` has gap 1
/// and the field direction sweeps `phi = pi s` for `s` in `[0, 1]`.
/// At adiabaticity `epsilon` this is the rotating-field model with
/// `omega0 = 1`, `omega = pi epsilon` on `t` in `[0, 1 / epsilon]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HalfTurnPath {
    pub theta: f64,
}

impl HalfTurnPath {
    pub fn problem(&self, epsilon: f64) -> Result<ScaledProblem> {
        ScaledProblem::from_epsilon(1.0, epsilon)
    }

    pub fn params(&self, epsilon: f64) -> Result<RotatingFieldParams> {
        let problem = self.problem(epsilon)?;
        RotatingFieldParams::new(
            problem.energy_scale,
            std::f64::consts::PI / problem.time_scale,
            self.theta,
        )
    }

    /// Grid on `[0, tau]` with spacing at most `1/20` of the inverse gap.
    pub fn grid(&self, epsilon: f64) -> Result<Vec<f64>> {
        let tau = self.problem(epsilon)?.time_scale;
        let cells = ((20.0 * tau).ceil() as usize).max(2000);
        Ok(uniform_grid(tau, cells + 1))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScalingStudy {
    pub epsilons: Vec<f64>,
    /// Adiabatic error envelope at `s = 1` for each epsilon.
    pub errors: Vec<f64>,
    /// Least-squares slope of `log error` against `log epsilon`; `None`
    /// when the errors are at round-off level (exactly adiabatic path).
    pub slope: Option<f64>,
}

/// Smallest ratio between the largest and smallest epsilon of a study.
pub const MIN_EPSILON_SPAN: f64 = 20.0;

/// Errors below this are treated as exact adiabatic following.
const ROUND_OFF_ERROR: f64 = 1e-10;

fn validate_epsilons(epsilons: &[f64]) -> Result<()> {
    if epsilons.len() < 2 {
        return Err(Error::GridTooShort {
            needed: 2,
            got: epsilons.len(),
        });
    }
    if let Some(&bad) = epsilons.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::Domain {
            name: "epsilon",
            value: bad,
            reason: "must be positive and finite",
        });
    }
    let max = epsilons.iter().copied().fold(0.0, f64::max);
    let min = epsilons.iter().copied().fold(f64::INFINITY, f64::min);
    if max / min < MIN_EPSILON_SPAN * (1.0 - 1e-12) {
        return Err(Error::Domain {
            name: "epsilon span (max/min)",
            value: max / min,
            reason: "must be at least 20",
        });
    }
    Ok(())
}

fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Adiabatic error envelope at the end of the path for one epsilon: the
/// largest `|psi_exact - psi_ad|` over the endpoints `s` in
/// `[1 - 2 pi epsilon / omega_bar, 1]` (one oscillation period of the
/// excited amplitude), sampled at the frame's nodes.
fn endpoint_error_envelope(path: &HalfTurnPath, epsilon: f64) -> Result<f64> {
    let p = path.params(epsilon)?;
    let grid = path.grid(epsilon)?;
    let frame = build_eigenframe(&p, &grid)?;
    if frame.gap_min() < 1.0 - 1e-12 {
        return Err(Error::GapViolation {
            gap: frame.gap_min(),
            required: 1.0,
        });
    }
    let omega_bar = rotating_frame_geometry(&p)?.omega_bar;
    let tau = grid[grid.len() - 1];
    let window_start = tau - std::f64::consts::TAU / omega_bar;

    let phases = dynamical_phases(&frame);
    let mut worst = 0.0f64;
    for (k, &t) in grid.iter().enumerate().rev() {
        if t < window_start {
            break;
        }
        let exact = rabi_exact(&p, t).state;
        let adiabatic = frame.states()[k][0] * C64::from_polar(1.0, -phases[k][0]);
        worst = worst.max((exact.ket() - adiabatic).norm());
    }
    Ok(worst)
}

/// Error of the adiabatic approximation at the end of the half-turn path
/// for each epsilon, and its fitted power law in epsilon.
pub fn epsilon_scaling(path: &HalfTurnPath, epsilons: &[f64]) -> Result<ScalingStudy> {
    validate_epsilons(epsilons)?;
    let errors = epsilons
        .iter()
        .map(|&eps| endpoint_error_envelope(path, eps))
        .collect::<Result<Vec<_>>>()?;
    let slope = errors
        .iter()
        .all(|&e| e > ROUND_OFF_ERROR)
        .then(|| log_log_slope(epsilons, &errors));
    Ok(ScalingStudy {
        epsilons: epsilons.to_vec(),
        errors,
        slope,
    })
}

/// Overlap of the exact state with the instantaneous excited state.
pub fn excited_amplitude(frame: &EigenFrame, k: usize, state: &Ket) -> C64 {
    inner(&frame.states()[k][1], state)
}
