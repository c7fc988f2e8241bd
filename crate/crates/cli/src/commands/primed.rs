use adiabat_core::{
    a_posteriori_envelope, a_priori_value, evolution_operator_series, primed_comparison,
    uniform_grid, IntegratorOptions, RotatingFieldParams,
};
use serde::Serialize;

use super::{at_least, field_params, positive};
use crate::args::PrimedArgs;
use crate::error::{CliError, CliResult};
use crate::output::{write_json, TOOL};

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct PrimedRecord {
    tool_version: &'static str,
    params: RotatingFieldParams,
    theta_prime: f64,
    omega_prime: f64,
    raw_theta_prime: f64,
    raw_omega_prime: f64,
    theta_sign_folded: bool,
    axis_flipped: bool,
    rotation: [[f64; 3]; 3],
    max_residual: f64,
    residual_bound: f64,
    /// `null` when the primed field does not rotate (`omega = 0`).
    primed_envelope: Option<f64>,
    sin_theta: f64,
    a_priori_value: f64,
    t_final: f64,
    samples: usize,
    tol: f64,
}

pub fn run(args: &PrimedArgs) -> CliResult<()> {
    let p = field_params(&args.field)?;
    let t_final = positive(
        "t-final",
        args.t_final.unwrap_or_else(|| p.rotation_period()),
    )?;
    let samples = at_least("samples", args.samples, 2)?;
    let bound = positive("residual-bound", args.residual_bound)?;
    // fail on degenerate input before integrating
    adiabat_core::primed_params(&p)?;

    let grid = uniform_grid(t_final, samples);
    let unitaries = evolution_operator_series(&p, &grid, &IntegratorOptions::with_tol(args.tol))?;
    let cmp = primed_comparison(&p, &grid, &unitaries)?;
    let primed = cmp.primed;
    let record = PrimedRecord {
        tool_version: TOOL,
        params: p,
        theta_prime: primed.params.theta,
        omega_prime: primed.params.omega,
        raw_theta_prime: primed.raw_theta,
        raw_omega_prime: primed.raw_omega,
        theta_sign_folded: primed.theta_sign_folded,
        axis_flipped: primed.axis_flipped,
        rotation: cmp.rotation,
        max_residual: cmp.max_residual,
        residual_bound: bound,
        primed_envelope: a_posteriori_envelope(&primed.params).ok(),
        sin_theta: p.theta.sin(),
        a_priori_value: a_priori_value(&p),
        t_final,
        samples,
        tol: args.tol,
    };
    if cmp.max_residual > bound {
        return Err(CliError::Verification(format!(
            "primed Hamiltonian residual {:e} exceeds {:e}",
            cmp.max_residual, bound
        )));
    }
    write_json(&record, args.common.out.as_deref())
}
