use adiabat_core::{
    a_priori_value, aligned_initial_state, integrate, rabi_exact, rabi_min_fidelity, uniform_grid,
    IntegratorOptions, RotatingFieldParams,
};
use clap::ValueEnum;
use rayon::prelude::*;

use super::{at_least, envelope_or_zero, positive};
use crate::args::{SweepArgs, SweepMode};
use crate::error::{CliError, CliResult};
use crate::output::{num, CsvTable};

fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| {
            if i == count - 1 {
                max
            } else {
                min + (max - min) * i as f64 / (count - 1) as f64
            }
        })
        .collect()
}

fn ordered(name: &str, min: f64, max: f64) -> CliResult<()> {
    if min.is_finite() && max.is_finite() && min < max {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--{name}-min must be below --{name}-max, got {min} and {max}"
        )))
    }
}

/// Minimum ground fidelity on the output samples and the largest amplitude
/// difference from the closed form.
fn numeric_check(
    p: &RotatingFieldParams,
    t_final: f64,
    samples: usize,
    opts: &IntegratorOptions,
) -> CliResult<(f64, f64)> {
    use adiabat_core::models::rotating_field_hamiltonian;
    use adiabat_core::two_level::inner;

    let grid = uniform_grid(t_final, samples);
    let run = integrate(p, &aligned_initial_state(p), t_final, opts, &grid)?;
    let mut min_fidelity = 1.0f64;
    let mut max_error = 0.0f64;
    for (&t, state) in grid.iter().zip(&run.states) {
        let ground =
            adiabat_core::instantaneous_eigensystem(&rotating_field_hamiltonian(p, t)).states[0];
        min_fidelity = min_fidelity.min(inner(&ground, state.ket()).norm());
        max_error = max_error.max(state.max_amplitude_difference(&rabi_exact(p, t).state));
    }
    Ok((min_fidelity, max_error))
}

pub fn run(args: &SweepArgs) -> CliResult<()> {
    let omega0 = positive("omega0", args.omega0)?;
    ordered("omega", args.omega_min, args.omega_max)?;
    ordered("theta", args.theta_min, args.theta_max)?;
    at_least("omega-count", args.omega_count, 2)?;
    at_least("theta-count", args.theta_count, 2)?;
    if !(args.horizon >= 1.0 && args.horizon.is_finite()) {
        return Err(CliError::Usage(format!(
            "--horizon must be at least one period, got {}",
            args.horizon
        )));
    }
    let samples_per_period = at_least("samples-per-period", args.samples_per_period, 4)?;
    let opts = IntegratorOptions::with_tol(args.tol);

    let mut points = Vec::with_capacity(args.omega_count * args.theta_count);
    for &omega in &linspace(args.omega_min, args.omega_max, args.omega_count) {
        for &theta in &linspace(args.theta_min, args.theta_max, args.theta_count) {
            points.push(RotatingFieldParams::new(omega0, omega, theta)?);
        }
    }

    let closed = args.mode != SweepMode::Numeric;
    let numeric = args.mode != SweepMode::ClosedForm;
    let rows: Vec<Vec<String>> = points
        .par_iter()
        .map(|p| -> CliResult<Vec<String>> {
            let t_final = args.horizon * p.rotation_period();
            let mut row = vec![
                num(p.omega),
                num(p.theta),
                num(a_priori_value(p)),
                num(envelope_or_zero(p)),
            ];
            if closed {
                row.push(num(rabi_min_fidelity(p, t_final)));
            }
            if numeric {
                let samples = (args.horizon * samples_per_period as f64).ceil() as usize + 1;
                let (min_fidelity, max_error) = numeric_check(p, t_final, samples, &opts)?;
                row.push(num(min_fidelity));
                row.push(num(max_error));
            }
            Ok(row)
        })
        .collect::<CliResult<_>>()?;

    let mut columns = vec!["omega", "theta", "aPrioriValue", "envelope"];
    if closed {
        columns.push("minFidelity");
    }
    if numeric {
        columns.extend(["minFidelityNumeric", "maxAmplitudeError"]);
    }
    let mut table = CsvTable::new("sweep", columns);
    table.comment(format!(
        "omega0={:?} omega=[{:?}, {:?}] x {} theta=[{:?}, {:?}] x {} horizonPeriods={:?} mode={}",
        omega0,
        args.omega_min,
        args.omega_max,
        args.omega_count,
        args.theta_min,
        args.theta_max,
        args.theta_count,
        args.horizon,
        args.mode
            .to_possible_value()
            .expect("no skipped variants")
            .get_name()
    ));
    if numeric {
        table.comment(format!(
            "tol={:?} samplesPerPeriod={}",
            args.tol, samples_per_period
        ));
    }
    table.comment(
        "units: hbar=1; omega, omega0 in rad per time unit; theta in rad; other columns dimensionless",
    );
    table.comment(
        "period = 2 pi/|omega| (2 pi/omega0 when omega=0); minFidelity = min over the horizon of |<0(t)|psi(t)>|",
    );
    table.rows = rows;
    table.write_to(args.common.out.as_deref())
}
