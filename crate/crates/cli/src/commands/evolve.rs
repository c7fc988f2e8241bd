use std::f64::consts::TAU;

use adiabat_core::models::rotating_field_hamiltonian;
use adiabat_core::two_level::inner;
use adiabat_core::{
    a_posteriori_deviation, aligned_initial_state, instantaneous_eigensystem, integrate,
    uniform_grid, IntegratorOptions,
};

use super::{at_least, envelope_or_zero, field_params, positive};
use crate::args::EvolveArgs;
use crate::error::CliResult;
use crate::output::{num, CsvTable};

pub fn run(args: &EvolveArgs) -> CliResult<()> {
    let p = field_params(&args.field)?;
    let t_final = positive("t-final", args.t_final.unwrap_or(20.0 * TAU / p.omega0))?;
    let samples = at_least("samples", args.samples, 2)?;
    let opts = IntegratorOptions::with_tol(args.tol);
    let grid = uniform_grid(t_final, samples);
    let run = integrate(&p, &aligned_initial_state(&p), t_final, &opts, &grid)?;
    let envelope = envelope_or_zero(&p);

    let mut table = CsvTable::new(
        "evolve",
        vec![
            "t",
            "re0",
            "im0",
            "re1",
            "im1",
            "fidelity",
            "deviation",
            "deviationEnvelope",
        ],
    );
    table.comment(format!(
        "omega0={:?} omega={:?} theta={:?} tFinal={:?} samples={} tol={:?}",
        p.omega0, p.omega, p.theta, t_final, samples, args.tol
    ));
    table.comment("initial state: instantaneous ground state of H(0)");
    table.comment(
        "units: hbar=1; t in time units, omega0 and omega in rad per time unit, theta in rad; \
         amplitudes, fidelity and deviation dimensionless",
    );
    table.comment(
        "fidelity=|<0(t)|psi(t)>| from the integrator; deviation=1-fidelity from the closed form",
    );
    table.comment(format!(
        "normDrift={} accepted={} rejected={}",
        num(run.norm_drift),
        run.step_stats.accepted,
        run.step_stats.rejected
    ));
    for (&t, state) in grid.iter().zip(&run.states) {
        let ground = instantaneous_eigensystem(&rotating_field_hamiltonian(&p, t)).states[0];
        let fidelity = inner(&ground, state.ket()).norm();
        let [a, b] = state.amplitudes();
        table.rows.push(vec![
            num(t),
            num(a.re),
            num(a.im),
            num(b.re),
            num(b.im),
            num(fidelity),
            num(a_posteriori_deviation(&p, t)),
            num(envelope),
        ]);
    }
    table.write_to(args.common.out.as_deref())
}
