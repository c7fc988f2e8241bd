use adiabat_core::{epsilon_scaling, HalfTurnPath};
use serde_json::json;

use crate::args::ScalingArgs;
use crate::error::{CliError, CliResult};
use crate::output::{num, write_json, write_text, CsvTable, TOOL};

const MAX_EPSILON: f64 = 0.2;

pub fn run(args: &ScalingArgs) -> CliResult<()> {
    if args.eps.len() < 3 {
        return Err(CliError::Usage(format!(
            "--eps needs at least 3 values, got {}",
            args.eps.len()
        )));
    }
    if let Some(bad) = args.eps.iter().find(|e| !(**e > 0.0 && **e <= MAX_EPSILON)) {
        return Err(CliError::Usage(format!(
            "--eps values must lie in (0, {MAX_EPSILON}], got {bad}"
        )));
    }
    let path = HalfTurnPath { theta: args.theta };
    // validates theta
    path.params(args.eps[0])?;
    let study = epsilon_scaling(&path, &args.eps)?;

    if args.common.json {
        let record = json!({
            "toolVersion": TOOL,
            "theta": args.theta,
            "epsilons": study.epsilons,
            "errors": study.errors,
            "slope": study.slope,
        });
        return write_json(&record, args.common.out.as_deref());
    }

    let mut table = CsvTable::new("scaling", vec!["epsilon", "error"]);
    table.comment(format!(
        "theta={:?} path=half turn of the field, unit gap, s in [0, 1]",
        args.theta
    ));
    table.comment(
        "units: epsilon and error dimensionless; error = max |psi_exact - psi_ad| over the last excited-amplitude period before s=1",
    );
    for (e, err) in study.epsilons.iter().zip(&study.errors) {
        table.rows.push(vec![num(*e), num(*err)]);
    }
    let slope_line = match study.slope {
        Some(s) => format!("slope={}\n", num(s)),
        None => "slope=n/a\n".to_string(),
    };
    table.write_to(args.common.out.as_deref())?;
    write_text(&slope_line, None)
}
