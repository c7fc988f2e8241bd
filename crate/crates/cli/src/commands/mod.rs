mod criteria;
mod evolve;
mod primed;
mod scaling;
mod sweep;

pub use criteria::run as criteria;
pub use evolve::run as evolve;
pub use primed::run as primed;
pub use scaling::run as scaling;
pub use sweep::run as sweep;

use adiabat_core::{a_posteriori_envelope, RotatingFieldParams};

use crate::args::FieldArgs;
use crate::error::{CliError, CliResult};

fn field_params(field: &FieldArgs) -> CliResult<RotatingFieldParams> {
    Ok(RotatingFieldParams::new(
        field.omega0,
        field.omega,
        field.theta,
    )?)
}

/// `|omega sin(theta)| / omega_bar`. The effective field vanishes only for
/// `theta = 0`, where the coupling and hence the envelope are zero.
fn envelope_or_zero(p: &RotatingFieldParams) -> f64 {
    a_posteriori_envelope(p).unwrap_or(0.0)
}

fn positive(name: &str, value: f64) -> CliResult<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::Usage(format!(
            "--{name} must be positive and finite, got {value}"
        )))
    }
}

fn at_least(name: &str, value: usize, min: usize) -> CliResult<usize> {
    if value >= min {
        Ok(value)
    } else {
        Err(CliError::Usage(format!(
            "--{name} must be at least {min}, got {value}"
        )))
    }
}
