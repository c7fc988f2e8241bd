//! Energy/time-scale bookkeeping for `H(t) = E * H_hat(t / tau)`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Energy scale `E`, time scale `tau` and the adiabaticity parameter
/// `epsilon = 1 / (E tau)`. Dimensionless time is `s = t / tau`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScaledProblem {
    pub energy_scale: f64,
    pub time_scale: f64,
    pub epsilon: f64,
}

pub fn make_scaled_problem(energy_scale: f64, time_scale: f64) -> Result<ScaledProblem> {
    if !(energy_scale > 0.0 && energy_scale.is_finite()) {
        return Err(Error::Domain {
            name: "energy scale",
            value: energy_scale,
            reason: "must be positive and finite",
        });
    }
    if !(time_scale > 0.0 && time_scale.is_finite()) {
        return Err(Error::Domain {
            name: "time scale",
            value: time_scale,
            reason: "must be positive and finite",
        });
    }
    Ok(ScaledProblem {
        energy_scale,
        time_scale,
        epsilon: 1.0 / (energy_scale * time_scale),
    })
}

impl ScaledProblem {
    /// Problem with energy scale `E` whose time scale realizes `epsilon`.
    pub fn from_epsilon(energy_scale: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Domain {
                name: "epsilon",
                value: epsilon,
                reason: "must be positive and finite",
            });
        }
        make_scaled_problem(energy_scale, 1.0 / (energy_scale * epsilon))
    }

    pub fn s_of(&self, t: f64) -> f64 {
        t / self.time_scale
    }

    pub fn t_of(&self, s: f64) -> f64 {
        s * self.time_scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_examples() {
        assert_eq!(make_scaled_problem(1.0, 1.0).unwrap().epsilon, 1.0);
        assert!((make_scaled_problem(1.0, 100.0).unwrap().epsilon - 0.01).abs() < 1e-15);
        assert!((make_scaled_problem(2.0, 50.0).unwrap().epsilon - 0.01).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive_scales() {
        assert!(make_scaled_problem(0.0, 1.0).is_err());
        assert!(make_scaled_problem(1.0, -2.0).is_err());
        assert!(make_scaled_problem(f64::NAN, 1.0).is_err());
        assert!(ScaledProblem::from_epsilon(1.0, 0.0).is_err());
    }

    #[test]
    fn time_conversion_round_trips() {
        let p = ScaledProblem::from_epsilon(1.0, 0.02).unwrap();
        assert!((p.time_scale - 50.0).abs() < 1e-12);
        assert!((p.t_of(p.s_of(17.0)) - 17.0).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn product_is_one(e in 1e-3..1e3f64, tau in 1e-3..1e3f64) {
                let p = make_scaled_problem(e, tau).unwrap();
                prop_assert!((p.epsilon * p.energy_scale * p.time_scale - 1.0).abs() < 1e-12);
            }
        }
    }
}
