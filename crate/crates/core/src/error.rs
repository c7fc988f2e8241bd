use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("direction vector must have unit length, got |n| = {norm}")]
    NotUnitVector { norm: f64 },

    #[error("operator is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("operator is not unitary (defect {defect:.3e}, allowed {bound:.3e})")]
    NotUnitary { defect: f64, bound: f64 },

    #[error("non-finite amplitude")]
    NonFinite,

    #[error("state is not normalized, |psi| = {norm}")]
    NotNormalized { norm: f64 },

    #[error("invalid {name}: {value} ({reason})")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("degenerate rotating-frame geometry: effective field vanishes, tilt is undefined")]
    DegenerateGeometry,

    #[error("time grid must be strictly increasing (violated at index {index})")]
    GridNotIncreasing { index: usize },

    #[error("time grid needs at least {needed} points, got {got}")]
    GridTooShort { needed: usize, got: usize },

    #[error("grid too coarse at index {index}: same-band overlap {overlap:.4} is below 0.9")]
    GridTooCoarse { index: usize, overlap: f64 },

    #[error("grid too coarse at index {index}: phase advance {advance:.4} per cell exceeds pi/4")]
    PhaseUnresolved { index: usize, advance: f64 },

    #[error("time {t} lies outside the grid span [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },

    #[error("step size underflow at t = {t} (h = {h:.3e}); problem looks stiff")]
    StepUnderflow { t: f64, h: f64 },

    #[error("step budget of {max_steps} exhausted at t = {t}")]
    MaxSteps { t: f64, max_steps: usize },

    #[error("norm drift {drift:.3e} exceeds the bound {bound:.3e}")]
    NormDrift { drift: f64, bound: f64 },

    #[error("spectral gap {gap} is below the required minimum {required}")]
    GapViolation { gap: f64, required: f64 },
}
