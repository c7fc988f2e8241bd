//! Numerical laboratory for the adiabatic approximation of driven two-level
//! systems.
//!
//! The crate evolves time-dependent two-level Hamiltonians exactly and
//! numerically, tracks instantaneous eigenframes in the parallel-transport
//! gauge, reconstructs the state from the jump expansion (zero and one
//! transitions) and evaluates the a priori and a posteriori validity
//! criteria. The worked model is a spin 1/2 in a uniformly rotating
//! magnetic field, see [`models`].
//!
//! Units: hbar = 1 throughout; energies are angular frequencies.

pub mod adiabatic;
pub mod error;
pub mod models;
pub mod propagator;
pub mod scaled;
pub mod spectral;
pub mod two_level;

pub use adiabatic::{
    a_posteriori_deviation, a_posteriori_envelope, a_priori_value, adiabatic_state,
    criteria_report, epsilon_scaling, first_order_estimate, first_order_series, first_order_term,
    jump_expansion, CriteriaReport, HalfTurnPath, JumpExpansionState, ScalingStudy,
};
pub use error::{Error, Result};
pub use models::{
    field_direction, primed_comparison, primed_hamiltonian_numeric, primed_params,
    rotating_field_hamiltonian, rotating_frame_geometry, Hamiltonian, PrimedComparison,
    PrimedParams, RotatingFieldParams, RotatingFrameGeometry,
};
pub use propagator::{
    aligned_initial_state, evolution_operator, evolution_operator_series, integrate, rabi_exact,
    rabi_min_fidelity, rabi_propagator, uniform_grid, EvolutionResult, IntegratorOptions,
    RabiSolution, StepStats,
};
pub use scaled::{make_scaled_problem, ScaledProblem};
pub use spectral::{
    build_eigenframe, coupling, eigenstate_drift, instantaneous_eigensystem, EigenFrame,
};
pub use two_level::{
    pauli_dot, ComplexAmplitude, HermitianOperator2, Ket, StateVector, Unitary2, C64,
};
