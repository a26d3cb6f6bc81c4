//! Dense reference computations: statevector simulation, finite
//! differences, exact ground energies and a BFGS optimizer.

pub mod bfgs;
pub mod dense;
pub mod finite_diff;
pub mod ground;

pub use bfgs::{
    minimize_bfgs, optimize_energy, warm_inverse_hessian, BfgsOptions, Init, MinimizeOutcome, Objective,
    OptimizationTrace, Termination, TraceRecord,
};
pub use dense::{energy, energy_capped, simulate, simulate_capped, DenseState, Evaluator, DEFAULT_MAX_QUBITS};
pub use finite_diff::{
    finite_diff_gradient, finite_diff_gradient_at, finite_diff_hessian, DEFAULT_GRADIENT_STEP, DEFAULT_HESSIAN_STEP,
};
pub use ground::{exact_ground_energy, observable_matrix, MAX_GROUND_QUBITS};
