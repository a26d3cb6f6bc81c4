//! Second-order expansion of parameterized Clifford+rotation circuits around
//! the Clifford point `θ = 0`.
//!
//! A circuit `U(θ) = R_K C_K … R_1 C_1` with `R_k(θ) = exp(iθ P_k)` reduces to
//! a Clifford at `θ = 0`. Conjugating each generator through the gates after
//! it gives Paulis `P'_k`, and then every first and second derivative of
//! `⟨O⟩` is a sum of stabilizer expectations of Pauli products. Those are
//! exact and cost polynomial time, so the local quadratic model
//!
//! ```text
//! E(θ) ≈ e0 + gᵀθ + ½ θᵀAθ
//! ```
//!
//! is available without a statevector. [`expand`] computes it and its
//! stationary point; [`verifier`] holds dense cross-checks.

pub mod circuit;
pub mod clifford;
pub mod error;
pub mod expansion;
pub mod fixtures;
mod linalg;
pub mod observable;
pub mod pauli;
pub mod stabilizer;
pub mod verifier;

pub use circuit::{
    candidate_seed, generate_hwe_ansatz, select_ansatz, AnsatzCircuit, Axis, Element, Metadata, ReferenceState,
    RotationGate, Selection, Variant,
};
pub use clifford::{conjugate_pauli, CliffordGate};
pub use error::{Error, Result, Stage};
pub use expansion::{
    apply_dropout, conjugate_generators, expand, gradient, solve_quadratic, ConjugatedGenerators, ExpansionOptions,
    ExpansionResult, HessianBlock, SolveOptions,
};
pub use observable::Observable;
pub use pauli::{commutes, parse_pauli, pauli_mul, PauliLetter, PauliString};
pub use stabilizer::{apply_clifford, expectation, CliffordMap, Expectation, StabilizerTableau};
