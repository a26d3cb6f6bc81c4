//! Seeded workloads shared by the criterion benches.

use qcx_core::fixtures::seeded_observable;
use qcx_core::{generate_hwe_ansatz, AnsatzCircuit, Observable, ReferenceState, Variant};

pub struct Workload {
    pub ansatz: AnsatzCircuit,
    pub observable: Observable,
    pub reference: ReferenceState,
}

/// Complex-variant ansatz with a random `terms`-term observable and the
/// all-zeros reference.
pub fn workload(n_qubits: usize, depth: usize, terms: usize, seed: u64) -> Workload {
    Workload {
        ansatz: generate_hwe_ansatz(n_qubits, depth, seed, Variant::Complex).expect("n >= 2, depth >= 1"),
        observable: seeded_observable(seed, n_qubits, terms),
        reference: ReferenceState::zeros(n_qubits),
    }
}
