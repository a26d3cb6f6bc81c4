//! Seeded problem generators shared by tests, benchmarks and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{generate_hwe_ansatz, AnsatzCircuit, ReferenceState, Variant};
use crate::observable::Observable;
use crate::pauli::{PauliLetter, PauliString};

const LETTERS: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

/// `terms` uniformly random Pauli strings with coefficients in `[-1, 1)`.
/// Repeats merge, so the result may be shorter.
pub fn random_observable<R: Rng>(rng: &mut R, n_qubits: usize, terms: usize) -> Observable {
    let t: Vec<(f64, PauliString)> = (0..terms)
        .map(|_| {
            let letters: Vec<PauliLetter> = (0..n_qubits).map(|_| LETTERS[rng.random_range(0..4)]).collect();
            (rng.random_range(-1.0..1.0), PauliString::from_letters(&letters))
        })
        .collect();
    Observable::from_terms(n_qubits, t).expect("generated terms are unphased")
}

/// [`random_observable`] from its own seeded stream.
pub fn seeded_observable(seed: u64, n_qubits: usize, terms: usize) -> Observable {
    random_observable(&mut ChaCha8Rng::seed_from_u64(seed), n_qubits, terms)
}

pub fn random_reference<R: Rng>(rng: &mut R, n_qubits: usize) -> ReferenceState {
    ReferenceState::from_bits((0..n_qubits).map(|_| rng.random_bool(0.5)).collect())
}

/// Open-chain transverse-field Ising model `-J Σ Z_i Z_{i+1} - Σ h_i X_i`.
pub fn transverse_ising(coupling: f64, fields: &[f64]) -> Observable {
    let n = fields.len();
    let single = |q, l| PauliString::single(n, q, l).expect("q < n");
    let zz = (0..n.saturating_sub(1)).map(|q| {
        let p = single(q, PauliLetter::Z).mul_unchecked(&single(q + 1, PauliLetter::Z));
        (-coupling, p)
    });
    let x = fields.iter().enumerate().map(|(q, &h)| (-h, single(q, PauliLetter::X)));
    Observable::from_terms(n, zz.chain(x).collect::<Vec<_>>()).expect("unphased terms")
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub ansatz: AnsatzCircuit,
    pub observable: Observable,
    pub reference: ReferenceState,
}

/// Ranges for [`random_instances`], inclusive.
#[derive(Clone, Copy, Debug)]
pub struct InstanceShape {
    pub qubits: (usize, usize),
    pub depth: (usize, usize),
    pub max_terms: usize,
}

impl Default for InstanceShape {
    fn default() -> Self {
        InstanceShape { qubits: (2, 8), depth: (1, 4), max_terms: 16 }
    }
}

/// `count` instances drawn from one seeded stream; both variants appear.
pub fn random_instances(seed: u64, count: usize, shape: InstanceShape) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(shape.qubits.0..=shape.qubits.1);
            let depth = rng.random_range(shape.depth.0..=shape.depth.1);
            let variant = if rng.random_bool(0.5) { Variant::Complex } else { Variant::Real };
            let terms = rng.random_range(1..=shape.max_terms);
            let observable = random_observable(&mut rng, n, terms);
            let reference = random_reference(&mut rng, n);
            let ansatz = generate_hwe_ansatz(n, depth, rng.random(), variant).expect("n >= 2, depth >= 1");
            Instance { ansatz, observable, reference }
        })
        .collect()
}
