//! Ansatz circuits of interleaved Clifford gates and Pauli rotations.
//!
//! A rotation `R(θ) = exp(iθP)` with `P ∈ {X, Y, Z}` on one wire is the
//! identity at `θ = 0`, so stripping every rotation leaves the Clifford
//! circuit that prepares the Clifford-point state.
//!
//! # Hardware-efficient generator
//!
//! [`generate_hwe_ansatz`] builds a brickwork circuit whose Clifford content
//! composes to the identity. With `d = depth`, the element order is
//!
//! ```text
//! R_0 | E_1 R_1 | E_2 R_2 | … | E_d R_d | E_d⁻¹ R_{d+1} | … | E_1⁻¹ R_{2d}
//! ```
//!
//! where each `R_l` is a fresh rotation layer and `E_l` is an entangler
//! layer. `E_l` pairs wires `(0,1), (2,3), …` for odd `l` and
//! `(1,2), (3,4), …` for even `l`. Every pair gets a block
//!
//! ```text
//! C1[a](q) C1[b](q+1) CZ(q,q+1) C1[c](q) C1[d](q+1)
//! ```
//!
//! and `E_l⁻¹` is the gate-by-gate reverse with each gate inverted. The
//! complex variant draws `a..d` from all 24 single-qubit Cliffords and uses
//! `Rx Ry Rz` per qubit per layer; the real variant draws from `{I, H}` and
//! uses `Ry` only. There are `2d + 1` rotation layers, so
//! `K = 3(2d+1)n` (complex) or `K = (2d+1)n` (real).
//!
//! Randomness: block `s` (counted across `E_1..E_d` in element order) uses a
//! fresh `ChaCha20Rng::seed_from_u64(seed)` with `set_stream(s)` and takes
//! four `next_u32()` draws, reduced `% 24` (complex) or `& 1` (real, 0 = I,
//! 1 = H).

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::{CliffordGate, C1_HADAMARD, C1_IDENTITY};
use crate::error::{check_width, Error, Result};
use crate::expansion;
use crate::observable::Observable;
use crate::pauli::PauliLetter;

pub const ANSATZ_SCHEMA_VERSION: u32 = 1;

/// Default number of candidates drawn by [`select_ansatz`].
pub const DEFAULT_CANDIDATES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn letter(self) -> PauliLetter {
        match self {
            Axis::X => PauliLetter::X,
            Axis::Y => PauliLetter::Y,
            Axis::Z => PauliLetter::Z,
        }
    }

    fn parse(s: &str) -> Option<Axis> {
        match s {
            "X" => Some(Axis::X),
            "Y" => Some(Axis::Y),
            "Z" => Some(Axis::Z),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        }
    }
}

/// `exp(iθ_param · axis_wire)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RotationGate {
    pub axis: Axis,
    pub wire: usize,
    pub param: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Clifford(CliffordGate),
    Rotation(RotationGate),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Complex,
    Real,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complex" => Ok(Variant::Complex),
            "real" => Ok(Variant::Real),
            _ => Err(Error::InvalidArgument(format!("unknown variant {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzCircuit {
    n_qubits: usize,
    elements: Vec<Element>,
    n_params: usize,
    pub metadata: Metadata,
}

impl AnsatzCircuit {
    /// Validates wires and requires rotation params to be a bijection onto
    /// `0..K` where `K` is the number of rotations.
    pub fn new(n_qubits: usize, elements: Vec<Element>, metadata: Metadata) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("circuit needs at least one qubit".into()));
        }
        let n_params = elements.iter().filter(|e| matches!(e, Element::Rotation(_))).count();
        let mut seen = vec![false; n_params];
        for (index, e) in elements.iter().enumerate() {
            let schema = |message: String| Error::Schema { index, message };
            match e {
                Element::Clifford(g) => g.validate(n_qubits).map_err(|e| schema(e.to_string()))?,
                Element::Rotation(r) => {
                    if r.wire >= n_qubits {
                        return Err(schema(format!("rotation wire {} out of range for {n_qubits} qubits", r.wire)));
                    }
                    if r.param >= n_params {
                        return Err(schema(format!(
                            "param {} out of range, circuit has {n_params} rotations",
                            r.param
                        )));
                    }
                    if std::mem::replace(&mut seen[r.param], true) {
                        return Err(schema(format!("duplicate param {}", r.param)));
                    }
                }
            }
        }
        Ok(AnsatzCircuit { n_qubits, elements, n_params, metadata })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of parameters `K`.
    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// The θ = 0 Clifford circuit, in time order.
    pub fn clifford_gates(&self) -> impl Iterator<Item = &CliffordGate> + '_ {
        self.elements.iter().filter_map(|e| match e {
            Element::Clifford(g) => Some(g),
            Element::Rotation(_) => None,
        })
    }

    /// `(element position, rotation)` in time order.
    pub fn rotations(&self) -> impl Iterator<Item = (usize, &RotationGate)> + '_ {
        self.elements.iter().enumerate().filter_map(|(i, e)| match e {
            Element::Rotation(r) => Some((i, r)),
            Element::Clifford(_) => None,
        })
    }

    /// Element position of each parameter's rotation, indexed by param id.
    pub fn param_positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.n_params];
        for (i, r) in self.rotations() {
            pos[r.param] = i;
        }
        pos
    }

    pub fn to_json(&self) -> String {
        let doc = AnsatzDocument {
            version: ANSATZ_SCHEMA_VERSION,
            n_qubits: self.n_qubits,
            n_params: self.n_params,
            elements: self.elements.iter().map(element_to_value).collect(),
            metadata: self.metadata.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("ansatz document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: AnsatzDocument = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        if doc.version != ANSATZ_SCHEMA_VERSION {
            return Err(Error::Document(format!(
                "unsupported ansatz schema version {} (expected {ANSATZ_SCHEMA_VERSION})",
                doc.version
            )));
        }
        let elements = doc
            .elements
            .into_iter()
            .enumerate()
            .map(|(index, v)| element_from_value(v).map_err(|message| Error::Schema { index, message }))
            .collect::<Result<Vec<_>>>()?;
        let circuit = AnsatzCircuit::new(doc.n_qubits, elements, doc.metadata)?;
        if circuit.n_params != doc.n_params {
            return Err(Error::Document(format!(
                "n_params is {} but the circuit has {} rotations",
                doc.n_params, circuit.n_params
            )));
        }
        Ok(circuit)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnsatzDocument {
    version: u32,
    n_qubits: usize,
    n_params: usize,
    elements: Vec<serde_json::Value>,
    #[serde(default)]
    metadata: Metadata,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ElementDoc {
    Clifford {
        kind: String,
        wires: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        index: Option<u8>,
    },
    Rotation {
        axis: String,
        wire: usize,
        param: usize,
    },
}

fn element_to_value(e: &Element) -> serde_json::Value {
    let doc = match e {
        Element::Clifford(g) => ElementDoc::Clifford {
            kind: g.kind_name().to_string(),
            wires: g.wire_list(),
            index: match g {
                CliffordGate::C1 { index, .. } => Some(*index),
                _ => None,
            },
        },
        Element::Rotation(r) => ElementDoc::Rotation { axis: r.axis.name().to_string(), wire: r.wire, param: r.param },
    };
    serde_json::to_value(doc).expect("element serializes")
}

fn element_from_value(v: serde_json::Value) -> std::result::Result<Element, String> {
    let doc: ElementDoc = serde_json::from_value(v).map_err(|e| e.to_string())?;
    match doc {
        ElementDoc::Rotation { axis, wire, param } => {
            let axis = Axis::parse(&axis).ok_or_else(|| format!("unknown rotation axis {axis:?}"))?;
            Ok(Element::Rotation(RotationGate { axis, wire, param }))
        }
        ElementDoc::Clifford { kind, wires, index } => {
            let one = || match wires.as_slice() {
                [q] => Ok(*q),
                _ => Err(format!("{kind} takes one wire, got {}", wires.len())),
            };
            let two = || match wires.as_slice() {
                [a, b] => Ok((*a, *b)),
                _ => Err(format!("{kind} takes two wires, got {}", wires.len())),
            };
            if index.is_some() && kind != "C1" {
                return Err(format!("{kind} does not take an index"));
            }
            let g = match kind.as_str() {
                "H" => CliffordGate::H(one()?),
                "S" => CliffordGate::S(one()?),
                "Sdg" => CliffordGate::Sdg(one()?),
                "X" => CliffordGate::X(one()?),
                "Y" => CliffordGate::Y(one()?),
                "Z" => CliffordGate::Z(one()?),
                "CNOT" => {
                    let (control, target) = two()?;
                    CliffordGate::Cnot { control, target }
                }
                "CZ" => {
                    let (a, b) = two()?;
                    CliffordGate::Cz(a, b)
                }
                "SWAP" => {
                    let (a, b) = two()?;
                    CliffordGate::Swap(a, b)
                }
                "C1" => {
                    let index = index.ok_or("C1 needs an index")?;
                    if index >= 24 {
                        return Err(format!("C1 index {index} not in 0..24"));
                    }
                    CliffordGate::C1 { index, wire: one()? }
                }
                other => return Err(format!("unknown Clifford kind {other:?}")),
            };
            Ok(Element::Clifford(g))
        }
    }
}

/// Computational-basis input state; `bits[q]` is the occupation of qubit `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReferenceState(Vec<bool>);

impl ReferenceState {
    pub fn zeros(n_qubits: usize) -> Self {
        ReferenceState(vec![false; n_qubits])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        ReferenceState(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn n_qubits(&self) -> usize {
        self.0.len()
    }

    pub fn check_width(&self, n_qubits: usize) -> Result<()> {
        check_width(n_qubits, self.0.len())
    }
}

impl std::str::FromStr for ReferenceState {
    type Err = Error;

    /// Left to right is qubit 0 … n−1, e.g. `"1100"`.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidArgument(format!("reference bitstring has {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .and_then(|bits| {
                if bits.is_empty() {
                    Err(Error::InvalidArgument("empty reference bitstring".into()))
                } else {
                    Ok(ReferenceState(bits))
                }
            })
    }
}

impl std::fmt::Display for ReferenceState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

fn block_draws(seed: u64, slot: u64, variant: Variant) -> [u8; 4] {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(slot);
    let mut out = [0u8; 4];
    for d in &mut out {
        let r = rng.next_u32();
        *d = match variant {
            Variant::Complex => (r % 24) as u8,
            Variant::Real => {
                if r & 1 == 0 {
                    C1_IDENTITY
                } else {
                    C1_HADAMARD
                }
            }
        };
    }
    out
}

/// Seeded brickwork ansatz that is the identity at θ = 0. See the module docs
/// for the exact layout.
pub fn generate_hwe_ansatz(n_qubits: usize, depth: usize, seed: u64, variant: Variant) -> Result<AnsatzCircuit> {
    if n_qubits < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 qubits, got {n_qubits}")));
    }
    if depth < 1 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let mut elements = Vec::new();
    let mut next_param = 0usize;
    let mut rotation_layer = |elements: &mut Vec<Element>| {
        let axes: &[Axis] = match variant {
            Variant::Complex => &[Axis::X, Axis::Y, Axis::Z],
            Variant::Real => &[Axis::Y],
        };
        for wire in 0..n_qubits {
            for &axis in axes {
                elements.push(Element::Rotation(RotationGate { axis, wire, param: next_param }));
                next_param += 1;
            }
        }
    };

    let mut slot = 0u64;
    let mut layers: Vec<Vec<CliffordGate>> = Vec::with_capacity(depth);
    for l in 1..=depth {
        let offset = if l % 2 == 1 { 0 } else { 1 };
        let mut gates = Vec::new();
        let mut q = offset;
        while q + 1 < n_qubits {
            let [a, b, c, d] = block_draws(seed, slot, variant);
            slot += 1;
            gates.extend([
                CliffordGate::C1 { index: a, wire: q },
                CliffordGate::C1 { index: b, wire: q + 1 },
                CliffordGate::Cz(q, q + 1),
                CliffordGate::C1 { index: c, wire: q },
                CliffordGate::C1 { index: d, wire: q + 1 },
            ]);
            q += 2;
        }
        layers.push(gates);
    }

    rotation_layer(&mut elements);
    for layer in &layers {
        elements.extend(layer.iter().copied().map(Element::Clifford));
        rotation_layer(&mut elements);
    }
    for layer in layers.iter().rev() {
        elements.extend(layer.iter().rev().map(|g| Element::Clifford(g.inverse())));
        rotation_layer(&mut elements);
    }

    AnsatzCircuit::new(n_qubits, elements, Metadata { seed: Some(seed), variant: Some(variant), depth: Some(depth) })
}

/// Outcome of [`select_ansatz`].
#[derive(Clone, Debug)]
pub struct Selection {
    pub ansatz: AnsatzCircuit,
    pub index: usize,
    /// `Σ_l |g_l|` per candidate, in candidate order.
    pub scores: Vec<f64>,
    /// Seed of each candidate.
    pub seeds: Vec<u64>,
}

/// Seed of candidate `i` under master seed `seed`.
pub fn candidate_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add(i as u64)
}

/// Draw `count` ansatzes with seeds `seed, seed+1, …` and keep the one with
/// the largest `Σ_l |g_l|`; ties go to the lowest index.
pub fn select_ansatz(
    count: usize,
    n_qubits: usize,
    depth: usize,
    variant: Variant,
    observable: &Observable,
    reference: &ReferenceState,
    seed: u64,
) -> Result<Selection> {
    if count == 0 {
        return Err(Error::InvalidArgument("candidate count must be at least 1".into()));
    }
    check_width(n_qubits, observable.n_qubits())?;
    reference.check_width(n_qubits)?;
    let seeds: Vec<u64> = (0..count).map(|i| candidate_seed(seed, i)).collect();
    let scored = seeds
        .par_iter()
        .map(|&s| {
            let ansatz = generate_hwe_ansatz(n_qubits, depth, s, variant)?;
            let g = expansion::gradient(&ansatz, observable, reference)?;
            Ok(g.iter().map(|v| v.abs()).sum::<f64>())
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut best = 0;
    for (i, &s) in scored.iter().enumerate() {
        if s > scored[best] {
            best = i;
        }
    }
    let ansatz = generate_hwe_ansatz(n_qubits, depth, seeds[best], variant)?;
    Ok(Selection { ansatz, index: best, scores: scored, seeds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::StabilizerTableau;

    #[test]
    fn generated_circuit_is_identity_at_zero() {
        for variant in [Variant::Complex, Variant::Real] {
            for n in 2..7 {
                let a = generate_hwe_ansatz(n, 3, 11, variant).unwrap();
                let bits: Vec<bool> = (0..n).map(|q| q % 3 == 0).collect();
                let mut t = StabilizerTableau::basis_state(&bits);
                t.apply_all(a.clifford_gates()).unwrap();
                assert_eq!(t, StabilizerTableau::basis_state(&bits));
            }
        }
    }

    #[test]
    fn parameter_counts_follow_depth_convention() {
        let c = generate_hwe_ansatz(4, 2, 1, Variant::Complex).unwrap();
        let r = generate_hwe_ansatz(4, 2, 1, Variant::Real).unwrap();
        assert_eq!(c.n_params(), 3 * 5 * 4);
        assert_eq!(r.n_params(), 5 * 4);
        assert!(r.rotations().all(|(_, g)| g.axis == Axis::Y));
        assert_eq!(r.metadata.depth, Some(2));
    }

    #[test]
    fn real_variant_uses_identity_and_hadamard_only() {
        let r = generate_hwe_ansatz(6, 4, 99, Variant::Real).unwrap();
        for g in r.clifford_gates() {
            match g {
                CliffordGate::C1 { index, .. } => assert!(*index <= 1),
                CliffordGate::Cz(..) => {}
                other => panic!("unexpected gate {other}"),
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_hwe_ansatz(5, 3, 42, Variant::Complex).unwrap().to_json();
        let b = generate_hwe_ansatz(5, 3, 42, Variant::Complex).unwrap().to_json();
        let c = generate_hwe_ansatz(5, 3, 43, Variant::Complex).unwrap().to_json();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn generator_rejects_bad_shapes() {
        assert!(generate_hwe_ansatz(4, 0, 1, Variant::Real).is_err());
        assert!(generate_hwe_ansatz(1, 2, 1, Variant::Real).is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = generate_hwe_ansatz(4, 2, 7, Variant::Complex).unwrap();
        assert_eq!(AnsatzCircuit::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn hand_written_single_rotation() {
        let text = r#"{"version":1,"n_qubits":1,"n_params":1,
            "elements":[{"type":"rotation","axis":"Y","wire":0,"param":0}]}"#;
        let a = AnsatzCircuit::from_json(text).unwrap();
        assert_eq!(a.n_params(), 1);
        assert_eq!(a.elements().len(), 1);
        assert_eq!(a.metadata, Metadata::default());
    }

    #[test]
    fn duplicate_param_is_rejected_with_index() {
        let text = r#"{"version":1,"n_qubits":2,"n_params":2,"elements":[
            {"type":"rotation","axis":"Y","wire":0,"param":0},
            {"type":"clifford","kind":"CZ","wires":[0,1]},
            {"type":"rotation","axis":"X","wire":1,"param":0}]}"#;
        match AnsatzCircuit::from_json(text) {
            Err(Error::Schema { index: 2, message }) => assert!(message.contains("duplicate")),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn schema_violations_name_the_element() {
        let bad_kind = r#"{"version":1,"n_qubits":1,"n_params":0,
            "elements":[{"type":"clifford","kind":"T","wires":[0]}]}"#;
        assert!(matches!(AnsatzCircuit::from_json(bad_kind), Err(Error::Schema { index: 0, .. })));
        let bad_wires = r#"{"version":1,"n_qubits":2,"n_params":0,"elements":[
            {"type":"clifford","kind":"H","wires":[0]},
            {"type":"clifford","kind":"CZ","wires":[0]}]}"#;
        assert!(matches!(AnsatzCircuit::from_json(bad_wires), Err(Error::Schema { index: 1, .. })));
        let bad_version = r#"{"version":9,"n_qubits":1,"n_params":0,"elements":[]}"#;
        assert!(matches!(AnsatzCircuit::from_json(bad_version), Err(Error::Document(_))));
        let bad_count = r#"{"version":1,"n_qubits":1,"n_params":3,"elements":[]}"#;
        assert!(matches!(AnsatzCircuit::from_json(bad_count), Err(Error::Document(_))));
    }

    #[test]
    fn reference_parsing() {
        let r: ReferenceState = "1100".parse().unwrap();
        assert_eq!(r.bits(), &[true, true, false, false]);
        assert_eq!(r.to_string(), "1100");
        assert!("10a".parse::<ReferenceState>().is_err());
        assert!("".parse::<ReferenceState>().is_err());
    }
}
