//! Clifford gates and their constant-size Pauli conjugation rules.
//!
//! The 24 single-qubit Cliffords are indexed by [`SINGLE_QUBIT_CLIFFORDS`]:
//! the shortest word over `{H, S}` reaching each group element (modulo global
//! phase), found breadth-first with `H` tried before `S`. Words are written in
//! time order, so `"HS"` applies `H` first. Index 0 is the identity and index
//! 1 is the Hadamard. The same table ships as `data/clifford1q.txt`.

use std::fmt;
use std::sync::LazyLock;

use crate::error::{Error, Result};
use crate::pauli::{PauliLetter, PauliString};

/// Index → gate word for the single-qubit Clifford group.
pub const SINGLE_QUBIT_CLIFFORDS: [&str; 24] = [
    "", "H", "S", "HS", "SH", "SS", "HSH", "HSS", "SHS", "SSH", "SSS", "HSHS", "HSSH", "HSSS", "SHSS", "SSHS", "HSHSS",
    "HSSHS", "SHSSH", "SHSSS", "SSHSS", "HSHSSH", "HSHSSS", "HSSHSS",
];

pub const C1_IDENTITY: u8 = 0;
pub const C1_HADAMARD: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    Cz(usize, usize),
    Swap(usize, usize),
    /// Element `index` of [`SINGLE_QUBIT_CLIFFORDS`].
    C1 {
        index: u8,
        wire: usize,
    },
}

impl CliffordGate {
    pub fn wires(&self) -> ([usize; 2], usize) {
        use CliffordGate::*;
        match *self {
            H(q) | S(q) | Sdg(q) | X(q) | Y(q) | Z(q) | C1 { wire: q, .. } => ([q, q], 1),
            Cnot { control, target } => ([control, target], 2),
            Cz(a, b) | Swap(a, b) => ([a, b], 2),
        }
    }

    pub fn wire_list(&self) -> Vec<usize> {
        let (w, k) = self.wires();
        w[..k].to_vec()
    }

    /// Name used in the ansatz file format.
    pub fn kind_name(&self) -> &'static str {
        use CliffordGate::*;
        match self {
            H(_) => "H",
            S(_) => "S",
            Sdg(_) => "Sdg",
            X(_) => "X",
            Y(_) => "Y",
            Z(_) => "Z",
            Cnot { .. } => "CNOT",
            Cz(..) => "CZ",
            Swap(..) => "SWAP",
            C1 { .. } => "C1",
        }
    }

    /// Inverse gate.
    pub fn inverse(&self) -> CliffordGate {
        use CliffordGate::*;
        match *self {
            S(q) => Sdg(q),
            Sdg(q) => S(q),
            C1 { index, wire } => C1 { index: c1_inverse(index), wire },
            g => g,
        }
    }

    /// Check wires against the circuit width.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if let CliffordGate::C1 { index, .. } = self {
            if *index as usize >= SINGLE_QUBIT_CLIFFORDS.len() {
                return Err(Error::InvalidArgument(format!("single-qubit Clifford index {index} not in 0..24")));
            }
        }
        let (w, k) = self.wires();
        for &wire in &w[..k] {
            if wire >= n_qubits {
                return Err(Error::WireOutOfRange { wire, n_qubits });
            }
        }
        if k == 2 && w[0] == w[1] {
            return Err(Error::DuplicateWires { wire: w[0] });
        }
        Ok(())
    }

    /// `p ← g p g†`. Wires must already be validated against `p`'s width.
    pub fn conjugate_in_place(&self, p: &mut PauliString) {
        use CliffordGate::*;
        match *self {
            H(q) => {
                let (x, z) = (p.x_bit(q), p.z_bit(q));
                if x && z {
                    p.add_phase(2);
                }
                p.set_bits(q, z, x);
            }
            S(q) => {
                // X -> Y, Y -> -X
                let (x, z) = (p.x_bit(q), p.z_bit(q));
                if x && z {
                    p.add_phase(2);
                }
                p.set_bits(q, x, z ^ x);
            }
            Sdg(q) => {
                // X -> -Y, Y -> X
                let (x, z) = (p.x_bit(q), p.z_bit(q));
                if x && !z {
                    p.add_phase(2);
                }
                p.set_bits(q, x, z ^ x);
            }
            X(q) => {
                if p.z_bit(q) {
                    p.add_phase(2);
                }
            }
            Y(q) => {
                if p.x_bit(q) ^ p.z_bit(q) {
                    p.add_phase(2);
                }
            }
            Z(q) => {
                if p.x_bit(q) {
                    p.add_phase(2);
                }
            }
            Cnot { control: c, target: t } => {
                let (xc, zc, xt, zt) = (p.x_bit(c), p.z_bit(c), p.x_bit(t), p.z_bit(t));
                if xc && zt && (xt == zc) {
                    p.add_phase(2);
                }
                p.set_bits(c, xc, zc ^ zt);
                p.set_bits(t, xt ^ xc, zt);
            }
            Cz(a, b) => {
                let (xa, za, xb, zb) = (p.x_bit(a), p.z_bit(a), p.x_bit(b), p.z_bit(b));
                if xa && xb && (za ^ zb) {
                    p.add_phase(2);
                }
                p.set_bits(a, xa, za ^ xb);
                p.set_bits(b, xb, zb ^ xa);
            }
            Swap(a, b) => {
                let (xa, za, xb, zb) = (p.x_bit(a), p.z_bit(a), p.x_bit(b), p.z_bit(b));
                p.set_bits(a, xb, zb);
                p.set_bits(b, xa, za);
            }
            C1 { index, wire } => {
                let letter = p.letter(wire);
                if letter != PauliLetter::I {
                    let (img, negate) = C1_ACTION[index as usize][letter_slot(letter)];
                    p.set_letter(wire, img);
                    if negate {
                        p.add_phase(2);
                    }
                }
            }
        }
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliffordGate::C1 { index, wire } => write!(f, "C1[{index}]({wire})"),
            g => {
                let (w, k) = g.wires();
                if k == 1 {
                    write!(f, "{}({})", g.kind_name(), w[0])
                } else {
                    write!(f, "{}({},{})", g.kind_name(), w[0], w[1])
                }
            }
        }
    }
}

fn letter_slot(l: PauliLetter) -> usize {
    match l {
        PauliLetter::X => 0,
        PauliLetter::Y => 1,
        PauliLetter::Z => 2,
        PauliLetter::I => unreachable!("identity has no image slot"),
    }
}

/// Image (letter, negated) of X, Y, Z under each single-qubit Clifford.
static C1_ACTION: LazyLock<[[(PauliLetter, bool); 3]; 24]> = LazyLock::new(|| {
    let mut table = [[(PauliLetter::I, false); 3]; 24];
    for (i, word) in SINGLE_QUBIT_CLIFFORDS.iter().enumerate() {
        for (slot, letter) in [PauliLetter::X, PauliLetter::Y, PauliLetter::Z].into_iter().enumerate() {
            let mut p = PauliString::from_letters(&[letter]);
            for c in word.chars() {
                let g = if c == 'H' { CliffordGate::H(0) } else { CliffordGate::S(0) };
                g.conjugate_in_place(&mut p);
            }
            table[i][slot] = (p.letter(0), p.phase() == 2);
        }
    }
    table
});

static C1_INVERSE: LazyLock<[u8; 24]> = LazyLock::new(|| {
    let mut inv = [0u8; 24];
    for (i, slot) in inv.iter_mut().enumerate() {
        *slot = (0..24u8)
            .find(|&j| {
                [PauliLetter::X, PauliLetter::Z].into_iter().all(|l| {
                    let mut p = PauliString::from_letters(&[l]);
                    CliffordGate::C1 { index: i as u8, wire: 0 }.conjugate_in_place(&mut p);
                    CliffordGate::C1 { index: j, wire: 0 }.conjugate_in_place(&mut p);
                    p.letter(0) == l && p.phase() == 0
                })
            })
            .expect("single-qubit Clifford table is closed under inversion");
    }
    inv
});

/// Index of the inverse of single-qubit Clifford `index`.
pub fn c1_inverse(index: u8) -> u8 {
    C1_INVERSE[index as usize]
}

/// Images of `X` and `Z` (letter, negated) under single-qubit Clifford `index`.
pub fn c1_action(index: u8) -> [(PauliLetter, bool); 2] {
    let a = C1_ACTION[index as usize];
    [a[0], a[2]]
}

/// Heisenberg conjugation `C p C†` through a gate list in time order.
pub fn conjugate_pauli(circuit: &[CliffordGate], p: &PauliString) -> Result<PauliString> {
    let mut out = p.clone();
    for g in circuit {
        g.validate(p.n_qubits())?;
        g.conjugate_in_place(&mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_pauli;
    use std::collections::HashSet;

    #[test]
    fn table_has_24_distinct_elements() {
        let actions: HashSet<_> = (0..24u8).map(c1_action).collect();
        assert_eq!(actions.len(), 24);
        assert_eq!(c1_action(C1_IDENTITY), [(PauliLetter::X, false), (PauliLetter::Z, false)]);
        assert_eq!(c1_action(C1_HADAMARD), [(PauliLetter::Z, false), (PauliLetter::X, false)]);
    }

    #[test]
    fn inverse_table_is_involutive() {
        for i in 0..24u8 {
            assert_eq!(c1_inverse(c1_inverse(i)), i);
        }
        assert_eq!(c1_inverse(C1_HADAMARD), C1_HADAMARD);
        // S·S·S is S†
        assert_eq!(c1_inverse(2), 10);
    }

    #[test]
    fn hadamard_maps_x_to_z() {
        let x = parse_pauli("X0", 1).unwrap();
        let r = conjugate_pauli(&[CliffordGate::H(0)], &x).unwrap();
        assert_eq!(r, parse_pauli("Z0", 1).unwrap());
        let y = parse_pauli("Y0", 1).unwrap();
        let r = conjugate_pauli(&[CliffordGate::H(0)], &y).unwrap();
        assert_eq!(r, y.clone().with_phase(2));
    }

    #[test]
    fn cnot_leaves_control_z() {
        let z0 = parse_pauli("Z0", 2).unwrap();
        let g = CliffordGate::Cnot { control: 0, target: 1 };
        assert_eq!(conjugate_pauli(&[g], &z0).unwrap(), z0);
        let x0 = parse_pauli("X0", 2).unwrap();
        assert_eq!(conjugate_pauli(&[g], &x0).unwrap(), parse_pauli("X0 X1", 2).unwrap());
        let z1 = parse_pauli("Z1", 2).unwrap();
        assert_eq!(conjugate_pauli(&[g], &z1).unwrap(), parse_pauli("Z0 Z1", 2).unwrap());
    }

    #[test]
    fn gate_then_inverse_is_identity() {
        let gates = [
            CliffordGate::H(1),
            CliffordGate::S(0),
            CliffordGate::Sdg(2),
            CliffordGate::X(0),
            CliffordGate::Y(1),
            CliffordGate::Z(2),
            CliffordGate::Cnot { control: 2, target: 0 },
            CliffordGate::Cz(0, 1),
            CliffordGate::Swap(1, 2),
            CliffordGate::C1 { index: 17, wire: 1 },
        ];
        for g in gates {
            for text in ["X0 Y1 Z2", "Y0 Y1 Y2", "Z0 X2", "X1"] {
                let p = parse_pauli(text, 3).unwrap();
                let r = conjugate_pauli(&[g, g.inverse()], &p).unwrap();
                assert_eq!(r, p, "{g} on {text}");
            }
        }
    }

    #[test]
    fn validation_errors() {
        let p = parse_pauli("X0", 2).unwrap();
        assert!(matches!(
            conjugate_pauli(&[CliffordGate::H(2)], &p),
            Err(Error::WireOutOfRange { wire: 2, n_qubits: 2 })
        ));
        assert!(matches!(conjugate_pauli(&[CliffordGate::Cz(1, 1)], &p), Err(Error::DuplicateWires { wire: 1 })));
        assert!(CliffordGate::C1 { index: 24, wire: 0 }.validate(1).is_err());
    }
}
