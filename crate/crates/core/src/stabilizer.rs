//! Tableau simulation of Clifford circuits on computational-basis inputs.
//!
//! The tableau keeps `n` stabilizer and `n` destabilizer rows as
//! [`PauliString`]s. A gate conjugates every row with the constant-size rule
//! from [`CliffordGate::conjugate_in_place`], so each row update is O(1) and a
//! gate is O(n).

use num_complex::Complex64;

use crate::clifford::CliffordGate;
use crate::error::{check_width, Result};
use crate::pauli::{PauliLetter, PauliString};

/// Exact value of `⟨ψ|Q|ψ⟩` for a phased Pauli `Q` on a stabilizer state:
/// either zero or `i^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Expectation {
    Zero,
    Phase(u8),
}

impl Expectation {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Expectation::Zero => Complex64::new(0.0, 0.0),
            Expectation::Phase(0) => Complex64::new(1.0, 0.0),
            Expectation::Phase(1) => Complex64::new(0.0, 1.0),
            Expectation::Phase(2) => Complex64::new(-1.0, 0.0),
            Expectation::Phase(_) => Complex64::new(0.0, -1.0),
        }
    }

    pub fn re(self) -> f64 {
        self.to_complex().re
    }

    pub fn im(self) -> f64 {
        self.to_complex().im
    }

    /// Multiply by `i^k`.
    pub fn times_phase(self, k: u8) -> Expectation {
        match self {
            Expectation::Zero => Expectation::Zero,
            Expectation::Phase(p) => Expectation::Phase((p + k) & 3),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    stabilizers: Vec<PauliString>,
    destabilizers: Vec<PauliString>,
}

impl StabilizerTableau {
    /// `|0…0⟩`.
    pub fn zero_state(n_qubits: usize) -> Self {
        Self::basis_state(&vec![false; n_qubits])
    }

    /// Computational-basis state `|b⟩`: stabilizers `(-1)^{b_j} Z_j`,
    /// destabilizers `X_j`.
    pub fn basis_state(bits: &[bool]) -> Self {
        let n = bits.len();
        let stabilizers = bits
            .iter()
            .enumerate()
            .map(|(j, &b)| {
                let z = PauliString::single(n, j, PauliLetter::Z).expect("j < n");
                z.with_phase(if b { 2 } else { 0 })
            })
            .collect();
        let destabilizers = (0..n).map(|j| PauliString::single(n, j, PauliLetter::X).expect("j < n")).collect();
        StabilizerTableau { n, stabilizers, destabilizers }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.destabilizers
    }

    pub fn apply(&mut self, gate: &CliffordGate) -> Result<()> {
        gate.validate(self.n)?;
        for row in self.stabilizers.iter_mut().chain(self.destabilizers.iter_mut()) {
            gate.conjugate_in_place(row);
        }
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a CliffordGate>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// `⟨ψ|q|ψ⟩`, exact.
    pub fn expectation(&self, q: &PauliString) -> Result<Expectation> {
        check_width(self.n, q.n_qubits())?;
        Ok(self.expectation_unchecked(q))
    }

    pub(crate) fn expectation_unchecked(&self, q: &PauliString) -> Expectation {
        if self.anticommutes_with_stabilizer(q) {
            return Expectation::Zero;
        }
        self.expectation_in_group(q)
    }

    /// The unphased part of `q` is in the stabilizer group (up to sign) iff it
    /// commutes with every generator; otherwise `⟨q⟩ = 0`.
    #[inline]
    pub(crate) fn anticommutes_with_stabilizer(&self, q: &PauliString) -> bool {
        self.stabilizers.iter().any(|s| !s.commutes_unchecked(q))
    }

    /// `⟨q⟩` for `q` already known to commute with every stabilizer. The
    /// decomposition uses generator j exactly when q anticommutes with
    /// destabilizer j.
    pub(crate) fn expectation_in_group(&self, q: &PauliString) -> Expectation {
        let mut product = PauliString::identity(self.n);
        for (d, s) in self.destabilizers.iter().zip(&self.stabilizers) {
            if !d.commutes_unchecked(q) {
                product.mul_assign_right(s);
            }
        }
        debug_assert_eq!(product.x_words(), q.x_words());
        debug_assert_eq!(product.z_words(), q.z_words());
        // product = i^p · letters(q) with p ∈ {0, 2}; ⟨letters(q)⟩ = i^{-p} = i^p.
        Expectation::Phase((q.phase() + product.phase()) & 3)
    }

    /// Check the tableau invariants: stabilizers commute pairwise, each
    /// destabilizer anticommutes only with its partner, stabilizer phases are
    /// real. Independence follows from the symplectic pairing.
    pub fn is_consistent(&self) -> bool {
        for i in 0..self.n {
            if !self.stabilizers[i].is_hermitian() || !self.destabilizers[i].is_hermitian() {
                return false;
            }
            for j in 0..self.n {
                let s = &self.stabilizers[j];
                if !self.stabilizers[i].commutes_unchecked(s) {
                    return false;
                }
                if self.destabilizers[i].commutes_unchecked(s) == (i == j) {
                    return false;
                }
                if !self.destabilizers[i].commutes_unchecked(&self.destabilizers[j]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Apply a gate sequence to a tableau, returning the evolved copy.
pub fn apply_clifford(state: &StabilizerTableau, gate: &CliffordGate) -> Result<StabilizerTableau> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// `⟨ψ|q|ψ⟩` as a complex number.
pub fn expectation(state: &StabilizerTableau, q: &PauliString) -> Result<Complex64> {
    Ok(state.expectation(q)?.to_complex())
}

/// A Clifford unitary `C` stored as the images `C X_j C†` and `C Z_j C†`.
///
/// Built right to left: [`CliffordMap::prepend`] replaces `C` with `C·g`,
/// touching only the images of `g`'s wires, so sweeping a circuit backwards
/// costs O(n) per gate and yields the conjugation map of every suffix.
#[derive(Clone, Debug)]
pub struct CliffordMap {
    n: usize,
    x_images: Vec<PauliString>,
    z_images: Vec<PauliString>,
}

impl CliffordMap {
    pub fn identity(n_qubits: usize) -> Self {
        let single = |j, l| PauliString::single(n_qubits, j, l).expect("j < n");
        CliffordMap {
            n: n_qubits,
            x_images: (0..n_qubits).map(|j| single(j, PauliLetter::X)).collect(),
            z_images: (0..n_qubits).map(|j| single(j, PauliLetter::Z)).collect(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// `C (letter on wire) C†`.
    pub fn image_of(&self, wire: usize, letter: PauliLetter) -> PauliString {
        match letter {
            PauliLetter::I => PauliString::identity(self.n),
            PauliLetter::X => self.x_images[wire].clone(),
            PauliLetter::Z => self.z_images[wire].clone(),
            PauliLetter::Y => {
                // Y = i X Z
                let mut y = self.x_images[wire].mul_unchecked(&self.z_images[wire]);
                y.add_phase(1);
                y
            }
        }
    }

    /// `C p C†` for an arbitrary Pauli, O(weight · n).
    pub fn apply(&self, p: &PauliString) -> Result<PauliString> {
        check_width(self.n, p.n_qubits())?;
        let mut out = PauliString::identity(self.n).with_phase(p.phase());
        for q in p.support() {
            out.mul_assign_right(&self.image_of(q, p.letter(q)));
        }
        Ok(out)
    }

    /// Replace `C` by `C·g` (g acts first).
    pub fn prepend(&mut self, gate: &CliffordGate) -> Result<()> {
        gate.validate(self.n)?;
        let (wires, k) = gate.wires();
        let mut updates = Vec::with_capacity(2 * k);
        for &w in &wires[..k] {
            for letter in [PauliLetter::X, PauliLetter::Z] {
                let mut local = PauliString::single(self.n, w, letter)?;
                gate.conjugate_in_place(&mut local);
                updates.push((w, letter, self.apply(&local)?));
            }
        }
        for (w, letter, img) in updates {
            match letter {
                PauliLetter::X => self.x_images[w] = img,
                _ => self.z_images[w] = img,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::conjugate_pauli;
    use crate::pauli::parse_pauli;

    fn p(t: &str, n: usize) -> PauliString {
        parse_pauli(t, n).unwrap()
    }

    #[test]
    fn hadamard_on_zero_gives_plus() {
        let s = apply_clifford(&StabilizerTableau::zero_state(1), &CliffordGate::H(0)).unwrap();
        assert_eq!(s.stabilizers()[0], p("X0", 1));
    }

    #[test]
    fn cnot_on_zero_zero() {
        let s =
            apply_clifford(&StabilizerTableau::zero_state(2), &CliffordGate::Cnot { control: 0, target: 1 }).unwrap();
        assert_eq!(s.stabilizers(), &[p("Z0", 2), p("Z0 Z1", 2)]);
        assert!(s.is_consistent());
    }

    #[test]
    fn basis_expectations() {
        let s = StabilizerTableau::zero_state(3);
        assert_eq!(s.expectation(&p("Z1", 3)).unwrap(), Expectation::Phase(0));
        assert_eq!(s.expectation(&p("X1", 3)).unwrap(), Expectation::Zero);
        assert_eq!(s.expectation(&p("", 3)).unwrap(), Expectation::Phase(0));
        let iz = p("Z0", 3).with_phase(1);
        assert_eq!(expectation(&s, &iz).unwrap(), Complex64::new(0.0, 1.0));
        let b = StabilizerTableau::basis_state(&[true, false, true]);
        assert_eq!(b.expectation(&p("Z0", 3)).unwrap(), Expectation::Phase(2));
        assert_eq!(b.expectation(&p("Z0 Z2", 3)).unwrap(), Expectation::Phase(0));
        assert_eq!(b.expectation(&p("Z0 Z1", 3)).unwrap(), Expectation::Phase(2));
    }

    #[test]
    fn bell_state_correlations() {
        let mut s = StabilizerTableau::zero_state(2);
        s.apply_all(&[CliffordGate::H(0), CliffordGate::Cnot { control: 0, target: 1 }]).unwrap();
        assert_eq!(s.expectation(&p("X0 X1", 2)).unwrap(), Expectation::Phase(0));
        assert_eq!(s.expectation(&p("Y0 Y1", 2)).unwrap(), Expectation::Phase(2));
        assert_eq!(s.expectation(&p("Z0 Z1", 2)).unwrap(), Expectation::Phase(0));
        assert_eq!(s.expectation(&p("Z0", 2)).unwrap(), Expectation::Zero);
    }

    #[test]
    fn width_errors() {
        let s = StabilizerTableau::zero_state(2);
        assert!(s.expectation(&p("Z0", 3)).is_err());
        assert!(apply_clifford(&s, &CliffordGate::H(5)).is_err());
        assert!(apply_clifford(&s, &CliffordGate::Swap(0, 0)).is_err());
    }

    #[test]
    fn clifford_map_matches_gatewise_conjugation() {
        let circuit = [
            CliffordGate::H(0),
            CliffordGate::Cnot { control: 0, target: 2 },
            CliffordGate::C1 { index: 13, wire: 1 },
            CliffordGate::Cz(1, 2),
            CliffordGate::S(2),
            CliffordGate::Swap(0, 1),
        ];
        let mut map = CliffordMap::identity(3);
        for g in circuit.iter().rev() {
            map.prepend(g).unwrap();
        }
        for t in ["X0", "Y1", "Z2", "X0 Y1 Z2", "Y0 Y2"] {
            let q = p(t, 3).with_phase(2);
            assert_eq!(map.apply(&q).unwrap(), conjugate_pauli(&circuit, &q).unwrap(), "{t}");
        }
    }
}
