//! Phase-exact Pauli strings in the symplectic (x, z) representation.
//!
//! A [`PauliString`] on `n` qubits is `i^phase` times a tensor product of
//! single-qubit letters, where the letter on qubit `q` is read from the bit
//! pair `(x_q, z_q)`: `(0,0) = I`, `(1,0) = X`, `(0,1) = Z`, `(1,1) = Y`.
//! Bits are packed 64 to a word; all products and commutation checks are
//! word-parallel XOR/AND/popcount.
//!
//! Qubit 0 is the leftmost wire in every textual form.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};

use crate::error::{check_width, Error, Result};

/// Packed bit words; inline storage covers up to 128 qubits without a heap
/// allocation.
pub type Words = SmallVec<[u64; 2]>;

#[inline]
fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
fn and_popcount(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }
}

/// An `n`-qubit Pauli operator with an exact phase `i^phase`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Words,
    z: Words,
    phase: u8,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        let w = word_count(n_qubits);
        PauliString { n: n_qubits, x: smallvec![0; w], z: smallvec![0; w], phase: 0 }
    }

    /// `letter` on `wire`, identity elsewhere, phase +1.
    pub fn single(n_qubits: usize, wire: usize, letter: PauliLetter) -> Result<Self> {
        if wire >= n_qubits {
            return Err(Error::IndexOutOfRange { index: wire, n_qubits });
        }
        let mut p = Self::identity(n_qubits);
        p.set_letter(wire, letter);
        Ok(p)
    }

    pub fn from_letters(letters: &[PauliLetter]) -> Self {
        let mut p = Self::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set_letter(q, l);
        }
        p
    }

    /// Build from raw packed words. Bits above `n_qubits` must be zero.
    pub fn from_words(n_qubits: usize, x: Words, z: Words, phase: u8) -> Self {
        debug_assert_eq!(x.len(), word_count(n_qubits));
        debug_assert_eq!(z.len(), word_count(n_qubits));
        PauliString { n: n_qubits, x, z, phase: phase & 3 }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Exponent `k` of the overall phase `i^k`, always in `0..4`.
    #[inline]
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    /// Same letters, phase +1.
    pub fn unphased(&self) -> Self {
        self.clone().with_phase(0)
    }

    #[inline]
    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    #[inline]
    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    #[inline]
    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q / 64] >> (q % 64) & 1 == 1
    }

    #[inline]
    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn letter(&self, q: usize) -> PauliLetter {
        PauliLetter::from_bits(self.x_bit(q), self.z_bit(q))
    }

    pub fn letters(&self) -> Vec<PauliLetter> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    #[inline]
    pub(crate) fn set_bits(&mut self, q: usize, x: bool, z: bool) {
        let (w, b) = (q / 64, q % 64);
        let mask = 1u64 << b;
        self.x[w] = (self.x[w] & !mask) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !mask) | ((z as u64) << b);
    }

    pub(crate) fn set_letter(&mut self, q: usize, letter: PauliLetter) {
        let (x, z) = letter.bits();
        self.set_bits(q, x, z);
    }

    /// Multiply the phase by `i^k`.
    #[inline]
    pub(crate) fn add_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) & 3;
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    /// True when every letter is `I` (the phase is not inspected).
    pub fn is_identity_letters(&self) -> bool {
        self.x.iter().chain(self.z.iter()).all(|&w| w == 0)
    }

    /// True when the operator has no X or Y letters.
    pub fn is_diagonal(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.x.iter().zip(&self.z).enumerate().flat_map(|(w, (a, b))| {
            let mut bits = a | b;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
        })
    }

    /// Exact operator product `self · other`.
    pub fn checked_mul(&self, other: &PauliString) -> Result<PauliString> {
        check_width(self.n, other.n)?;
        Ok(self.mul_unchecked(other))
    }

    /// Exact operator product; widths must agree.
    pub(crate) fn mul_unchecked(&self, other: &PauliString) -> PauliString {
        // Letter form P = i^phase · i^{|x&z|} X^x Z^z, and
        // X^x1 Z^z1 X^x2 Z^z2 = (-1)^{z1·x2} X^{x1^x2} Z^{z1^z2}.
        let mut out = self.clone();
        out.mul_assign_right(other);
        out
    }

    /// `self ← self · other`, widths must agree.
    pub(crate) fn mul_assign_right(&mut self, other: &PauliString) {
        let mut e: u32 = self.phase as u32 + other.phase as u32;
        e += and_popcount(&self.x, &self.z);
        e += and_popcount(&other.x, &other.z);
        e += 2 * and_popcount(&self.z, &other.x);
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
        let y = and_popcount(&self.x, &self.z);
        self.phase = ((e + 4 * 64 * self.x.len() as u32 - y) & 3) as u8;
    }

    /// Whether `self` and `other` commute as operators.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        check_width(self.n, other.n)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        let mut acc = 0u64;
        for i in 0..self.x.len() {
            acc ^= (self.x[i] & other.z[i]) ^ (self.z[i] & other.x[i]);
        }
        acc.count_ones() % 2 == 0
    }
}

impl Mul for &PauliString {
    type Output = PauliString;

    /// Panics on width mismatch; use [`PauliString::checked_mul`] otherwise.
    fn mul(self, rhs: &PauliString) -> PauliString {
        assert_eq!(self.n, rhs.n, "Pauli width mismatch");
        self.mul_unchecked(rhs)
    }
}

/// Exact product `a · b`, including the accumulated `i^k` phase.
pub fn pauli_mul(a: &PauliString, b: &PauliString) -> Result<PauliString> {
    a.checked_mul(b)
}

/// True iff `a·b = b·a`.
pub fn commutes(a: &PauliString, b: &PauliString) -> Result<bool> {
    a.commutes(b)
}

/// Parse whitespace-separated `letter+index` tokens such as `"X0 Z3 Y7"`.
/// The empty string is the identity. Phase is +1.
pub fn parse_pauli(text: &str, n_qubits: usize) -> Result<PauliString> {
    parse_tokens(text.split_whitespace(), n_qubits)
}

pub(crate) fn parse_tokens<'a>(tokens: impl IntoIterator<Item = &'a str>, n_qubits: usize) -> Result<PauliString> {
    let mut p = PauliString::identity(n_qubits);
    let mut seen = vec![false; n_qubits];
    for token in tokens {
        let mut chars = token.chars();
        let c = chars.next().ok_or_else(|| Error::MalformedToken { token: token.into() })?;
        let letter = PauliLetter::from_char(c)
            .filter(|l| *l != PauliLetter::I)
            .ok_or_else(|| Error::UnknownLetter { letter: c, token: token.into() })?;
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::MalformedToken { token: token.into() });
        }
        let index: usize = digits.parse().map_err(|_| Error::MalformedToken { token: token.into() })?;
        if index >= n_qubits {
            return Err(Error::IndexOutOfRange { index, n_qubits });
        }
        if std::mem::replace(&mut seen[index], true) {
            return Err(Error::DuplicateIndex { index });
        }
        p.set_letter(index, letter);
    }
    Ok(p)
}

impl PauliString {
    /// Letter tokens only, e.g. `"X0 Z3"`; identity letters give `""`.
    pub fn tokens(&self) -> String {
        let mut out = String::new();
        for q in self.support() {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push(self.letter(q).as_char());
            out.push_str(&q.to_string());
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "i", "-", "-i"][self.phase as usize];
        let tokens = self.tokens();
        match (prefix.is_empty(), tokens.is_empty()) {
            (true, _) => f.write_str(&tokens),
            (false, true) => f.write_str(prefix),
            (false, false) => write!(f, "{prefix} {tokens}"),
        }
    }
}
