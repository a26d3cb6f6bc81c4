//! Dense statevector simulation. Qubit `q` is bit `q` of the amplitude index.

use num_complex::Complex64;

use crate::circuit::{AnsatzCircuit, Axis, Element, ReferenceState, RotationGate};
use crate::clifford::{CliffordGate, SINGLE_QUBIT_CLIFFORDS};
use crate::error::{check_width, Error, Result};
use crate::observable::{KahanSum, Observable};
use crate::pauli::PauliString;

/// Default statevector width cap (16 MiB of amplitudes).
pub const DEFAULT_MAX_QUBITS: usize = 20;

type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

fn hadamard() -> Mat2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// Unitary of single-qubit Clifford `index` (word applied left to right).
pub fn c1_matrix(index: u8) -> Mat2 {
    let s = [[ONE, ZERO], [ZERO, I]];
    let mut m = [[ONE, ZERO], [ZERO, ONE]];
    for c in SINGLE_QUBIT_CLIFFORDS[index as usize].chars() {
        let g = if c == 'H' { hadamard() } else { s };
        m = mat_mul(&g, &m);
    }
    m
}

fn check_cap(n_qubits: usize, cap: usize) -> Result<()> {
    if n_qubits > cap {
        Err(Error::CapExceeded { what: "statevector", n_qubits, cap })
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn basis(bits: &[bool], cap: usize) -> Result<Self> {
        check_cap(bits.len(), cap)?;
        let n = bits.len();
        let mut amps = vec![ZERO; 1 << n];
        let idx = bits.iter().enumerate().fold(0usize, |acc, (q, &b)| acc | ((b as usize) << q));
        amps[idx] = ONE;
        Ok(DenseState { n, amps })
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n_qubits {
            return Err(Error::InvalidArgument(format!("{} amplitudes for {n_qubits} qubits", amps.len())));
        }
        Ok(DenseState { n: n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &DenseState) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    fn apply_1q(&mut self, q: usize, m: &Mat2) {
        let bit = 1usize << q;
        for i0 in 0..self.amps.len() {
            if i0 & bit != 0 {
                continue;
            }
            let i1 = i0 | bit;
            let (a, b) = (self.amps[i0], self.amps[i1]);
            self.amps[i0] = m[0][0] * a + m[0][1] * b;
            self.amps[i1] = m[1][0] * a + m[1][1] * b;
        }
    }

    pub fn apply_clifford(&mut self, gate: &CliffordGate) -> Result<()> {
        gate.validate(self.n)?;
        match *gate {
            CliffordGate::H(q) => self.apply_1q(q, &hadamard()),
            CliffordGate::S(q) => self.apply_1q(q, &[[ONE, ZERO], [ZERO, I]]),
            CliffordGate::Sdg(q) => self.apply_1q(q, &[[ONE, ZERO], [ZERO, -I]]),
            CliffordGate::X(q) => self.apply_1q(q, &[[ZERO, ONE], [ONE, ZERO]]),
            CliffordGate::Y(q) => self.apply_1q(q, &[[ZERO, -I], [I, ZERO]]),
            CliffordGate::Z(q) => self.apply_1q(q, &[[ONE, ZERO], [ZERO, -ONE]]),
            CliffordGate::C1 { index, wire } => self.apply_1q(wire, &c1_matrix(index)),
            CliffordGate::Cnot { control, target } => {
                let (c, t) = (1usize << control, 1usize << target);
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            CliffordGate::Cz(a, b) => {
                let mask = (1usize << a) | (1usize << b);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            CliffordGate::Swap(a, b) => {
                let (ba, bb) = (1usize << a, 1usize << b);
                for i in 0..self.amps.len() {
                    if i & ba != 0 && i & bb == 0 {
                        self.amps.swap(i, (i & !ba) | bb);
                    }
                }
            }
        }
        Ok(())
    }

    /// `exp(iθP) = cos θ I + i sin θ P`.
    pub fn apply_rotation(&mut self, rot: &RotationGate, theta: f64) {
        if theta == 0.0 {
            return;
        }
        let (c, s) = (Complex64::new(theta.cos(), 0.0), Complex64::new(theta.sin(), 0.0));
        let m = match rot.axis {
            Axis::X => [[c, I * s], [I * s, c]],
            Axis::Y => [[c, s], [-s, c]],
            Axis::Z => [[c + I * s, ZERO], [ZERO, c - I * s]],
        };
        self.apply_1q(rot.wire, &m);
    }

    /// `⟨ψ|P|ψ⟩` including the phase of `P`.
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<Complex64> {
        check_width(self.n, p.n_qubits())?;
        let (x, z) = masks(p);
        let base = I.powu(((p.phase() as u32) + (x & z).count_ones()) % 4);
        let mut acc = ZERO;
        for (b, amp) in self.amps.iter().enumerate() {
            let sign = if (z & b).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            acc += self.amps[b ^ x].conj() * amp * sign;
        }
        Ok(acc * base)
    }

    /// `P|ψ⟩`.
    pub fn apply_pauli(&self, p: &PauliString) -> Result<DenseState> {
        check_width(self.n, p.n_qubits())?;
        let (x, z) = masks(p);
        let base = I.powu(((p.phase() as u32) + (x & z).count_ones()) % 4);
        let mut out = vec![ZERO; self.amps.len()];
        for (b, amp) in self.amps.iter().enumerate() {
            let sign = if (z & b).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[b ^ x] = base * amp * sign;
        }
        Ok(DenseState { n: self.n, amps: out })
    }

    /// `⟨ψ|O|ψ⟩`.
    pub fn observable_expectation(&self, obs: &Observable) -> Result<f64> {
        check_width(self.n, obs.n_qubits())?;
        let mut acc = KahanSum::default();
        for (c, p) in obs.terms() {
            acc.add(c * self.pauli_expectation(p)?.re);
        }
        Ok(acc.value())
    }
}

fn masks(p: &PauliString) -> (usize, usize) {
    let x = p.x_words().first().copied().unwrap_or(0) as usize;
    let z = p.z_words().first().copied().unwrap_or(0) as usize;
    (x, z)
}

/// `O|v⟩` without forming the matrix.
pub(crate) fn apply_observable(obs: &Observable, v: &[Complex64], out: &mut [Complex64]) {
    out.iter_mut().for_each(|o| *o = ZERO);
    for (c, p) in obs.terms() {
        let (x, z) = masks(p);
        let base = I.powu((x & z).count_ones() % 4) * *c;
        for (b, amp) in v.iter().enumerate() {
            let sign = if (z & b).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[b ^ x] += base * amp * sign;
        }
    }
}

fn check_theta(ansatz: &AnsatzCircuit, theta: &[f64]) -> Result<()> {
    if theta.len() != ansatz.n_params() {
        return Err(Error::InvalidArgument(format!(
            "theta has {} entries, ansatz has {} parameters",
            theta.len(),
            ansatz.n_params()
        )));
    }
    Ok(())
}

/// `U(θ)|ref⟩` under a width cap.
pub fn simulate_capped(
    ansatz: &AnsatzCircuit,
    theta: &[f64],
    reference: &ReferenceState,
    cap: usize,
) -> Result<DenseState> {
    check_theta(ansatz, theta)?;
    reference.check_width(ansatz.n_qubits())?;
    let mut s = DenseState::basis(reference.bits(), cap)?;
    run_elements(&mut s, ansatz.elements(), theta)?;
    Ok(s)
}

fn run_elements(s: &mut DenseState, elements: &[Element], theta: &[f64]) -> Result<()> {
    for e in elements {
        match e {
            Element::Clifford(g) => s.apply_clifford(g)?,
            Element::Rotation(r) => s.apply_rotation(r, theta[r.param]),
        }
    }
    Ok(())
}

/// `U(θ)|ref⟩` with the default cap.
pub fn simulate(ansatz: &AnsatzCircuit, theta: &[f64], reference: &ReferenceState) -> Result<DenseState> {
    simulate_capped(ansatz, theta, reference, DEFAULT_MAX_QUBITS)
}

/// `E(θ) = ⟨ψ(θ)|O|ψ(θ)⟩`.
pub fn energy(
    ansatz: &AnsatzCircuit,
    theta: &[f64],
    reference: &ReferenceState,
    observable: &Observable,
) -> Result<f64> {
    energy_capped(ansatz, theta, reference, observable, DEFAULT_MAX_QUBITS)
}

pub fn energy_capped(
    ansatz: &AnsatzCircuit,
    theta: &[f64],
    reference: &ReferenceState,
    observable: &Observable,
    cap: usize,
) -> Result<f64> {
    check_width(ansatz.n_qubits(), observable.n_qubits())?;
    simulate_capped(ansatz, theta, reference, cap)?.observable_expectation(observable)
}

/// Amplitude budget for cached prefix states in [`Evaluator`].
const PREFIX_BUDGET: usize = 1 << 26;

/// Repeated energy evaluations around a base point.
///
/// Caches the state just before every rotation at the base point, so an
/// evaluation that perturbs parameters `S` resumes from the earliest rotation
/// in `S` instead of from the input.
pub struct Evaluator<'a> {
    ansatz: &'a AnsatzCircuit,
    observable: &'a Observable,
    reference: &'a ReferenceState,
    base: Vec<f64>,
    positions: Vec<usize>,
    prefix: Option<Vec<DenseState>>,
    cap: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(
        ansatz: &'a AnsatzCircuit,
        observable: &'a Observable,
        reference: &'a ReferenceState,
        base: &[f64],
    ) -> Result<Self> {
        Self::with_cap(ansatz, observable, reference, base, DEFAULT_MAX_QUBITS)
    }

    pub fn with_cap(
        ansatz: &'a AnsatzCircuit,
        observable: &'a Observable,
        reference: &'a ReferenceState,
        base: &[f64],
        cap: usize,
    ) -> Result<Self> {
        check_width(ansatz.n_qubits(), observable.n_qubits())?;
        check_theta(ansatz, base)?;
        let mut ev = Evaluator {
            ansatz,
            observable,
            reference,
            base: base.to_vec(),
            positions: ansatz.param_positions(),
            prefix: None,
            cap,
        };
        // Validate the width cap up front.
        DenseState::basis(reference.bits(), cap)?;
        ev.rebase(base)?;
        Ok(ev)
    }

    /// Move the base point and rebuild the prefix cache.
    pub fn rebase(&mut self, base: &[f64]) -> Result<()> {
        check_theta(self.ansatz, base)?;
        self.base = base.to_vec();
        let k = self.ansatz.n_params();
        let dim = 1usize << self.ansatz.n_qubits();
        self.prefix = None;
        if k == 0 || k.saturating_mul(dim) > PREFIX_BUDGET {
            return Ok(());
        }
        let mut states = Vec::with_capacity(k);
        let mut s = DenseState::basis(self.reference.bits(), self.cap)?;
        for e in self.ansatz.elements() {
            match e {
                Element::Clifford(g) => s.apply_clifford(g)?,
                Element::Rotation(r) => {
                    states.push((r.param, s.clone()));
                    s.apply_rotation(r, self.base[r.param]);
                }
            }
        }
        let mut by_param: Vec<Option<DenseState>> = vec![None; k];
        for (p, st) in states {
            by_param[p] = Some(st);
        }
        self.prefix = Some(by_param.into_iter().map(|s| s.expect("every param has a rotation")).collect());
        Ok(())
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    /// Energy at the base point plus `delta` on the listed parameters.
    pub fn energy_shifted(&self, shifts: &[(usize, f64)]) -> Result<f64> {
        let mut theta = self.base.clone();
        for &(k, d) in shifts {
            theta[k] += d;
        }
        let start = shifts.iter().map(|&(k, _)| (self.positions[k], k)).min();
        let state = match (&self.prefix, start) {
            (Some(prefix), Some((pos, k))) => {
                let mut s = prefix[k].clone();
                run_elements(&mut s, &self.ansatz.elements()[pos..], &theta)?;
                s
            }
            _ => simulate_capped(self.ansatz, &theta, self.reference, self.cap)?,
        };
        state.observable_expectation(self.observable)
    }
}
