//! Real-weighted Pauli sums `O = Σ_i c_i P_i`.
//!
//! Text format, one item per line, `#` starts a comment:
//!
//! ```text
//! # transverse-field Ising, 2 sites
//! qubits 2
//! -1.0 Z0 Z1
//! -0.5 X0
//! -0.5 X1
//! 0.25
//! ```
//!
//! The first non-comment line declares the width. Every later line is a
//! decimal coefficient followed by Pauli tokens; no tokens means the
//! identity. Repeated Pauli strings are summed in place of their first
//! occurrence.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{check_width, Error, Result};
use crate::pauli::{self, PauliString};
use crate::stabilizer::StabilizerTableau;

/// Compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    #[inline]
    pub fn add(&mut self, v: f64) {
        let y = v - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParseOptions {
    /// Terms with `|c| <` this are dropped after merging.
    pub prune_below: f64,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { prune_below: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl Observable {
    /// Merge duplicate strings; every Pauli must be unphased.
    pub fn from_terms(n_qubits: usize, terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        let mut out = Observable { n_qubits, terms: Vec::new() };
        let mut index: HashMap<PauliString, usize> = HashMap::new();
        for (c, p) in terms {
            check_width(n_qubits, p.n_qubits())?;
            if p.phase() != 0 {
                return Err(Error::InvalidArgument(format!("observable term {p} is not unphased")));
            }
            if !c.is_finite() {
                return Err(Error::NonFinite("observable coefficient"));
            }
            match index.get(&p) {
                Some(&i) => out.terms[i].0 += c,
                None => {
                    index.insert(p.clone(), out.terms.len());
                    out.terms.push((c, p));
                }
            }
        }
        Ok(out)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// `N_o`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ|c_i|`, an upper bound on `|⟨O⟩|`.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }

    pub fn sum(&self, other: &Observable) -> Result<Observable> {
        check_width(self.n_qubits, other.n_qubits)?;
        Observable::from_terms(self.n_qubits, self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, ParseOptions::default())
    }

    pub fn parse_with(text: &str, options: ParseOptions) -> Result<Self> {
        let mut n_qubits = None;
        let mut terms = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let head = fields.next().expect("line is non-empty");
            let Some(n) = n_qubits else {
                let width = match (head, fields.next(), fields.next()) {
                    ("qubits", Some(n), None) => n.parse::<usize>().ok().filter(|&n| n > 0),
                    _ => None,
                };
                let n = width.ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: format!("expected `qubits N`, found {line:?}"),
                })?;
                n_qubits = Some(n);
                continue;
            };
            let c = parse_coefficient(head, line_no)?;
            let p =
                pauli::parse_tokens(fields, n).map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
            terms.push((c, p));
        }
        let n = n_qubits.ok_or(Error::Parse { line: 1, message: "missing `qubits N` header".into() })?;
        let mut obs = Observable::from_terms(n, terms)?;
        obs.terms.retain(|(c, _)| c.abs() >= options.prune_below);
        Ok(obs)
    }

    /// Inverse of [`Observable::parse`] for comment-free documents.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.n_qubits);
        for (c, p) in &self.terms {
            let tokens = p.tokens();
            if tokens.is_empty() {
                writeln!(out, "{c:?}").unwrap();
            } else {
                writeln!(out, "{c:?} {tokens}").unwrap();
            }
        }
        out
    }

    /// `⟨ψ|O|ψ⟩` on a stabilizer state.
    pub fn expectation_on(&self, state: &StabilizerTableau) -> Result<f64> {
        check_width(self.n_qubits, state.n_qubits())?;
        let mut acc = KahanSum::default();
        for (c, p) in &self.terms {
            acc.add(c * state.expectation_unchecked(p).re());
        }
        Ok(acc.value())
    }
}

fn parse_coefficient(text: &str, line: usize) -> Result<f64> {
    match text.parse::<f64>() {
        Ok(c) if c.is_finite() => Ok(c),
        Ok(_) => Err(Error::Parse { line, message: format!("coefficient {text:?} is not finite") }),
        Err(_) if text.contains(['j', 'i', 'J', '(']) && text.chars().any(|c| c.is_ascii_digit()) => {
            Err(Error::NonRealCoefficient { line, text: text.into() })
        }
        Err(_) => Err(Error::Parse { line, message: format!("bad coefficient {text:?}") }),
    }
}

/// `Σ_i c_i ⟨ψ|P_i|ψ⟩` at the Clifford point.
pub fn expectation_at_clifford_point(obs: &Observable, state: &StabilizerTableau) -> Result<f64> {
    obs.expectation_on(state)
}
