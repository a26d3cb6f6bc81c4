//! Second-order expansion of `⟨O(θ)⟩` around the Clifford point θ = 0.
//!
//! With `U(θ)` a product of Clifford gates and rotations `exp(iθ_k P_k)`,
//! `∂_k U(0) = i P'_k U(0)` where `P'_k` is `P_k` conjugated through every
//! element after rotation `k`. Writing `|ψ⟩ = U(0)|ref⟩`:
//!
//! ```text
//! g_k  = -2 Im ⟨ψ| O P'_k |ψ⟩
//! A_km =  2 Re ⟨ψ| P'_k O P'_m |ψ⟩ - 2 Re ⟨ψ| O P'_m P'_k |ψ⟩   (k applied before m)
//! A_kk =  2 ⟨ψ| P'_k O P'_k |ψ⟩ - 2 ⟨ψ|O|ψ⟩
//! ```
//!
//! Every expectation is a signed Pauli expectation on the stabilizer state
//! `|ψ⟩`, evaluated exactly. The quadratic model
//! `e0 + gᵀθ + ½ θᵀAθ` is then solved with a pseudo-inverse,
//! `θ* = -A⁺g`.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use dashmap::DashMap;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use rustc_hash::FxBuildHasher;
use serde::{Deserialize, Serialize};

use crate::circuit::{AnsatzCircuit, Element, ReferenceState};
use crate::error::{check_width, Error, Result, Stage};
use crate::linalg::hermitian_eigen;
use crate::observable::{KahanSum, Observable};
use crate::pauli::{PauliString, Words};
use crate::stabilizer::{CliffordMap, Expectation, StabilizerTableau};

pub const DEFAULT_DROPOUT_THRESHOLD: f64 = 1e-6;
pub const DEFAULT_RTOL: f64 = 1e-10;

pub const WARN_ALL_DROPPED: &str = "all parameters dropped; theta_star is empty";

/// `P'_k` for every parameter, indexed by param id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugatedGenerators {
    generators: Vec<PauliString>,
    positions: Vec<usize>,
}

impl ConjugatedGenerators {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn get(&self, k: usize) -> &PauliString {
        &self.generators[k]
    }

    pub fn as_slice(&self) -> &[PauliString] {
        &self.generators
    }

    /// Element position of parameter `k`'s rotation; orders the Hessian
    /// cross terms.
    pub fn position(&self, k: usize) -> usize {
        self.positions[k]
    }
}

/// One right-to-left sweep carrying the suffix Clifford as a [`CliffordMap`].
pub fn conjugate_generators(ansatz: &AnsatzCircuit) -> Result<ConjugatedGenerators> {
    let n = ansatz.n_qubits();
    let k = ansatz.n_params();
    let mut suffix = CliffordMap::identity(n);
    let mut generators = vec![PauliString::identity(n); k];
    let mut positions = vec![0; k];
    for (pos, e) in ansatz.elements().iter().enumerate().rev() {
        match e {
            Element::Clifford(g) => suffix.prepend(g)?,
            Element::Rotation(r) => {
                generators[r.param] = suffix.image_of(r.wire, r.axis.letter());
                positions[r.param] = pos;
            }
        }
    }
    Ok(ConjugatedGenerators { generators, positions })
}

/// Tableau of `U(0)|ref⟩`.
pub fn clifford_point_state(ansatz: &AnsatzCircuit, reference: &ReferenceState) -> Result<StabilizerTableau> {
    reference.check_width(ansatz.n_qubits())?;
    let mut t = StabilizerTableau::basis_state(reference.bits());
    t.apply_all(ansatz.clifford_gates())?;
    Ok(t)
}

/// Memoized signed Pauli expectations on a frozen stabilizer state.
///
/// Keyed on the (x, z) words; the phase is applied after lookup. Strings
/// that anticommute with a stabilizer are answered before the lookup, so the
/// map only holds members of the stabilizer group.
struct ExpectationCache<'a> {
    state: &'a StabilizerTableau,
    memo: DashMap<(Words, Words), Expectation, FxBuildHasher>,
    queries: AtomicU64,
}

impl<'a> ExpectationCache<'a> {
    fn new(state: &'a StabilizerTableau) -> Self {
        ExpectationCache { state, memo: DashMap::with_hasher(FxBuildHasher), queries: AtomicU64::new(0) }
    }

    fn get(&self, q: &PauliString) -> Expectation {
        self.queries.fetch_add(1, Ordering::Relaxed);
        if self.state.anticommutes_with_stabilizer(q) {
            return Expectation::Zero;
        }
        let key = (Words::from_slice(q.x_words()), Words::from_slice(q.z_words()));
        if let Some(e) = self.memo.get(&key) {
            return e.times_phase(q.phase());
        }
        let e = self.state.expectation_in_group(&q.unphased());
        self.memo.insert(key, e);
        e.times_phase(q.phase())
    }

    fn observable_mean(&self, obs: &Observable) -> f64 {
        let mut acc = KahanSum::default();
        for (c, p) in obs.terms() {
            acc.add(c * self.get(p).re());
        }
        acc.value()
    }
}

fn check_inputs(obs: &Observable, state: &StabilizerTableau, gens: &ConjugatedGenerators) -> Result<()> {
    check_width(state.n_qubits(), obs.n_qubits())?;
    if let Some(p) = gens.generators.first() {
        check_width(state.n_qubits(), p.n_qubits())?;
    }
    Ok(())
}

fn gradient_with(obs: &Observable, cache: &ExpectationCache, gens: &ConjugatedGenerators) -> Vec<f64> {
    gens.generators
        .par_iter()
        .map(|pk| {
            let mut acc = KahanSum::default();
            for (c, p) in obs.terms() {
                acc.add(c * cache.get(&p.mul_unchecked(pk)).im());
            }
            -2.0 * acc.value()
        })
        .collect()
}

/// `g_k = -2 Im⟨ψ|O P'_k|ψ⟩`.
pub fn compute_gradient(obs: &Observable, state0: &StabilizerTableau, gens: &ConjugatedGenerators) -> Result<Vec<f64>> {
    check_inputs(obs, state0, gens)?;
    Ok(gradient_with(obs, &ExpectationCache::new(state0), gens))
}

/// Gradient at θ = 0 straight from the circuit.
pub fn gradient(ansatz: &AnsatzCircuit, obs: &Observable, reference: &ReferenceState) -> Result<Vec<f64>> {
    check_width(ansatz.n_qubits(), obs.n_qubits())?;
    let state = clifford_point_state(ansatz, reference)?;
    let gens = conjugate_generators(ansatz)?;
    compute_gradient(obs, &state, &gens)
}

/// Indices with `mask[k] == true`, ascending.
pub fn kept_indices(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter_map(|(k, &keep)| keep.then_some(k)).collect()
}

fn hessian_with(
    obs: &Observable,
    cache: &ExpectationCache,
    gens: &ConjugatedGenerators,
    kept: &[usize],
) -> DMatrix<f64> {
    let e0 = cache.observable_mean(obs);
    let rows: Vec<Vec<f64>> = (0..kept.len())
        .into_par_iter()
        .map(|a| {
            let k = kept[a];
            let pk = &gens.generators[k];
            (a..kept.len())
                .map(|b| {
                    let m = kept[b];
                    if m == k {
                        let mut acc = KahanSum::default();
                        for (c, p) in obs.terms() {
                            acc.add(c * cache.get(&pk.mul_unchecked(p).mul_unchecked(pk)).re());
                        }
                        return 2.0 * acc.value() - 2.0 * e0;
                    }
                    let (early, late) = if gens.positions[k] < gens.positions[m] {
                        (pk, &gens.generators[m])
                    } else {
                        (&gens.generators[m], pk)
                    };
                    let late_early = late.mul_unchecked(early);
                    let mut acc = KahanSum::default();
                    for (c, p) in obs.terms() {
                        let sandwich = early.mul_unchecked(p).mul_unchecked(late);
                        let ordered = p.mul_unchecked(&late_early);
                        acc.add(c * (cache.get(&sandwich).re() - cache.get(&ordered).re()));
                    }
                    2.0 * acc.value()
                })
                .collect()
        })
        .collect();
    let n = kept.len();
    let mut a = DMatrix::zeros(n, n);
    for (i, row) in rows.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            a[(i, i + off)] = v;
            a[(i + off, i)] = v;
        }
    }
    a
}

/// Hessian restricted to the kept parameters, rows and columns in ascending
/// param order.
pub fn compute_hessian(
    obs: &Observable,
    state0: &StabilizerTableau,
    gens: &ConjugatedGenerators,
    mask: &[bool],
) -> Result<DMatrix<f64>> {
    check_inputs(obs, state0, gens)?;
    if mask.len() != gens.len() {
        return Err(Error::InvalidArgument(format!(
            "dropout mask has {} entries for {} parameters",
            mask.len(),
            gens.len()
        )));
    }
    Ok(hessian_with(obs, &ExpectationCache::new(state0), gens, &kept_indices(mask)))
}

/// `mask_k = |g_k| >= threshold`.
pub fn apply_dropout(gradient: &[f64], threshold: f64) -> Vec<bool> {
    gradient.iter().map(|g| g.abs() >= threshold).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticSolution {
    /// Full length `K`, zero at dropped positions.
    pub theta_star: Vec<f64>,
    pub optimum: f64,
    pub rank: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Eigenvalues with `|λ| <= rtol · max|λ|` are treated as zero.
    pub rtol: f64,
    /// Keep only positive-curvature eigendirections, where the model has a
    /// minimum; negative-curvature directions are dropped from θ*.
    pub stable_subspace: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { rtol: DEFAULT_RTOL, stable_subspace: false }
    }
}

/// `e0 + gᵀθ + ½ θᵀAθ` over the kept parameters; `hessian` is the kept block.
pub fn quadratic_model(e0: f64, gradient: &[f64], hessian: &DMatrix<f64>, kept: &[usize], theta: &[f64]) -> f64 {
    let t = DVector::from_iterator(kept.len(), kept.iter().map(|&k| theta[k]));
    let g = DVector::from_iterator(kept.len(), kept.iter().map(|&k| gradient[k]));
    e0 + g.dot(&t) + 0.5 * t.dot(&(hessian * &t))
}

/// `θ* = -A⁺g` on the kept block via symmetric eigendecomposition.
pub fn solve_quadratic(
    e0: f64,
    gradient: &[f64],
    hessian: &DMatrix<f64>,
    mask: &[bool],
    options: SolveOptions,
) -> Result<QuadraticSolution> {
    let kept = kept_indices(mask);
    if mask.len() != gradient.len() || hessian.nrows() != kept.len() || !hessian.is_square() {
        return Err(Error::InvalidArgument(format!(
            "hessian is {}x{} for {} kept of {} parameters",
            hessian.nrows(),
            hessian.ncols(),
            kept.len(),
            gradient.len()
        )));
    }
    if !e0.is_finite() || gradient.iter().any(|g| !g.is_finite()) || hessian.iter().any(|a| !a.is_finite()) {
        return Err(Error::NonFinite("quadratic model"));
    }
    let mut theta_star = vec![0.0; gradient.len()];
    if kept.is_empty() {
        return Ok(QuadraticSolution { theta_star, optimum: e0, rank: 0 });
    }
    let g = DVector::from_iterator(kept.len(), kept.iter().map(|&k| gradient[k]));
    let eig = hermitian_eigen(hessian.clone())?;
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let cutoff = options.rtol * scale;
    let mut theta = DVector::zeros(kept.len());
    let mut rank = 0;
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() <= cutoff || (options.stable_subspace && lambda <= 0.0) {
            continue;
        }
        rank += 1;
        let v = eig.eigenvectors.column(j);
        theta -= v * (v.dot(&g) / lambda);
    }
    for (i, &k) in kept.iter().enumerate() {
        theta_star[k] = theta[i];
    }
    let optimum = quadratic_model(e0, gradient, hessian, &kept, &theta_star);
    Ok(QuadraticSolution { theta_star, optimum, rank })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionOptions {
    pub dropout_threshold: f64,
    pub solve: SolveOptions,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions { dropout_threshold: DEFAULT_DROPOUT_THRESHOLD, solve: SolveOptions::default(), jobs: None }
    }
}

/// Kept-block Hessian, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HessianBlock {
    pub kept: Vec<usize>,
    pub values: Vec<f64>,
}

impl HessianBlock {
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.kept.len();
        DMatrix::from_row_slice(n, n, &self.values)
    }

    /// Entry for params `(k, m)`, `None` if either was dropped.
    pub fn get(&self, k: usize, m: usize) -> Option<f64> {
        let i = self.kept.binary_search(&k).ok()?;
        let j = self.kept.binary_search(&m).ok()?;
        Some(self.values[i * self.kept.len() + j])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DropoutSummary {
    pub threshold: f64,
    pub kept: usize,
    pub dropped: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub generators_s: f64,
    pub gradient_s: f64,
    pub hessian_s: f64,
    pub solve_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counters {
    pub n_qubits: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "K_kept")]
    pub k_kept: usize,
    #[serde(rename = "N_o")]
    pub n_terms: usize,
    /// Signed Pauli expectations requested (cache hits included).
    pub pauli_expectations_evaluated: u64,
    /// Distinct stabilizer-group strings (nonzero expectations) evaluated
    /// on the tableau.
    pub distinct_paulis: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionResult {
    pub e0: f64,
    pub gradient: Vec<f64>,
    pub hessian: HessianBlock,
    pub dropout: DropoutSummary,
    pub dropout_mask: Vec<bool>,
    pub theta_star: Vec<f64>,
    pub perturbative_optimum: f64,
    pub rank: usize,
    pub rtol: f64,
    pub stable_subspace: bool,
    pub timings: Timings,
    pub counters: Counters,
    pub warnings: Vec<String>,
}

impl ExpansionResult {
    /// Quadratic model at arbitrary θ (dropped entries ignored).
    pub fn model(&self, theta: &[f64]) -> f64 {
        quadratic_model(self.e0, &self.gradient, &self.hessian.to_matrix(), &self.hessian.kept, theta)
    }

    /// θ* at full length `K`; an empty θ* (everything dropped) means zero.
    pub fn theta_full(&self) -> Vec<f64> {
        if self.theta_star.is_empty() {
            vec![0.0; self.gradient.len()]
        } else {
            self.theta_star.clone()
        }
    }

    pub fn theta_norm(&self) -> f64 {
        self.theta_star.iter().fold(0.0, |s, t| s + t * t).sqrt()
    }
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Full pipeline: state, generators, gradient, dropout, Hessian, solve.
pub fn expand(
    ansatz: &AnsatzCircuit,
    observable: &Observable,
    reference: &ReferenceState,
    options: &ExpansionOptions,
) -> Result<ExpansionResult> {
    check_width(ansatz.n_qubits(), observable.n_qubits()).map_err(|e| e.at(Stage::State))?;
    if options.dropout_threshold.is_nan() || options.dropout_threshold < 0.0 {
        return Err(Error::InvalidArgument("dropout threshold must be >= 0".into()));
    }
    with_pool(options.jobs, || expand_inner(ansatz, observable, reference, options))?
}

fn expand_inner(
    ansatz: &AnsatzCircuit,
    observable: &Observable,
    reference: &ReferenceState,
    options: &ExpansionOptions,
) -> Result<ExpansionResult> {
    let mut timings = Timings::default();
    let clock = Instant::now();
    let state = clifford_point_state(ansatz, reference).map_err(|e| e.at(Stage::State))?;
    let gens = conjugate_generators(ansatz).map_err(|e| e.at(Stage::Generators))?;
    timings.generators_s = clock.elapsed().as_secs_f64();

    let cache = ExpectationCache::new(&state);
    let clock = Instant::now();
    let e0 = cache.observable_mean(observable);
    let gradient = gradient_with(observable, &cache, &gens);
    timings.gradient_s = clock.elapsed().as_secs_f64();

    let mask = apply_dropout(&gradient, options.dropout_threshold);
    let kept = kept_indices(&mask);
    let clock = Instant::now();
    let hessian = hessian_with(observable, &cache, &gens, &kept);
    timings.hessian_s = clock.elapsed().as_secs_f64();

    let clock = Instant::now();
    let solution = solve_quadratic(e0, &gradient, &hessian, &mask, options.solve).map_err(|e| e.at(Stage::Solve))?;
    timings.solve_s = clock.elapsed().as_secs_f64();

    let mut warnings = Vec::new();
    if kept.is_empty() && !gradient.is_empty() {
        warnings.push(WARN_ALL_DROPPED.to_string());
    }
    let n_kept = kept.len();
    let values = hessian.transpose().as_slice().to_vec();
    Ok(ExpansionResult {
        e0,
        dropout: DropoutSummary {
            threshold: options.dropout_threshold,
            kept: n_kept,
            dropped: gradient.len() - n_kept,
        },
        counters: Counters {
            n_qubits: ansatz.n_qubits(),
            k: gradient.len(),
            k_kept: n_kept,
            n_terms: observable.len(),
            pauli_expectations_evaluated: cache.queries.load(Ordering::Relaxed),
            distinct_paulis: cache.memo.len() as u64,
        },
        gradient,
        hessian: HessianBlock { kept, values },
        dropout_mask: mask,
        // Empty rather than all-zero when nothing survives dropout.
        theta_star: if n_kept == 0 { Vec::new() } else { solution.theta_star },
        perturbative_optimum: solution.optimum,
        rank: solution.rank,
        rtol: options.solve.rtol,
        stable_subspace: options.solve.stable_subspace,
        timings,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Axis, Metadata, RotationGate};
    use crate::clifford::CliffordGate;
    use crate::pauli::parse_pauli;
    use approx::assert_abs_diff_eq;

    fn ry_then(extra: &[CliffordGate]) -> AnsatzCircuit {
        let mut elements = vec![Element::Rotation(RotationGate { axis: Axis::Y, wire: 0, param: 0 })];
        elements.extend(extra.iter().copied().map(Element::Clifford));
        AnsatzCircuit::new(1, elements, Metadata::default()).unwrap()
    }

    fn obs(text: &str) -> Observable {
        Observable::parse(text).unwrap()
    }

    #[test]
    fn empty_suffix_generator() {
        let g = conjugate_generators(&ry_then(&[])).unwrap();
        assert_eq!(g.get(0), &parse_pauli("Y0", 1).unwrap());
    }

    #[test]
    fn hadamard_suffix_negates_y() {
        let g = conjugate_generators(&ry_then(&[CliffordGate::H(0)])).unwrap();
        assert_eq!(g.get(0), &parse_pauli("Y0", 1).unwrap().with_phase(2));
    }

    #[test]
    fn single_rotation_derivatives() {
        let a = ry_then(&[]);
        let r = ReferenceState::zeros(1);
        assert_eq!(gradient(&a, &obs("qubits 1\n1 Z0"), &r).unwrap(), vec![0.0]);
        assert_eq!(gradient(&a, &obs("qubits 1\n1 X0"), &r).unwrap(), vec![-2.0]);
        let state = clifford_point_state(&a, &r).unwrap();
        let gens = conjugate_generators(&a).unwrap();
        let hz = compute_hessian(&obs("qubits 1\n1 Z0"), &state, &gens, &[true]).unwrap();
        assert_eq!(hz[(0, 0)], -4.0);
        let hx = compute_hessian(&obs("qubits 1\n1 X0"), &state, &gens, &[true]).unwrap();
        assert_eq!(hx[(0, 0)], 0.0);
    }

    #[test]
    fn toy_golden_case() {
        let res = expand(
            &ry_then(&[]),
            &obs("qubits 1\n1.0 X0\n2.0 Z0"),
            &ReferenceState::zeros(1),
            &ExpansionOptions::default(),
        )
        .unwrap();
        assert_eq!(res.e0, 2.0);
        assert_eq!(res.gradient, vec![-2.0]);
        assert_eq!(res.hessian.values, vec![-8.0]);
        assert_abs_diff_eq!(res.theta_star[0], -0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(res.perturbative_optimum, 2.25, epsilon = 1e-15);
        assert_eq!(res.rank, 1);
    }

    #[test]
    fn dropout_examples() {
        assert_eq!(apply_dropout(&[0.0, 3e-7, 0.2], 0.0), vec![true, true, true]);
        assert_eq!(apply_dropout(&[0.0, 3e-7, 0.2], 1e-6), vec![false, false, true]);
    }

    #[test]
    fn zero_gradient_gives_zero_step() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 2.0]);
        let s = solve_quadratic(1.5, &[0.0, 0.0], &a, &[true, true], SolveOptions::default()).unwrap();
        assert_eq!(s.theta_star, vec![0.0, 0.0]);
        assert_eq!(s.optimum, 1.5);
    }

    #[test]
    fn singular_direction_stays_zero() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        let s = solve_quadratic(0.0, &[1.0, 0.0], &a, &[true, true], SolveOptions::default()).unwrap();
        assert_abs_diff_eq!(s.theta_star[0], -0.5, epsilon = 1e-15);
        assert_eq!(s.theta_star[1], 0.0);
        assert_eq!(s.rank, 1);
        assert_abs_diff_eq!(s.optimum, -0.25, epsilon = 1e-15);
    }

    #[test]
    fn stable_subspace_skips_negative_curvature() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, -4.0]);
        let plain = solve_quadratic(0.0, &[1.0, 1.0], &a, &[true, true], SolveOptions::default()).unwrap();
        assert_abs_diff_eq!(plain.theta_star[1], 0.25, epsilon = 1e-15);
        let stable = solve_quadratic(
            0.0,
            &[1.0, 1.0],
            &a,
            &[true, true],
            SolveOptions { stable_subspace: true, ..Default::default() },
        )
        .unwrap();
        assert_eq!(stable.theta_star[1], 0.0);
        assert_abs_diff_eq!(stable.theta_star[0], -0.5, epsilon = 1e-15);
        assert!(stable.optimum < 0.0);
    }

    #[test]
    fn solve_rejects_non_finite() {
        let a = DMatrix::from_row_slice(1, 1, &[f64::NAN]);
        assert!(matches!(solve_quadratic(0.0, &[1.0], &a, &[true], SolveOptions::default()), Err(Error::NonFinite(_))));
    }

    #[test]
    fn everything_dropped() {
        let res = expand(
            &ry_then(&[]),
            &obs("qubits 1\n1.0 X0\n2.0 Z0"),
            &ReferenceState::zeros(1),
            &ExpansionOptions { dropout_threshold: 1e9, ..Default::default() },
        )
        .unwrap();
        assert_eq!(res.counters.k_kept, 0);
        assert!(res.theta_star.is_empty());
        assert_eq!(res.theta_full(), vec![0.0]);
        assert_eq!(res.perturbative_optimum, res.e0);
        assert_eq!(res.warnings, vec![WARN_ALL_DROPPED.to_string()]);
    }

    #[test]
    fn width_mismatch_is_staged() {
        let err =
            expand(&ry_then(&[]), &obs("qubits 2\n1.0 X0"), &ReferenceState::zeros(1), &ExpansionOptions::default())
                .unwrap_err();
        assert_eq!(err.stage(), Some(Stage::State));
    }
}
