use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use qcx_core::circuit::generate_hwe_ansatz;
use qcx_core::fixtures::seeded_observable;
use qcx_core::verifier::{energy_capped, exact_ground_energy, optimize_energy, BfgsOptions, OptimizationTrace};
use qcx_core::{
    expand, select_ansatz, AnsatzCircuit, Error, ExpansionOptions, ExpansionResult, Observable, ReferenceState,
    SolveOptions,
};

use crate::args::*;
use crate::document::{check_output, emit, Document, Input, InputFile};
use crate::error::{CliError, CliResult};

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::GenAnsatz(a) => gen_ansatz(&a).map(drop),
        Command::SelectAnsatz(a) => select(&a).map(drop),
        Command::Expand(a) => expand_cmd(&a).map(drop),
        Command::Verify(a) => verify(&a).map(drop),
        Command::Optimize(a) => optimize(&a).map(drop),
        Command::Bench(a) => bench(&a).map(drop),
    }
}

fn check_outputs<'a>(paths: impl IntoIterator<Item = &'a Option<PathBuf>>) -> CliResult<()> {
    paths.into_iter().flatten().try_for_each(|p| check_output(p))
}

fn load_observable(path: &Path) -> CliResult<(Input, Observable)> {
    let input = Input::read(path)?;
    let obs = Observable::parse(&input.text).map_err(|e| CliError::in_file(path, e))?;
    Ok((input, obs))
}

fn load_ansatz(path: &Path) -> CliResult<(Input, AnsatzCircuit)> {
    let input = Input::read(path)?;
    let ansatz = AnsatzCircuit::from_json(&input.text).map_err(|e| CliError::in_file(path, e))?;
    Ok((input, ansatz))
}

fn parse_reference(text: Option<&str>, n_qubits: usize) -> CliResult<ReferenceState> {
    let r = match text {
        None => ReferenceState::zeros(n_qubits),
        Some(t) => ReferenceState::from_str(t).map_err(|e| CliError::input(format!("--reference: {e}")))?,
    };
    r.check_width(n_qubits).map_err(|e| CliError::input(format!("--reference: {e}")))?;
    Ok(r)
}

fn check_width(what: &str, found: usize, expected: usize) -> CliResult<()> {
    if found == expected {
        Ok(())
    } else {
        Err(CliError::input(format!("{what} acts on {found} qubits, expected {expected}")))
    }
}

fn check_cap(n_qubits: usize, cap: usize) -> CliResult<()> {
    if n_qubits > cap {
        return Err(Error::CapExceeded { what: "statevector", n_qubits, cap }.into());
    }
    Ok(())
}

fn inputs<const N: usize>(named: [(&str, &Input); N]) -> BTreeMap<String, InputFile> {
    named.into_iter().map(|(k, v)| (k.to_string(), v.record())).collect()
}

/// Reject inputs whose content differs from the one recorded in `doc`.
fn check_recorded(doc: &Document, doc_path: &Path, name: &str, input: &Input) -> CliResult<()> {
    let Some(rec) = doc.inputs.get(name) else {
        return Err(CliError::input(format!("{}: no {name} input recorded", doc_path.display())));
    };
    if rec.sha256 != input.record().sha256 {
        return Err(CliError::input(format!(
            "{} does not match the {name} recorded in {} (sha256 {})",
            input.path.display(),
            doc_path.display(),
            rec.sha256
        )));
    }
    Ok(())
}

fn recorded_path(doc: &Document, doc_path: &Path, name: &str) -> CliResult<PathBuf> {
    doc.inputs
        .get(name)
        .map(|r| PathBuf::from(&r.path))
        .ok_or_else(|| CliError::input(format!("{}: no {name} input recorded", doc_path.display())))
}

pub fn gen_ansatz(args: &GenAnsatzArgs) -> CliResult<AnsatzCircuit> {
    check_outputs([&args.out])?;
    let s = &args.shape;
    let ansatz = generate_hwe_ansatz(s.qubits, s.depth, s.seed, s.variant.into())?;
    emit(args.out.as_deref(), &ansatz.to_json())?;
    eprintln!("K = {}", ansatz.n_params());
    Ok(ansatz)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub index: usize,
    pub seed: u64,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub chosen: Candidate,
    #[serde(rename = "K")]
    pub n_params: usize,
    pub candidates: Vec<Candidate>,
}

pub fn select(args: &SelectAnsatzArgs) -> CliResult<(AnsatzCircuit, Document)> {
    check_outputs([&Some(args.out.clone()), &args.report])?;
    let (ham, obs) = load_observable(&args.hamiltonian)?;
    let s = &args.shape;
    check_width("hamiltonian", obs.n_qubits(), s.qubits)?;
    let reference = parse_reference(args.reference.as_deref(), s.qubits)?;
    let sel = select_ansatz(args.count, s.qubits, s.depth, s.variant.into(), &obs, &reference, s.seed)?;
    let candidates: Vec<Candidate> = sel
        .scores
        .iter()
        .zip(&sel.seeds)
        .enumerate()
        .map(|(index, (&score, &seed))| Candidate { index, seed, score })
        .collect();
    let report = SelectionReport { chosen: candidates[sel.index].clone(), n_params: sel.ansatz.n_params(), candidates };
    let doc = Document::new("selection", args, inputs([("hamiltonian", &ham)]), &report);
    emit(Some(&args.out), &sel.ansatz.to_json())?;
    emit(args.report.as_deref(), &doc.to_text())?;
    eprintln!(
        "chose candidate {} (seed {}, score {:.6e}), K = {}",
        report.chosen.index, report.chosen.seed, report.chosen.score, report.n_params
    );
    Ok((sel.ansatz, doc))
}

pub fn expand_cmd(args: &ExpandArgs) -> CliResult<Document> {
    check_outputs([&args.out])?;
    let (ham, obs) = load_observable(&args.hamiltonian)?;
    let (ans, ansatz) = load_ansatz(&args.ansatz)?;
    check_width("hamiltonian", obs.n_qubits(), ansatz.n_qubits())?;
    let reference = parse_reference(args.reference.as_deref(), ansatz.n_qubits())?;
    let options = ExpansionOptions {
        dropout_threshold: args.dropout_threshold,
        solve: SolveOptions { rtol: args.rtol, stable_subspace: args.stable_subspace },
        jobs: args.jobs,
    };
    let result = expand(&ansatz, &obs, &reference, &options)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    eprintln!(
        "e0 = {:.12}, model optimum = {:.12}, kept {}/{} parameters",
        result.e0, result.perturbative_optimum, result.counters.k_kept, result.counters.k
    );
    let doc = Document::new("expansion", args, inputs([("hamiltonian", &ham), ("ansatz", &ans)]), &result);
    emit(args.out.as_deref(), &doc.to_text())?;
    Ok(doc)
}

/// Everything needed to re-evaluate an expansion result.
struct Replay {
    doc: Document,
    expansion: ExpansionResult,
    ham: Input,
    obs: Observable,
    ans: Input,
    ansatz: AnsatzCircuit,
}

fn replay(result: &Path, hamiltonian: Option<&Path>, ansatz: Option<&Path>) -> CliResult<Replay> {
    let doc = Document::read(result, "expansion")?;
    let expansion: ExpansionResult = doc.result_as(result)?;
    let ham_path = hamiltonian.map_or_else(|| recorded_path(&doc, result, "hamiltonian"), |p| Ok(p.to_path_buf()))?;
    let ans_path = ansatz.map_or_else(|| recorded_path(&doc, result, "ansatz"), |p| Ok(p.to_path_buf()))?;
    let (ham, obs) = load_observable(&ham_path)?;
    let (ans, ansatz) = load_ansatz(&ans_path)?;
    check_recorded(&doc, result, "hamiltonian", &ham)?;
    check_recorded(&doc, result, "ansatz", &ans)?;
    check_width("hamiltonian", obs.n_qubits(), ansatz.n_qubits())?;
    if expansion.gradient.len() != ansatz.n_params() || expansion.theta_full().len() != ansatz.n_params() {
        return Err(CliError::input(format!(
            "{}: result has {} parameters, ansatz has {}",
            result.display(),
            expansion.gradient.len(),
            ansatz.n_params()
        )));
    }
    Ok(Replay { doc, expansion, ham, obs, ans, ansatz })
}

fn recorded_reference(doc: &Document) -> Option<String> {
    doc.config.get("reference").and_then(|v| v.as_str()).map(str::to_string)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n_qubits: usize,
    #[serde(rename = "K")]
    pub n_params: usize,
    pub e0: f64,
    /// Quadratic-model value at θ*.
    pub perturbative_optimum: f64,
    /// Dense energy at θ*.
    pub energy_at_theta_star: f64,
    /// `|E(θ*) − model(θ*)|`.
    pub model_gap: f64,
    /// `E(θ*) − e0`.
    pub energy_change: f64,
    pub theta_norm: f64,
    pub exact_ground_energy: Option<f64>,
}

pub fn verify(args: &VerifyArgs) -> CliResult<Document> {
    check_outputs([&args.out])?;
    let r = replay(&args.result, args.hamiltonian.as_deref(), args.ansatz.as_deref())?;
    let n = r.ansatz.n_qubits();
    let reference_text = args.reference.clone().or_else(|| recorded_reference(&r.doc));
    let reference = parse_reference(reference_text.as_deref(), n)?;
    check_cap(n, args.max_qubits)?;
    let theta = r.expansion.theta_full();
    let e = energy_capped(&r.ansatz, &theta, &reference, &r.obs, args.max_qubits)?;
    let exact = if args.exact { Some(exact_ground_energy(&r.obs)?) } else { None };
    let report = VerifyReport {
        n_qubits: n,
        n_params: r.ansatz.n_params(),
        e0: r.expansion.e0,
        perturbative_optimum: r.expansion.perturbative_optimum,
        energy_at_theta_star: e,
        model_gap: (e - r.expansion.perturbative_optimum).abs(),
        energy_change: e - r.expansion.e0,
        theta_norm: r.expansion.theta_norm(),
        exact_ground_energy: exact,
    };
    eprintln!(
        "E(theta*) = {:.12}, model = {:.12}, gap = {:.3e}, |theta*| = {:.6}",
        report.energy_at_theta_star, report.perturbative_optimum, report.model_gap, report.theta_norm
    );
    if let Some(x) = exact {
        eprintln!("exact ground energy = {x:.12}");
    }
    let mut named = inputs([("hamiltonian", &r.ham), ("ansatz", &r.ans)]);
    named.insert("result".into(), Input::read(&args.result)?.record());
    let doc = Document::new("verification", args, named, &report);
    emit(args.out.as_deref(), &doc.to_text())?;
    Ok(doc)
}

pub fn optimize(args: &OptimizeArgs) -> CliResult<Document> {
    check_outputs([&args.trace_out])?;
    let (ham, obs) = load_observable(&args.hamiltonian)?;
    let (ans, ansatz) = load_ansatz(&args.ansatz)?;
    check_width("hamiltonian", obs.n_qubits(), ansatz.n_qubits())?;
    let reference = parse_reference(args.reference.as_deref(), ansatz.n_qubits())?;
    let mut named = inputs([("hamiltonian", &ham), ("ansatz", &ans)]);
    let expansion = match (&args.result, args.init) {
        (None, InitArg::Zero) => None,
        (None, _) => {
            return Err(CliError::input(format!(
                "--init {} needs --result",
                serde_json::to_value(args.init).expect("serializes").as_str().unwrap_or("pert")
            )))
        }
        (Some(path), _) => {
            let r = replay(path, Some(&args.hamiltonian), Some(&args.ansatz))?;
            named.insert("result".into(), Input::read(path)?.record());
            Some(r.expansion)
        }
    };
    check_cap(ansatz.n_qubits(), args.max_qubits)?;
    let options = BfgsOptions {
        gtol: args.gtol,
        max_iters: args.max_iters,
        fd_step: args.fd_step,
        max_qubits: args.max_qubits,
        ..BfgsOptions::default()
    };
    let trace: OptimizationTrace =
        optimize_energy(&ansatz, &obs, &reference, args.init.into(), expansion.as_ref(), &options)?;
    eprintln!(
        "{} after {} iterations ({:?}): {:.12} -> {:.12}",
        trace.init, trace.iterations, trace.termination, trace.initial_cost, trace.final_cost
    );
    let doc = Document::new("optimization", args, named, &trace);
    emit(args.trace_out.as_deref(), &doc.to_text())?;
    Ok(doc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub depth: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "K_kept")]
    pub k_kept: usize,
    #[serde(rename = "N_o")]
    pub n_terms: usize,
    pub t_grad: f64,
    pub t_hess: f64,
    pub t_solve: f64,
    pub expectations_evaluated: u64,
}

pub const CSV_HEADER: &str = "n,depth,K,K_kept,N_o,t_grad,t_hess,t_solve,expectations_evaluated";

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6e},{:.6e},{:.6e},{}",
            self.n,
            self.depth,
            self.k,
            self.k_kept,
            self.n_terms,
            self.t_grad,
            self.t_hess,
            self.t_solve,
            self.expectations_evaluated
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub n: usize,
    /// `t_grad` vs `K`, or `t_hess` vs `K_kept`.
    pub stage: String,
    pub exponent: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub fits: Vec<Fit>,
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.csv());
        }
        s
    }
}

/// Least-squares slope of `ln y` against `ln x`. Needs two distinct `x` and
/// positive values throughout.
pub fn fit_exponent(points: &[(f64, f64)]) -> Option<f64> {
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if logs.len() < 2 || sxx <= 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

fn bench_cell(
    ansatz: &AnsatzCircuit,
    obs: &Observable,
    options: &ExpansionOptions,
    repeats: usize,
) -> Result<BenchRow, Error> {
    let reference = ReferenceState::zeros(ansatz.n_qubits());
    let mut best: Option<BenchRow> = None;
    for _ in 0..repeats.max(1) {
        let r = expand(ansatz, obs, &reference, options)?;
        let row = BenchRow {
            n: ansatz.n_qubits(),
            depth: ansatz.metadata.depth.unwrap_or(0),
            k: r.counters.k,
            k_kept: r.counters.k_kept,
            n_terms: r.counters.n_terms,
            t_grad: r.timings.gradient_s,
            t_hess: r.timings.hessian_s,
            t_solve: r.timings.solve_s,
            expectations_evaluated: r.counters.pauli_expectations_evaluated,
        };
        best = Some(match best {
            None => row,
            Some(b) => BenchRow {
                t_grad: b.t_grad.min(row.t_grad),
                t_hess: b.t_hess.min(row.t_hess),
                t_solve: b.t_solve.min(row.t_solve),
                ..b
            },
        });
    }
    Ok(best.expect("at least one repeat"))
}

pub fn bench(args: &BenchArgs) -> CliResult<BenchReport> {
    check_outputs([&args.out, &args.summary])?;
    let fixed = args.hamiltonian.as_deref().map(load_observable).transpose()?;
    let options = ExpansionOptions {
        dropout_threshold: args.dropout_threshold,
        solve: SolveOptions::default(),
        jobs: Some(args.jobs),
    };
    let mut rows = Vec::new();
    for &n in &args.qubits {
        let obs = match &fixed {
            Some((_, o)) if o.n_qubits() != n => {
                eprintln!("skip n={n}: hamiltonian has {} qubits", o.n_qubits());
                continue;
            }
            Some((_, o)) => o.clone(),
            None => seeded_observable(args.seed.wrapping_add(n as u64), n, args.terms),
        };
        for &depth in &args.depth {
            let ansatz = generate_hwe_ansatz(n, depth, args.seed, args.variant.into())?;
            if ansatz.n_params() > args.max_params {
                eprintln!("skip n={n} depth={depth}: K = {} exceeds --max-params", ansatz.n_params());
                continue;
            }
            match bench_cell(&ansatz, &obs, &options, args.repeats) {
                Ok(row) => {
                    eprintln!("{}", row.csv());
                    rows.push(row);
                }
                Err(e @ Error::CapExceeded { .. }) => eprintln!("skip n={n} depth={depth}: {e}"),
                Err(e) => return Err(e.into()),
            }
        }
    }
    let mut fits = Vec::new();
    for &n in &args.qubits {
        let cells: Vec<&BenchRow> = rows.iter().filter(|r| r.n == n).collect();
        let grad: Vec<(f64, f64)> = cells.iter().map(|r| (r.k as f64, r.t_grad)).collect();
        let hess: Vec<(f64, f64)> = cells.iter().map(|r| (r.k_kept as f64, r.t_hess)).collect();
        for (stage, pts) in [("t_grad~K", grad), ("t_hess~K_kept", hess)] {
            if let Some(exponent) = fit_exponent(&pts) {
                eprintln!("fit n={n}: {stage}^{exponent:.3} over {} points", pts.len());
                fits.push(Fit { n, stage: stage.into(), exponent, points: pts.len() });
            }
        }
    }
    let report = BenchReport { rows, fits };
    emit(args.out.as_deref(), &report.to_csv())?;
    if let Some(path) = &args.summary {
        let named = match &fixed {
            Some((input, _)) => inputs([("hamiltonian", input)]),
            None => BTreeMap::new(),
        };
        emit(Some(path), &Document::new("bench", args, named, &report).to_text())?;
    }
    Ok(report)
}
