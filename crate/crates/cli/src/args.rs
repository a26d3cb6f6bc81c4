use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qcx_core::expansion::{DEFAULT_DROPOUT_THRESHOLD, DEFAULT_RTOL};
use qcx_core::verifier::bfgs::{DEFAULT_FD_STEP, DEFAULT_GTOL, DEFAULT_MAX_ITERS};
use qcx_core::verifier::DEFAULT_MAX_QUBITS;

/// Largest statevector the CLI will ever allocate (16 GiB of amplitudes).
pub const HARD_MAX_QUBITS: usize = 30;

fn parse_qubit_cap(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (1..=HARD_MAX_QUBITS).contains(&n) {
        Ok(n)
    } else {
        Err(format!("must be between 1 and {HARD_MAX_QUBITS}"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "qcx", version, about = "Quadratic expansion of Clifford+rotation circuits at the Clifford point")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded hardware-efficient ansatz.
    GenAnsatz(GenAnsatzArgs),
    /// Draw candidate ansatzes and keep the one with the largest gradient.
    SelectAnsatz(SelectAnsatzArgs),
    /// Gradient, Hessian and quadratic-model optimum at θ = 0.
    Expand(ExpandArgs),
    /// Evaluate the expansion's θ* on a dense statevector.
    Verify(VerifyArgs),
    /// Run BFGS on the dense energy from a chosen starting point.
    Optimize(OptimizeArgs),
    /// Time the expansion stages over a sweep and fit scaling exponents.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantArg {
    Complex,
    Real,
}

impl From<VariantArg> for qcx_core::Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Complex => qcx_core::Variant::Complex,
            VariantArg::Real => qcx_core::Variant::Real,
        }
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct AnsatzShape {
    #[arg(long)]
    pub qubits: usize,
    #[arg(long)]
    pub depth: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = VariantArg::Complex)]
    pub variant: VariantArg,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct GenAnsatzArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub shape: AnsatzShape,
    /// Ansatz file to write; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SelectAnsatzArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub shape: AnsatzShape,
    #[arg(long, default_value_t = qcx_core::circuit::DEFAULT_CANDIDATES)]
    pub count: usize,
    #[arg(long)]
    pub hamiltonian: PathBuf,
    /// Basis-state input, qubit 0 first; all zeros when absent.
    #[arg(long)]
    pub reference: Option<String>,
    /// Chosen ansatz file.
    #[arg(long)]
    pub out: PathBuf,
    /// Selection report; stdout when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ExpandArgs {
    #[arg(long)]
    pub hamiltonian: PathBuf,
    #[arg(long)]
    pub ansatz: PathBuf,
    #[arg(long)]
    pub reference: Option<String>,
    #[arg(long, default_value_t = DEFAULT_DROPOUT_THRESHOLD)]
    pub dropout_threshold: f64,
    #[arg(long, default_value_t = DEFAULT_RTOL)]
    pub rtol: f64,
    /// Keep only positive-curvature directions in θ*.
    #[arg(long)]
    pub stable_subspace: bool,
    /// Worker threads; all cores when absent. Results do not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Output of `expand`.
    #[arg(long)]
    pub result: PathBuf,
    /// Defaults to the path recorded in the result document.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Defaults to the path recorded in the result document.
    #[arg(long)]
    pub ansatz: Option<PathBuf>,
    /// Defaults to the reference recorded in the result document.
    #[arg(long)]
    pub reference: Option<String>,
    /// Also compute the exact ground energy (at most 14 qubits).
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_QUBITS, value_parser = parse_qubit_cap)]
    pub max_qubits: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitArg {
    Zero,
    Pert,
    PertHessian,
}

impl From<InitArg> for qcx_core::verifier::Init {
    fn from(v: InitArg) -> Self {
        use qcx_core::verifier::Init;
        match v {
            InitArg::Zero => Init::Zero,
            InitArg::Pert => Init::ThetaStar,
            InitArg::PertHessian => Init::ThetaStarWithHessian,
        }
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub hamiltonian: PathBuf,
    #[arg(long)]
    pub ansatz: PathBuf,
    #[arg(long)]
    pub reference: Option<String>,
    #[arg(long, value_enum, default_value_t = InitArg::Zero)]
    pub init: InitArg,
    /// Output of `expand`; required for the `pert` starts.
    #[arg(long)]
    pub result: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
    #[arg(long, default_value_t = DEFAULT_GTOL)]
    pub gtol: f64,
    /// Central-difference step of the optimizer gradient.
    #[arg(long, default_value_t = DEFAULT_FD_STEP)]
    pub fd_step: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_QUBITS, value_parser = parse_qubit_cap)]
    pub max_qubits: usize,
    /// Trace document; stdout when absent.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct BenchArgs {
    /// Comma-separated qubit counts.
    #[arg(long, value_delimiter = ',', default_value = "8")]
    pub qubits: Vec<usize>,
    /// Comma-separated depths.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    pub depth: Vec<usize>,
    /// Terms in the random observable of each cell.
    #[arg(long, default_value_t = 32)]
    pub terms: usize,
    /// Use this observable instead; cells of other widths are skipped.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = VariantArg::Complex)]
    pub variant: VariantArg,
    #[arg(long, default_value_t = 0.0)]
    pub dropout_threshold: f64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Timed runs per cell; the fastest is kept.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    /// Cells with more parameters than this are skipped.
    #[arg(long, default_value_t = 4096)]
    pub max_params: usize,
    /// CSV table; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON document with the rows and fitted exponents.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}
