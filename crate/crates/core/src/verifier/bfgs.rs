//! BFGS with a strong-Wolfe line search, and the dense-energy driver used to
//! compare warm starts.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::circuit::{AnsatzCircuit, ReferenceState};
use crate::error::{Error, Result};
use crate::expansion::ExpansionResult;
use crate::linalg::hermitian_eigen;
use crate::observable::Observable;

use super::dense::{Evaluator, DEFAULT_MAX_QUBITS};
use super::finite_diff::gradient_from;

pub const DEFAULT_GTOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITERS: usize = 500;
/// Central-difference step for the optimizer's gradient.
pub const DEFAULT_FD_STEP: f64 = 1e-6;
/// Relative eigenvalue floor when inverting the predicted Hessian.
pub const DEFAULT_CURVATURE_FLOOR: f64 = 1e-6;

const C1: f64 = 1e-4;
const C2: f64 = 0.9;
const MAX_LINE_EVALS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    Zero,
    ThetaStar,
    ThetaStarWithHessian,
}

impl std::fmt::Display for Init {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Init::Zero => "zero",
            Init::ThetaStar => "theta_star",
            Init::ThetaStarWithHessian => "theta_star_with_hessian",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BfgsOptions {
    /// Stop once `‖∇f‖_∞ ≤ gtol`.
    pub gtol: f64,
    pub max_iters: usize,
    pub fd_step: f64,
    pub curvature_floor: f64,
    /// Statevector width cap for the dense energy.
    pub max_qubits: usize,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        BfgsOptions {
            gtol: DEFAULT_GTOL,
            max_iters: DEFAULT_MAX_ITERS,
            fd_step: DEFAULT_FD_STEP,
            curvature_floor: DEFAULT_CURVATURE_FLOOR,
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub cost: f64,
    pub grad_norm: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIterations,
    LineSearchFailed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOutcome {
    pub x: Vec<f64>,
    pub cost: f64,
    pub iterations: usize,
    pub function_evaluations: usize,
    pub termination: Termination,
    pub records: Vec<TraceRecord>,
}

impl MinimizeOutcome {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Cost and gradient at a point.
pub type Objective<'a> = dyn FnMut(&[f64]) -> Result<(f64, Vec<f64>)> + 'a;

struct Problem<'f, 'o> {
    f: &'f mut Objective<'o>,
    evals: usize,
}

impl Problem<'_, '_> {
    fn eval(&mut self, x: &DVector<f64>) -> Result<(f64, DVector<f64>)> {
        self.evals += 1;
        let (c, g) = (self.f)(x.as_slice())?;
        if !c.is_finite() || g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("objective"));
        }
        Ok((c, DVector::from_vec(g)))
    }
}

type Point = (f64, f64, DVector<f64>);

/// Strong-Wolfe search along `p`, returning `(α, f, ∇f)`.
fn line_search(
    prob: &mut Problem<'_, '_>,
    x: &DVector<f64>,
    f0: f64,
    g0: &DVector<f64>,
    p: &DVector<f64>,
) -> Result<Option<Point>> {
    let d0 = g0.dot(p);
    if d0 >= 0.0 {
        return Ok(None);
    }
    let mut evals = 0;
    let mut phi = |prob: &mut Problem<'_, '_>, a: f64| -> Result<(f64, f64, DVector<f64>)> {
        let (c, g) = prob.eval(&(x + p * a))?;
        Ok((c, g.dot(p), g))
    };
    let (mut a_prev, mut f_prev, mut d_prev) = (0.0, f0, d0);
    let mut a = 1.0;
    for i in 0..MAX_LINE_EVALS {
        let (fa, da, ga) = phi(prob, a)?;
        evals += 1;
        if fa > f0 + C1 * a * d0 || (i > 0 && fa >= f_prev) {
            return zoom(prob, &mut phi, f0, d0, (a_prev, f_prev, d_prev), (a, fa, da), evals);
        }
        if da.abs() <= -C2 * d0 {
            return Ok(Some((a, fa, ga)));
        }
        if da >= 0.0 {
            return zoom(prob, &mut phi, f0, d0, (a, fa, da), (a_prev, f_prev, d_prev), evals);
        }
        (a_prev, f_prev, d_prev) = (a, fa, da);
        a *= 2.0;
    }
    Ok(None)
}

/// Minimizer of the cubic through two points with slopes, if it lies inside.
fn cubic_min(a: f64, fa: f64, da: f64, b: f64, fb: f64, db: f64) -> Option<f64> {
    let d1 = da + db - 3.0 * (fa - fb) / (a - b);
    let disc = d1 * d1 - da * db;
    if disc < 0.0 {
        return None;
    }
    let d2 = (b - a).signum() * disc.sqrt();
    let t = b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
    t.is_finite().then_some(t)
}

fn zoom(
    prob: &mut Problem<'_, '_>,
    phi: &mut impl FnMut(&mut Problem<'_, '_>, f64) -> Result<(f64, f64, DVector<f64>)>,
    f0: f64,
    d0: f64,
    mut lo: (f64, f64, f64),
    mut hi: (f64, f64, f64),
    mut evals: usize,
) -> Result<Option<Point>> {
    while evals < MAX_LINE_EVALS {
        let (l, r) = (lo.0.min(hi.0), lo.0.max(hi.0));
        let width = r - l;
        if width < 1e-14 * r.max(1.0) {
            break;
        }
        let mut a = cubic_min(lo.0, lo.1, lo.2, hi.0, hi.1, hi.2).unwrap_or(0.5 * (l + r));
        // Keep the trial point away from the bracket ends.
        if a < l + 0.1 * width || a > r - 0.1 * width {
            a = 0.5 * (l + r);
        }
        let (fa, da, ga) = phi(prob, a)?;
        evals += 1;
        if fa > f0 + C1 * a * d0 || fa >= lo.1 {
            hi = (a, fa, da);
        } else {
            if da.abs() <= -C2 * d0 {
                return Ok(Some((a, fa, ga)));
            }
            if da * (hi.0 - lo.0) >= 0.0 {
                hi = lo;
            }
            lo = (a, fa, da);
        }
    }
    // Accept the best sufficient-decrease point if one was found.
    if lo.0 > 0.0 && lo.1 < f0 {
        let (fa, _, ga) = phi(prob, lo.0)?;
        return Ok(Some((lo.0, fa, ga)));
    }
    Ok(None)
}

/// Minimize `f` from `x0` with initial inverse-Hessian estimate `h0`.
///
/// `f` returns the cost and its gradient. Iteration 0 in the trace is the
/// starting point.
pub fn minimize_bfgs(
    f: &mut Objective<'_>,
    x0: &[f64],
    h0: DMatrix<f64>,
    options: &BfgsOptions,
) -> Result<MinimizeOutcome> {
    let k = x0.len();
    if h0.shape() != (k, k) {
        return Err(Error::DimensionMismatch { expected: k, found: h0.nrows() });
    }
    let mut prob = Problem { f, evals: 0 };
    let mut x = DVector::from_column_slice(x0);
    let (mut fx, mut g) = prob.eval(&x)?;
    let mut h = h0;
    let mut records = vec![TraceRecord { iteration: 0, cost: fx, grad_norm: inf_norm(&g) }];
    let mut termination = Termination::MaxIterations;
    let mut iterations = 0;
    let mut reset = false;
    loop {
        if inf_norm(&g) <= options.gtol {
            termination = Termination::Converged;
            break;
        }
        if iterations >= options.max_iters {
            break;
        }
        let p = -(&h * &g);
        let step = match line_search(&mut prob, &x, fx, &g, &p)? {
            Some(s) => Some(s),
            None if !reset => {
                // Retry once along steepest descent with a fresh scale.
                h = DMatrix::identity(k, k);
                reset = true;
                continue;
            }
            None => None,
        };
        let Some((alpha, f_new, g_new)) = step else {
            termination = Termination::LineSearchFailed;
            break;
        };
        reset = false;
        let s = &p * alpha;
        let y = &g_new - &g;
        let sy = s.dot(&y);
        if sy > 1e-14 * s.norm() * y.norm() {
            if iterations == 0 && h == DMatrix::identity(k, k) {
                // Standard first-step rescaling of an identity estimate.
                h *= sy / y.dot(&y);
            }
            let rho = 1.0 / sy;
            let hy = &h * &y;
            let yhy = y.dot(&hy);
            h += (&s * s.transpose()) * (rho * rho * yhy + rho) - (&hy * s.transpose() + &s * hy.transpose()) * rho;
        }
        x += s;
        fx = f_new;
        g = g_new;
        iterations += 1;
        records.push(TraceRecord { iteration: iterations, cost: fx, grad_norm: inf_norm(&g) });
    }
    Ok(MinimizeOutcome {
        x: x.as_slice().to_vec(),
        cost: fx,
        iterations,
        function_evaluations: prob.evals,
        termination,
        records,
    })
}

/// Inverse of the predicted Hessian on the kept block, identity elsewhere.
///
/// Eigenvalues at or below `floor · max|λ|` (including all negative ones) are
/// replaced by 1 before inversion, so the result is positive definite.
pub fn warm_inverse_hessian(expansion: &ExpansionResult, floor: f64) -> Result<DMatrix<f64>> {
    let k = expansion.gradient.len();
    let mut out = DMatrix::identity(k, k);
    let kept = &expansion.hessian.kept;
    if kept.is_empty() {
        return Ok(out);
    }
    let eig = hermitian_eigen(expansion.hessian.to_matrix())?;
    let scale = eig.eigenvalues.amax();
    let eps = floor * scale;
    let inv = eig.eigenvalues.map(|l| if l > eps && l > 0.0 { 1.0 / l } else { 1.0 });
    let block = &eig.eigenvectors * DMatrix::from_diagonal(&inv) * eig.eigenvectors.transpose();
    for (a, &i) in kept.iter().enumerate() {
        for (b, &j) in kept.iter().enumerate() {
            out[(i, j)] = block[(a, b)];
        }
    }
    Ok(out)
}

/// Starting point and inverse-Hessian estimate for an init mode.
pub fn initial_point(
    init: Init,
    n_params: usize,
    expansion: Option<&ExpansionResult>,
    options: &BfgsOptions,
) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let need = || {
        expansion.ok_or_else(|| Error::InvalidArgument(format!("init `{init}` needs an expansion result"))).and_then(
            |e| {
                if e.gradient.len() == n_params {
                    Ok(e)
                } else {
                    Err(Error::DimensionMismatch { expected: n_params, found: e.gradient.len() })
                }
            },
        )
    };
    Ok(match init {
        Init::Zero => (vec![0.0; n_params], DMatrix::identity(n_params, n_params)),
        Init::ThetaStar => (need()?.theta_full(), DMatrix::identity(n_params, n_params)),
        Init::ThetaStarWithHessian => {
            let e = need()?;
            (e.theta_full(), warm_inverse_hessian(e, options.curvature_floor)?)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTrace {
    pub init: Init,
    pub records: Vec<TraceRecord>,
    pub initial_cost: f64,
    pub final_cost: f64,
    pub final_theta: Vec<f64>,
    pub iterations: usize,
    pub function_evaluations: usize,
    pub termination: Termination,
    pub converged: bool,
}

impl OptimizationTrace {
    /// First iteration whose cost is within `tol` of the final cost.
    pub fn iterations_to_final(&self, tol: f64) -> usize {
        self.records.iter().find(|r| (r.cost - self.final_cost).abs() <= tol).map_or(self.iterations, |r| r.iteration)
    }
}

/// Minimize the dense energy of the ansatz from the chosen start.
pub fn optimize_energy(
    ansatz: &AnsatzCircuit,
    observable: &Observable,
    reference: &ReferenceState,
    init: Init,
    expansion: Option<&ExpansionResult>,
    options: &BfgsOptions,
) -> Result<OptimizationTrace> {
    let k = ansatz.n_params();
    let (x0, h0) = initial_point(init, k, expansion, options)?;
    let mut ev = Evaluator::with_cap(ansatz, observable, reference, &x0, options.max_qubits)?;
    let step = options.fd_step;
    let mut f = |x: &[f64]| -> Result<(f64, Vec<f64>)> {
        ev.rebase(x)?;
        Ok((ev.energy_shifted(&[])?, gradient_from(&ev, step)?))
    };
    let out = minimize_bfgs(&mut f, &x0, h0, options)?;
    Ok(OptimizationTrace {
        init,
        initial_cost: out.records[0].cost,
        final_cost: out.cost,
        final_theta: out.x.clone(),
        iterations: out.iterations,
        function_evaluations: out.function_evaluations,
        converged: out.converged(),
        termination: out.termination,
        records: out.records,
    })
}
