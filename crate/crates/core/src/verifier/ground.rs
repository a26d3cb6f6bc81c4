//! Exact lowest eigenvalue of an observable over the full 2^n space.
//!
//! Up to six qubits the matrix is built and diagonalized. Beyond that a
//! matrix-free Lanczos iteration with full reorthogonalization is used.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::linalg::hermitian_eigen;
use crate::observable::Observable;

use super::dense::apply_observable;

pub const MAX_GROUND_QUBITS: usize = 14;
const DENSE_LIMIT: usize = 6;
const LANCZOS_TOL: f64 = 1e-11;

pub fn exact_ground_energy(observable: &Observable) -> Result<f64> {
    let n = observable.n_qubits();
    if n > MAX_GROUND_QUBITS {
        return Err(Error::CapExceeded { what: "exact diagonalization", n_qubits: n, cap: MAX_GROUND_QUBITS });
    }
    if n <= DENSE_LIMIT {
        dense_ground(observable)
    } else {
        lanczos_ground(observable)
    }
}

/// The observable as a dense Hermitian matrix, `n ≤ 14`.
pub fn observable_matrix(observable: &Observable) -> Result<DMatrix<Complex64>> {
    let n = observable.n_qubits();
    if n > MAX_GROUND_QUBITS {
        return Err(Error::CapExceeded { what: "dense observable", n_qubits: n, cap: MAX_GROUND_QUBITS });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    let mut e = vec![Complex64::new(0.0, 0.0); dim];
    let mut col = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..dim {
        e[j] = Complex64::new(1.0, 0.0);
        apply_observable(observable, &e, &mut col);
        m.set_column(j, &nalgebra::DVector::from_column_slice(&col));
        e[j] = Complex64::new(0.0, 0.0);
    }
    Ok(m)
}

fn dense_ground(observable: &Observable) -> Result<f64> {
    Ok(hermitian_eigen(observable_matrix(observable)?)?.eigenvalues.min())
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn tridiagonal_min(alpha: &[f64], beta: &[f64]) -> Result<(f64, f64)> {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = hermitian_eigen(t)?;
    let (idx, &lam) = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
    // Residual of the Ritz pair is |β_m · s_m| with s the last eigenvector entry.
    Ok((lam, eig.eigenvectors[(m - 1, idx)].abs()))
}

fn lanczos_ground(observable: &Observable) -> Result<f64> {
    let dim = 1usize << observable.n_qubits();
    let max_iter = dim.min(600);
    let mut rng = ChaCha20Rng::seed_from_u64(0);
    let mut v: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let n0 = norm(&v);
    v.iter_mut().for_each(|x| *x /= n0);

    let mut basis: Vec<Vec<Complex64>> = vec![v];
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    let mut best = f64::INFINITY;
    for j in 0..max_iter {
        apply_observable(observable, &basis[j], &mut w);
        alpha.push(dot(&basis[j], &w).re);
        // Two passes of classical Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nb = norm(&w);
        let (lam, s_last) = tridiagonal_min(&alpha, &beta)?;
        best = lam;
        if nb * s_last < LANCZOS_TOL * lam.abs().max(1.0) || nb < 1e-14 || j + 1 == max_iter {
            break;
        }
        beta.push(nb);
        basis.push(w.iter().map(|x| x / nb).collect());
    }
    Ok(best)
}
