//! Hermitian eigendecomposition wrapper.

use nalgebra::{ComplexField, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigendecomposition of a Hermitian matrix.
///
/// nalgebra's implicit QR never deflates a decoupled block whose diagonal is
/// exactly zero (the relative test compares against `|d_i| + |d_{i+1}|`), so
/// the off-diagonal shrinks until it underflows and the output turns NaN.
/// Sparse Hessians hit this routinely. Diagonalizing `M + cI` with
/// `c = ‖M‖_F` keeps every diagonal entry away from zero; eigenvectors are
/// unchanged and the shift is removed from the eigenvalues afterwards, at an
/// absolute cost of about `ε·‖M‖` per eigenvalue.
pub(crate) fn hermitian_eigen<T>(m: DMatrix<T>) -> Result<SymmetricEigen<T, Dyn>>
where
    T: ComplexField<RealField = f64>,
{
    let n = m.nrows();
    if m.iter().any(|v| !v.clone().is_finite()) {
        return Err(Error::NonFinite("matrix entries"));
    }
    let c = m.norm();
    if c == 0.0 {
        return Ok(SymmetricEigen { eigenvectors: DMatrix::identity(n, n), eigenvalues: DVector::zeros(n) });
    }
    let shifted = m + DMatrix::<T>::identity(n, n) * T::from_real(c);
    let mut eig = SymmetricEigen::try_new(shifted, f64::EPSILON, 0).ok_or(Error::NonFinite("eigendecomposition"))?;
    eig.eigenvalues.iter_mut().for_each(|l| *l -= c);
    if eig.eigenvalues.iter().any(|l| !l.is_finite()) || eig.eigenvectors.iter().any(|v| !v.clone().is_finite()) {
        return Err(Error::NonFinite("eigendecomposition"));
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_zero_diagonal_block_stays_finite() {
        // Off-diagonal couplings on an otherwise zero 12x12 matrix: the raw
        // nalgebra routine returns NaN eigenvectors here.
        let mut m = DMatrix::<f64>::zeros(12, 12);
        for &(i, j) in &[(0, 5), (0, 7), (5, 7), (2, 9), (3, 11), (9, 11)] {
            m[(i, j)] = -2.05;
            m[(j, i)] = -2.05;
        }
        let eig = hermitian_eigen(m.clone()).unwrap();
        let recon = &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues) * eig.eigenvectors.transpose();
        assert!((recon - m).amax() < 1e-13);
    }

    #[test]
    fn zero_matrix() {
        let eig = hermitian_eigen(DMatrix::<f64>::zeros(3, 3)).unwrap();
        assert_eq!(eig.eigenvalues, DVector::zeros(3));
    }
}
