//! Central finite differences of the dense energy.

use nalgebra::DMatrix;

use crate::circuit::{AnsatzCircuit, ReferenceState};
use crate::error::Result;
use crate::observable::Observable;

use super::dense::Evaluator;

pub const DEFAULT_GRADIENT_STEP: f64 = 1e-4;
pub const DEFAULT_HESSIAN_STEP: f64 = 1e-3;

/// `(E(θ+h e_k) − E(θ−h e_k)) / 2h` at an arbitrary point.
pub fn finite_diff_gradient_at(
    ansatz: &AnsatzCircuit,
    observable: &Observable,
    reference: &ReferenceState,
    theta: &[f64],
    h: f64,
) -> Result<Vec<f64>> {
    let ev = Evaluator::new(ansatz, observable, reference, theta)?;
    gradient_from(&ev, h)
}

pub(crate) fn gradient_from(ev: &Evaluator<'_>, h: f64) -> Result<Vec<f64>> {
    (0..ev.base().len())
        .map(|k| Ok((ev.energy_shifted(&[(k, h)])? - ev.energy_shifted(&[(k, -h)])?) / (2.0 * h)))
        .collect()
}

/// Gradient at `θ = 0`.
pub fn finite_diff_gradient(
    ansatz: &AnsatzCircuit,
    observable: &Observable,
    reference: &ReferenceState,
    h: f64,
) -> Result<Vec<f64>> {
    finite_diff_gradient_at(ansatz, observable, reference, &vec![0.0; ansatz.n_params()], h)
}

/// Full Hessian at `θ = 0`: three-point rule on the diagonal, four-point rule
/// off it. Each unordered pair is evaluated once and mirrored.
pub fn finite_diff_hessian(
    ansatz: &AnsatzCircuit,
    observable: &Observable,
    reference: &ReferenceState,
    h: f64,
) -> Result<DMatrix<f64>> {
    let k = ansatz.n_params();
    let ev = Evaluator::new(ansatz, observable, reference, &vec![0.0; k])?;
    let e0 = ev.energy_shifted(&[])?;
    let mut out = DMatrix::zeros(k, k);
    let h2 = h * h;
    for a in 0..k {
        let plus = ev.energy_shifted(&[(a, h)])?;
        let minus = ev.energy_shifted(&[(a, -h)])?;
        out[(a, a)] = (plus - 2.0 * e0 + minus) / h2;
        for b in (a + 1)..k {
            let pp = ev.energy_shifted(&[(a, h), (b, h)])?;
            let pm = ev.energy_shifted(&[(a, h), (b, -h)])?;
            let mp = ev.energy_shifted(&[(a, -h), (b, h)])?;
            let mm = ev.energy_shifted(&[(a, -h), (b, -h)])?;
            let v = (pp - pm - mp + mm) / (4.0 * h2);
            out[(a, b)] = v;
            out[(b, a)] = v;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Axis, Element, Metadata, RotationGate};
    use approx::assert_abs_diff_eq;

    #[test]
    fn toy_derivatives() {
        let a = AnsatzCircuit::new(
            1,
            vec![Element::Rotation(RotationGate { axis: Axis::Y, wire: 0, param: 0 })],
            Metadata::default(),
        )
        .unwrap();
        let obs = Observable::parse("qubits 1\n1.0 X0\n2.0 Z0").unwrap();
        let r = ReferenceState::zeros(1);
        let g = finite_diff_gradient(&a, &obs, &r, DEFAULT_GRADIENT_STEP).unwrap();
        assert_abs_diff_eq!(g[0], -2.0, epsilon = 1e-7);
        let h = finite_diff_hessian(&a, &obs, &r, DEFAULT_HESSIAN_STEP).unwrap();
        assert_abs_diff_eq!(h[(0, 0)], -8.0, epsilon = 1e-5);
    }
}
