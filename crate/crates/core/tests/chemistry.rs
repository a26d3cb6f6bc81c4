//! Hydrogen chains (STO-3G, 1.0 Å spacing, Jordan-Wigner) from `data/`.
//!
//! Hartree-Fock and FCI energies come from pyscf when the files were
//! generated. The expansion values are frozen from the first run.

use qcx_core::verifier::{energy, exact_ground_energy};
use qcx_core::{expand, select_ansatz, ExpansionOptions, Observable, ReferenceState, Variant};

fn load(name: &str) -> Observable {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    Observable::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

struct Golden {
    file: &'static str,
    reference: &'static str,
    hartree_fock: f64,
    chosen: usize,
    model: f64,
    energy_at_theta_star: f64,
}

fn check(g: &Golden) {
    let obs = load(g.file);
    let reference: ReferenceState = g.reference.parse().unwrap();
    let sel = select_ansatz(200, obs.n_qubits(), 2, Variant::Real, &obs, &reference, 0).unwrap();
    assert_eq!(sel.index, g.chosen);
    let run = |thr: f64| {
        expand(&sel.ansatz, &obs, &reference, &ExpansionOptions { dropout_threshold: thr, ..Default::default() })
            .unwrap()
    };
    let (dropped, full) = (run(1e-6), run(0.0));
    assert!((dropped.e0 - g.hartree_fock).abs() < 1e-12, "{}: e0 {}", g.file, dropped.e0);
    assert!((dropped.perturbative_optimum - g.model).abs() < 1e-10);
    assert!((dropped.perturbative_optimum - full.perturbative_optimum).abs() < 1e-12);
    let e = energy(&sel.ansatz, &dropped.theta_full(), &reference, &obs).unwrap();
    assert!((e - g.energy_at_theta_star).abs() < 1e-10, "{}: E(θ*) {e}", g.file);
    assert!(e < dropped.e0);
}

#[test]
fn h4_golden_values() {
    check(&Golden {
        file: "h4_1.0.txt",
        reference: "11110000",
        hartree_fock: -2.098545936997718,
        chosen: 14,
        model: -2.123252054535543,
        energy_at_theta_star: -2.1224576257356684,
    });
}

#[test]
fn h6_golden_values() {
    check(&Golden {
        file: "h6_1.0.txt",
        reference: "111111000000",
        hartree_fock: -3.135532213966324,
        chosen: 53,
        model: -3.1548226560352504,
        energy_at_theta_star: -3.1542130211166963,
    });
}

#[test]
fn h4_exact_ground_energy_is_fci() {
    let e = exact_ground_energy(&load("h4_1.0.txt")).unwrap();
    assert!((e - -2.1663874486347625).abs() < 1e-9, "{e}");
}
