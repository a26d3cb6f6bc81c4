use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qcx_core::{pauli_mul, CliffordGate, PauliLetter, PauliString, StabilizerTableau};

const LETTERS: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

/// Deterministic dense-ish string; `salt` varies the letter pattern.
fn string(n: usize, salt: usize) -> PauliString {
    let letters: Vec<PauliLetter> = (0..n).map(|q| LETTERS[(q * 7 + salt * 13 + q / 3) % 4]).collect();
    PauliString::from_letters(&letters)
}

fn scrambled(n: usize) -> StabilizerTableau {
    let mut t = StabilizerTableau::zero_state(n);
    for q in 0..n {
        t.apply(&CliffordGate::H(q)).unwrap();
        t.apply(&CliffordGate::Cnot { control: q, target: (q + 1) % n }).unwrap();
        t.apply(&CliffordGate::S((q * 5) % n)).unwrap();
    }
    t
}

fn algebra(c: &mut Criterion) {
    let mut group = c.benchmark_group("pauli");
    for n in [16, 64, 256, 1024] {
        let (a, b) = (string(n, 1), string(n, 2));
        group.bench_with_input(BenchmarkId::new("mul", n), &n, |bench, _| {
            bench.iter(|| pauli_mul(black_box(&a), black_box(&b)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("commutes", n), &n, |bench, _| {
            bench.iter(|| black_box(&a).commutes(black_box(&b)).unwrap())
        });
    }
    group.finish();
}

fn tableau(c: &mut Criterion) {
    let mut group = c.benchmark_group("tableau_expectation");
    for n in [16, 64, 128] {
        let t = scrambled(n);
        let in_group = pauli_mul(&t.stabilizers()[0], &t.stabilizers()[n / 2]).unwrap();
        let generic = string(n, 3);
        group.bench_with_input(BenchmarkId::new("stabilizer_member", n), &n, |bench, _| {
            bench.iter(|| t.expectation(black_box(&in_group)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("generic", n), &n, |bench, _| {
            bench.iter(|| t.expectation(black_box(&generic)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, algebra, tableau);
criterion_main!(benches);
