#!/usr/bin/env python3
"""Export a qubit Hamiltonian for an evenly spaced hydrogen chain.

Writes the plain-text observable format read by `qcx --hamiltonian`:

    qubits N
    <coefficient> <pauli tokens...>

Electronic integrals come from PySCF (STO-3G, RHF). The fermion-to-qubit
mapping is Jordan-Wigner with interleaved spin orbitals (2p = alpha,
2p + 1 = beta), so the Hartree-Fock reference occupies the first
`n_electrons` qubits.

    python3 scripts/export_hchain.py --atoms 4 --spacing 1.0 --out h4.txt
"""

import argparse
import itertools

import numpy as np
from pyscf import ao2mo, fci, gto, scf

# single-qubit products: (a, b) -> (phase, letter)
_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


def mul(a, b):
    out = {}
    for pa, ca in a.items():
        for pb, cb in b.items():
            phase = 1
            letters = []
            for x, y in zip(pa, pb):
                ph, l = _MUL[(x, y)]
                phase *= ph
                letters.append(l)
            key = "".join(letters)
            out[key] = out.get(key, 0) + phase * ca * cb
    return out


def ladder(j, n, dagger):
    z = "Z" * j
    rest = "I" * (n - j - 1)
    sign = -0.5j if dagger else 0.5j
    return {z + "X" + rest: 0.5, z + "Y" + rest: sign}


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--atoms", type=int, required=True)
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--out", required=True)
    args = p.parse_args()

    atom = [("H", (0.0, 0.0, i * args.spacing)) for i in range(args.atoms)]
    mol = gto.M(atom=atom, basis="sto-3g", spin=args.atoms % 2, unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    norb = mf.mo_coeff.shape[1]
    h1 = mf.mo_coeff.T @ mf.get_hcore() @ mf.mo_coeff
    eri = ao2mo.restore(1, ao2mo.kernel(mol, mf.mo_coeff), norb)  # chemist (pq|rs)
    e_fci = fci.FCI(mf).kernel()[0]

    n = 2 * norb
    ops = [ladder(j, n, False) for j in range(n)]
    ops_dag = [ladder(j, n, True) for j in range(n)]
    ham = {"I" * n: mol.energy_nuc()}

    def add(term, scale):
        for k, v in term.items():
            ham[k] = ham.get(k, 0) + scale * v

    for p_, q in itertools.product(range(n), repeat=2):
        if p_ % 2 != q % 2:
            continue
        c = h1[p_ // 2, q // 2]
        if abs(c) > 1e-14:
            add(mul(ops_dag[p_], ops[q]), c)
    # 1/2 sum (pq|rs) a+_p a+_r a_s a_q
    for p_, q, r, s in itertools.product(range(n), repeat=4):
        if p_ % 2 != q % 2 or r % 2 != s % 2 or p_ == r or q == s:
            continue
        c = eri[p_ // 2, q // 2, r // 2, s // 2]
        if abs(c) < 1e-14:
            continue
        add(mul(mul(ops_dag[p_], ops_dag[r]), mul(ops[s], ops[q])), 0.5 * c)

    n_elec = mol.nelectron
    lines = [
        f"# H{args.atoms} chain, spacing {args.spacing} A, STO-3G, Jordan-Wigner",
        f"# HF energy {float(mf.e_tot)!r}",
        f"# FCI energy {float(e_fci)!r}",
        f"# reference {'1' * n_elec}{'0' * (n - n_elec)}",
        f"qubits {n}",
    ]
    for key in sorted(ham):
        c = ham[key]
        if abs(c) < 1e-12:
            continue
        if abs(np.imag(c)) > 1e-10:
            raise SystemExit(f"non-real coefficient on {key}: {c}")
        tokens = " ".join(f"{l}{i}" for i, l in enumerate(key) if l != "I")
        lines.append(f"{float(np.real(c))!r} {tokens}".rstrip())
    with open(args.out, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
