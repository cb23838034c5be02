#!/usr/bin/env python3
"""Build the molecular fixtures consumed by the sweep commands.

Run once; the JSON outputs are committed under fixtures/. Requires pyscf and
openfermion, which are not needed by the C++ build.

Ansatz: spin-adapted singles, paired doubles and general doubles, each
excitation parameter taken from RCCSD amplitudes and Trotterized term by term
after the Jordan-Wigner transform.
"""
import argparse
import itertools
import json
import pathlib

import numpy as np
import openfermion as of
import pyscf
from pyscf import cc, fci, gto, scf

ZERO_AMPLITUDE = 1e-10


def geometry(name):
    if name == "H2":
        return [("H", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, 0.735))]
    count = int(name[1:])
    return [("H", (0.0, 0.0, float(j))) for j in range(count)]


def up(p):
    return 2 * p


def down(p):
    return 2 * p + 1


def single_excitation(o, v):
    op = of.FermionOperator(((up(v), 1), (up(o), 0)))
    op += of.FermionOperator(((down(v), 1), (down(o), 0)))
    return op


def paired_double(o, v):
    return of.FermionOperator(((up(v), 1), (up(o), 0), (down(v), 1), (down(o), 0)))


def general_double(o1, v1, o2, v2):
    op = of.FermionOperator()
    spin = (up, down)
    for s, t in itertools.product(spin, spin):
        op += of.FermionOperator(((s(v1), 1), (s(o1), 0), (t(v2), 1), (t(o2), 0)))
    return op


def pauli_label(term, n_qubits):
    chars = ["I"] * n_qubits
    for q, p in term:
        chars[q] = p
    return "".join(chars)


def rotations(excitation, theta, n_qubits):
    """exp(theta (T - T^dag)) = prod_k exp(i c_k P_k) after Jordan-Wigner."""
    generator = theta * (excitation - of.hermitian_conjugated(excitation))
    qubit_op = of.jordan_wigner(generator)
    qubit_op.compress(1e-14)
    out = []
    for term, coeff in sorted(qubit_op.terms.items()):
        # generator is anti-Hermitian: coeff = i * c with c real
        c = complex(coeff) / 1j
        assert abs(c.imag) < 1e-12, c
        out.append((pauli_label(term, n_qubits), float(c.real)))
    return out


def build(name, out_dir):
    mol = gto.M(atom=geometry(name), basis="sto-3g", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    mycc = cc.RCCSD(mf).run()
    n_orb = mf.mo_coeff.shape[1]
    n_qubits = 2 * n_orb
    n_occ = mol.nelectron // 2
    occ = list(range(n_occ))
    vir = list(range(n_occ, n_orb))
    t1, t2 = mycc.t1, mycc.t2

    # Hamiltonian in the HF orbital basis, Jordan-Wigner mapped.
    h1 = mf.mo_coeff.T @ mf.get_hcore() @ mf.mo_coeff
    eri = pyscf.ao2mo.restore(1, pyscf.ao2mo.kernel(mol, mf.mo_coeff), n_orb)
    # openfermion wants two-body tensor in (p q r s) -> a^p a^q a_r a_s physicist order
    two_body = np.asarray(eri.transpose(0, 2, 3, 1), order="C")
    one_so, two_so = of.chem.molecular_data.spinorb_from_spatial(h1, two_body)
    mol_ham = of.InteractionOperator(mol.energy_nuc(), one_so, 0.5 * two_so)
    qubit_ham = of.jordan_wigner(of.get_fermion_operator(mol_ham))
    qubit_ham.compress(1e-12)
    terms = []
    for term, coeff in sorted(qubit_ham.terms.items()):
        assert abs(complex(coeff).imag) < 1e-12
        terms.append({"pauli": pauli_label(term, n_qubits), "coeff": float(complex(coeff).real)})

    # Excitations in the written operator order: singles, paired doubles, general doubles.
    excitations = []
    for o in occ:
        for v in vir:
            excitations.append(("s", (o, v), t1[o, v - n_occ], single_excitation(o, v)))
    for o in occ:
        for v in vir:
            excitations.append(("d1", (o, v), t2[o, o, v - n_occ, v - n_occ], paired_double(o, v)))
    pairs = [(o, v) for o in occ for v in vir]
    for (o1, v1), (o2, v2) in itertools.combinations(pairs, 2):
        theta = t2[o1, o2, v1 - n_occ, v2 - n_occ]
        excitations.append(("d2", (o1, v1, o2, v2), theta, general_double(o1, v1, o2, v2)))

    written = []
    dropped = 0
    for kind, idx, theta, op in excitations:
        if abs(theta) < ZERO_AMPLITUDE:
            dropped += 1
            continue
        for label, angle in rotations(op, float(theta), n_qubits):
            written.append({"pauli": label, "angle": angle, "excitation": kind + str(list(idx))})
    # The written product e^{Ts} e^{Td1} e^{Td2} applies its rightmost factor first.
    generators = list(reversed(written))

    # Reference values, computed independently of the C++ simulator.
    hf_index = 0
    for p in range(2 * n_occ):
        hf_index |= 1 << (n_qubits - 1 - p)
    hmat = of.get_sparse_operator(qubit_ham, n_qubits=n_qubits).toarray()
    # openfermion: qubit 0 is the most significant bit, matching our convention.
    evals, evecs = np.linalg.eigh(hmat)
    e0 = float(evals[0])
    psi0 = evecs[:, 0]
    state = np.zeros(2 ** n_qubits, dtype=complex)
    state[hf_index] = 1.0
    e_hf = float(np.real(state.conj() @ hmat @ state))
    for g in generators:
        pmat = of.get_sparse_operator(of.QubitOperator(
            " ".join(f"{c}{q}" for q, c in enumerate(g["pauli"]) if c != "I")), n_qubits=n_qubits).toarray()
        state = (np.cos(g["angle"]) * state + 1j * np.sin(g["angle"]) * (pmat @ state))
    e_ucc = float(np.real(state.conj() @ hmat @ state))
    f_ucc = float(abs(np.vdot(psi0, state)) ** 2)
    e_fci = float(fci.FCI(mf).kernel()[0])

    meta = {
        "system": name,
        "geometry": [[a, list(x)] for a, x in geometry(name)],
        "geometry_units": "angstrom",
        "basis": "STO-3G",
        "mapping": "Jordan-Wigner",
        "orbitals": "RHF canonical",
        "qubit_order": "qubit 2p = spatial orbital p spin up, 2p+1 = spin down; qubit 0 is the leftmost Pauli character",
        "source": "CCSD amplitudes",
        "generator_order": "time order (first entry applied first); reverse of the written product singles * paired doubles * general doubles",
        "zero_amplitude_cutoff": ZERO_AMPLITUDE,
        "excitations_dropped_as_zero": dropped,
        "rotation_count": len(generators),
        "n_electrons": int(mol.nelectron),
        "e_nuclear": float(mol.energy_nuc()),
        "e_hf": e_hf,
        "e_rhf_pyscf": float(mf.e_tot),
        "e_ccsd": float(mycc.e_tot),
        "e_fci_pyscf": e_fci,
        "e_ground_exact": e0,
        "e_ucc_ideal": e_ucc,
        "f_ucc_ideal": f_ucc,
        "generator": "tools/make_fixtures.py (pyscf %s, openfermion %s)" % (pyscf.__version__, of.__version__),
    }
    doc = {
        "system": name,
        "hamiltonian": {"n_qubits": n_qubits, "terms": terms, "meta": meta},
        "generators": {"n_qubits": n_qubits, "generators": generators, "meta": meta},
    }
    path = pathlib.Path(out_dir) / f"{name}.json"
    path.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"{name}: n={n_qubits} L={len(generators)} dropped={dropped} terms={len(terms)} "
          f"E0={e0:.8f} Efci={e_fci:.8f} Eucc={e_ucc:.8f} F={f_ucc:.10f}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "fixtures"))
    parser.add_argument("systems", nargs="*", default=["H2", "H4", "H6"])
    args = parser.parse_args()
    for name in args.systems:
        build(name, args.out)


if __name__ == "__main__":
    main()
