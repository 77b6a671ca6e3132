"""Statevector engine, kernel backends, and classical selection tracking."""

import numpy as np
import pytest

from fermiselect import kernels
from fermiselect.circuit_ir import Circuit
from fermiselect.pauli import PauliString, pauli_apply
from fermiselect.select_synth import SelectionLayout, synth_select_k2
from fermiselect.simulator import (
    GATE_1Q,
    MAX_DENSE_QUBITS,
    MAX_UNITARY_QUBITS,
    apply_circuit,
    apply_classical_control,
    basis_state,
    random_state,
    unitary_of,
    verify_select,
    zero_state,
)

from conftest import dense_pauli


def test_states():
    z = zero_state(3)
    assert z[0] == 1 and np.abs(z[1:]).max() == 0
    b = basis_state(2, 3)
    assert b[3] == 1
    r = random_state(4, 7)
    assert abs(np.linalg.norm(r) - 1) < 1e-12
    assert np.abs(random_state(4, 7) - r).max() == 0  # seeded


def test_gate_matrices_unitary():
    for kind, mat in GATE_1Q.items():
        assert np.abs(mat @ mat.conj().T - np.eye(2)).max() < 1e-12, kind
    # A is the pi/8 Y-rotation: A^8 = -I
    a8 = np.linalg.matrix_power(GATE_1Q["A"], 8)
    assert np.abs(a8 + np.eye(2)).max() < 1e-12


# --- kernels: both backends, against dense one-qubit math ---------------------


def _dense_one_qubit(n, q, mat):
    out = np.eye(1, dtype=complex)
    for i in range(n):
        out = np.kron(out, mat if i == q else np.eye(2, dtype=complex))
    return out


def _dense_controlled(n, ctrl, tgt, mat):
    dim = 1 << n
    out = np.eye(dim, dtype=complex)
    single = _dense_one_qubit(n, tgt, mat)
    for col in range(dim):
        if (col >> (n - 1 - ctrl)) & 1:
            out[:, col] = single[:, col]
    return out


@pytest.mark.parametrize("n,q", [(1, 0), (3, 0), (3, 2), (5, 3)])
def test_one_qubit_kernels_match_dense(n, q, rng):
    mat = GATE_1Q["H"] @ GATE_1Q["T"]
    v = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    want = _dense_one_qubit(n, q, mat) @ v
    got = v.astype(np.complex128).copy()
    kernels._one_qubit_np(got, n, q, mat.astype(np.complex128))
    assert np.abs(got - want).max() < 1e-12
    got = v.astype(np.complex128).copy()
    kernels._one_qubit_loop(got, n, q, mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1])
    assert np.abs(got - want).max() < 1e-12


@pytest.mark.parametrize("n,c,t", [(2, 0, 1), (2, 1, 0), (4, 1, 3), (5, 4, 0)])
def test_controlled_kernels_match_dense(n, c, t, rng):
    mat = GATE_1Q["Y"] @ GATE_1Q["S"]
    v = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    want = _dense_controlled(n, c, t, mat) @ v
    got = v.astype(np.complex128).copy()
    kernels._controlled_np(got, n, c, t, mat.astype(np.complex128))
    assert np.abs(got - want).max() < 1e-12
    got = v.astype(np.complex128).copy()
    kernels._controlled_loop(got, n, c, t, mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1])
    assert np.abs(got - want).max() < 1e-12


def test_backend_flag_dispatch():
    # the active backend is decided at import from FERMISELECT_KERNELS
    assert kernels.USE_NUMBA in (True, False)
    if kernels.USE_NUMBA:
        assert kernels.HAS_NUMBA


# --- apply_circuit / unitary_of -------------------------------------------------


def test_apply_circuit_matches_unitary(rng):
    c = Circuit(3)
    for kind, qs in [("H", (0,)), ("A", (1,)), ("CX", (0, 1)), ("CZ", (1, 2)),
                     ("T", (2,)), ("CY", (2, 0)), ("CSWAP", (0, 1, 2))]:
        c.add(kind, *qs)
    v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    assert np.abs(apply_circuit(c, v) - unitary_of(c) @ v).max() < 1e-12


def test_apply_circuit_is_pauli_for_pauli_gates():
    c = Circuit(2)
    c.add("X", 0)
    c.add("Z", 1)
    v = np.arange(4, dtype=complex)
    want = pauli_apply(PauliString("XZ", 0), v)
    assert np.abs(apply_circuit(c, v) - want).max() < 1e-12


def test_unitary_is_unitary(rng):
    c = Circuit(2)
    for kind, qs in [("H", (0,)), ("T", (1,)), ("CX", (0, 1)), ("A", (0,))]:
        c.add(kind, *qs)
    U = unitary_of(c)
    assert np.abs(U @ U.conj().T - np.eye(4)).max() < 1e-10


def test_capacity_limits():
    with pytest.raises(ValueError):
        apply_circuit(Circuit(MAX_DENSE_QUBITS + 1), np.zeros(2))
    with pytest.raises(ValueError):
        unitary_of(Circuit(MAX_UNITARY_QUBITS + 1))
    with pytest.raises(ValueError):
        apply_circuit(Circuit(2), np.zeros(3))


# --- classical selection tracking ----------------------------------------------


def test_classical_control_matches_full_simulation(rng):
    c = synth_select_k2(4, "star")
    lay = SelectionLayout(4, 2, "k2")
    dim = 1 << 4
    for word in [lay.pack_k2(0, 1, 0, 0), lay.pack_k2(1, 3, 2, 1), lay.pack_k2(2, 3, 3, 1)]:
        psi = random_state(4, rng)
        phase, out = apply_classical_control(c, word, psi)
        full = np.zeros(1 << c.n_qubits, dtype=complex)
        full[word * dim : (word + 1) * dim] = psi
        ref = apply_circuit(c, full)
        assert np.abs(phase * out - ref[word * dim : (word + 1) * dim]).max() < 1e-12
        # nothing may leak outside the selection block
        ref[word * dim : (word + 1) * dim] = 0
        assert np.abs(ref).max() < 1e-12


def test_classical_control_requires_system_label():
    c = Circuit(2)
    with pytest.raises(ValueError, match="system"):
        apply_classical_control(c, 0, np.zeros(2, dtype=complex))


def test_classical_control_rejects_superposing_gates():
    c = Circuit(2, [], {"system": (1,)})
    c.add("H", 0)
    with pytest.raises(ValueError, match="selection"):
        apply_classical_control(c, 0, zero_state(1))


def test_classical_control_rejects_system_control_onto_selection():
    c = Circuit(2, [], {"system": (1,)})
    c.add("CX", 1, 0)
    with pytest.raises(ValueError, match="selection"):
        apply_classical_control(c, 0, zero_state(1))


def test_classical_control_detects_unrestored_selection():
    c = Circuit(2, [], {"system": (1,)})
    c.add("X", 0)
    with pytest.raises(ValueError, match="restored"):
        apply_classical_control(c, 0, zero_state(1))


def test_classical_control_tracks_phases():
    # Sdg on a set selection bit contributes -i; CZ between set bits -1
    c = Circuit(3, [], {"system": (2,)})
    c.add("Sdg", 0)
    c.add("CZ", 0, 1)
    phase, _ = apply_classical_control(c, 0b11, zero_state(1))
    assert abs(phase - (-1j) * (-1)) < 1e-12
    phase, _ = apply_classical_control(c, 0b01, zero_state(1))
    assert abs(phase - 1) < 1e-12


def test_classical_control_selection_to_system_gates():
    c = Circuit(2, [], {"system": (1,)})
    c.add("CY", 0, 1)
    phase, out = apply_classical_control(c, 1, zero_state(1))
    assert abs(phase - 1) < 1e-12
    assert np.abs(phase * out - np.array([0, 1j])).max() < 1e-12
    phase, out = apply_classical_control(c, 0, zero_state(1))
    assert np.abs(out - zero_state(1)).max() < 1e-12


# --- verify_select ---------------------------------------------------------------


def test_verify_select_smoke():
    rep = verify_select(2, 2, "star", trials=3, seed=5)
    assert rep["pass"] and rep["states_checked"] == 8
    assert rep["max_error"] < 1e-9


def test_verify_select_words_subset():
    lay = SelectionLayout(4, 2, "k2")
    words = [lay.pack_k2(0, 2, 1, 1), lay.pack_k2(1, 3, 0, 0)]
    rep = verify_select(4, 2, "plain", trials=2, seed=9, words=words)
    assert rep["states_checked"] == 2 and rep["pass"]


def test_verify_select_report_fields():
    rep = verify_select(2, 2, "plain", trials=1, seed=3)
    assert set(rep) == {"n", "k", "variant", "states_checked", "trials", "max_error", "pass"}
