"""Shared dense references built independently of the package internals."""

import numpy as np
import pytest

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1, -1]).astype(complex)

SINGLE = {"I": _I, "X": _X, "Y": _Y, "Z": _Z}


def kron_chain(mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def dense_pauli(letters: str, phase: int = 0) -> np.ndarray:
    """i**phase times the Kronecker product of single-qubit Paulis."""
    return (1j ** phase) * kron_chain([SINGLE[ch] for ch in letters])


def permutation_matrix(n_qubits: int, fn) -> np.ndarray:
    """Unitary permuting basis states by bit-list function fn(bits)->bits."""
    dim = 1 << n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (n_qubits - 1 - i)) & 1 for i in range(n_qubits)]
        new = fn(list(bits))
        row = sum(b << (n_qubits - 1 - i) for i, b in enumerate(new))
        out[row, col] = 1
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
