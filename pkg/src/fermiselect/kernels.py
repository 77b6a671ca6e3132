"""Statevector update kernels with a numba fast path.

Set FERMISELECT_KERNELS=numpy to force the pure-numpy fallback, or
=numba to require the compiled path (import error if numba is missing).
Unset, the compiled path is used whenever numba imports.

Both backends update the amplitude array in place.  Qubit 0 is the most
significant bit of the flat index, so qubit q has bit weight
2**(n-1-q).  See benchmarks/bench_kernels.py for a speed comparison.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    numba = None
    HAS_NUMBA = False

_choice = os.environ.get("FERMISELECT_KERNELS", "").strip().lower()
if _choice == "numpy":
    USE_NUMBA = False
elif _choice == "numba":
    if not HAS_NUMBA:
        raise ImportError("FERMISELECT_KERNELS=numba but numba is not installed")
    USE_NUMBA = True
elif _choice == "":
    USE_NUMBA = HAS_NUMBA
else:
    raise ValueError(f"FERMISELECT_KERNELS must be 'numba' or 'numpy', got {_choice!r}")


def _one_qubit_loop(amps, n, q, m00, m01, m10, m11):
    stride = 1 << (n - 1 - q)
    period = stride << 1
    for base in range(0, amps.shape[0], period):
        for off in range(base, base + stride):
            a0 = amps[off]
            a1 = amps[off + stride]
            amps[off] = m00 * a0 + m01 * a1
            amps[off + stride] = m10 * a0 + m11 * a1


def _controlled_loop(amps, n, c, t, m00, m01, m10, m11):
    cbit = 1 << (n - 1 - c)
    tbit = 1 << (n - 1 - t)
    for i in range(amps.shape[0]):
        if (i & cbit) and not (i & tbit):
            a0 = amps[i]
            a1 = amps[i | tbit]
            amps[i] = m00 * a0 + m01 * a1
            amps[i | tbit] = m10 * a0 + m11 * a1


if HAS_NUMBA:
    _one_qubit_nb = numba.njit(cache=True)(_one_qubit_loop)
    _controlled_nb = numba.njit(cache=True)(_controlled_loop)


def _one_qubit_np(amps, n, q, mat):
    view = amps.reshape(1 << q, 2, -1)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = mat[0, 0] * a0 + mat[0, 1] * a1
    view[:, 1, :] = mat[1, 0] * a0 + mat[1, 1] * a1


def _controlled_np(amps, n, c, t, mat):
    view = amps.reshape((2,) * n)
    sub = view[(slice(None),) * c + (1,)]
    axis = t - 1 if t > c else t
    moved = np.moveaxis(sub, axis, 0)
    a0 = moved[0].copy()
    a1 = moved[1]
    moved[0] = mat[0, 0] * a0 + mat[0, 1] * a1
    moved[1] = mat[1, 0] * a0 + mat[1, 1] * a1


def apply_one_qubit(amps: np.ndarray, n: int, q: int, mat: np.ndarray) -> None:
    """In-place single-qubit update amps <- (I ⊗ mat ⊗ I) amps."""
    if USE_NUMBA:
        _one_qubit_nb(amps, n, q, mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1])
    else:
        _one_qubit_np(amps, n, q, mat)


def apply_controlled_one_qubit(
    amps: np.ndarray, n: int, c: int, t: int, mat: np.ndarray
) -> None:
    """In-place controlled update: mat on qubit t where qubit c is 1."""
    if USE_NUMBA:
        _controlled_nb(amps, n, c, t, mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1])
    else:
        _controlled_np(amps, n, c, t, mat)
