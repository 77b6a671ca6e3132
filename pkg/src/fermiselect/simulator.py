"""Dense statevector simulation and SELECT verification.

Qubit 0 is the most significant bit of the state index, matching the
Pauli-string convention.  Three independent routes exist on purpose:

* ``apply_circuit`` / ``unitary_of`` simulate gates directly;
* ``apply_classical_control`` tracks selection qubits as classical bits
  and plays only the system-side gates, which is how large SELECT
  circuits are checked state by state;
* ``pauli_apply`` (in :mod:`fermiselect.pauli`) is the oracle both are
  compared against.

``verify_select`` ties them together: for every valid selection word it
walks the synthesized circuit classically and compares the resulting
system unitary action with the decoded Pauli string on random states.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from . import kernels
from .circuit_ir import TERMINAL_KINDS, Circuit, Gate, expand_macro
from .pauli import PauliString, pauli_apply
from .select_synth import (
    SelectionLayout,
    decode_index,
    synth_select_general,
    synth_select_k2,
)

__all__ = [
    "MAX_DENSE_QUBITS",
    "MAX_UNITARY_QUBITS",
    "GATE_1Q",
    "zero_state",
    "basis_state",
    "random_state",
    "apply_circuit",
    "unitary_of",
    "apply_classical_control",
    "verify_select",
]

MAX_DENSE_QUBITS = 24
MAX_UNITARY_QUBITS = 12

_SQ2 = 1.0 / np.sqrt(2.0)
_C8 = np.cos(np.pi / 8)
_S8 = np.sin(np.pi / 8)

GATE_1Q = {
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=np.complex128),
    "S": np.array([[1, 0], [0, 1j]], dtype=np.complex128),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=np.complex128),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=np.complex128),
    "Tdg": np.array([[1, 0], [0, np.exp(-1j * np.pi / 4)]], dtype=np.complex128),
    "A": np.array([[_C8, _S8], [-_S8, _C8]], dtype=np.complex128),
    "Adg": np.array([[_C8, -_S8], [_S8, _C8]], dtype=np.complex128),
}

# phase picked up by a set selection bit under a diagonal gate
_SEL_PHASE = {
    "Z": -1.0 + 0j,
    "S": 1j,
    "Sdg": -1j,
    "T": np.exp(1j * np.pi / 4),
    "Tdg": np.exp(-1j * np.pi / 4),
}


def zero_state(n_qubits: int) -> np.ndarray:
    state = np.zeros(1 << n_qubits, dtype=np.complex128)
    state[0] = 1.0
    return state


def basis_state(n_qubits: int, index: int) -> np.ndarray:
    state = np.zeros(1 << n_qubits, dtype=np.complex128)
    state[index] = 1.0
    return state


def random_state(n_qubits: int, rng=None) -> np.ndarray:
    """Haar-ish random state: normalized complex Gaussian amplitudes."""
    if rng is None or isinstance(rng, int):
        rng = np.random.default_rng(rng)
    amps = rng.standard_normal(1 << n_qubits) + 1j * rng.standard_normal(1 << n_qubits)
    return amps / np.linalg.norm(amps)


def _terminal_stream(gates: Iterable[Gate]) -> Iterator[Gate]:
    stack = list(gates)
    stack.reverse()
    while stack:
        g = stack.pop()
        if g.kind in TERMINAL_KINDS:
            yield g
        else:
            expansion = expand_macro(g)
            stack.extend(reversed(expansion))


def apply_circuit(c: Circuit, state: np.ndarray) -> np.ndarray:
    """Run the circuit on a full statevector (macros expand on the fly)."""
    n = c.n_qubits
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"{n} qubits exceeds the dense cap of {MAX_DENSE_QUBITS}")
    amps = np.array(state, dtype=np.complex128)
    if amps.shape != (1 << n,):
        raise ValueError(f"state must have {1 << n} amplitudes")
    for g in _terminal_stream(c.gates):
        if len(g.qubits) == 1:
            kernels.apply_one_qubit(amps, n, g.qubits[0], GATE_1Q[g.kind])
        else:
            ctrl, tgt = g.qubits
            kernels.apply_controlled_one_qubit(amps, n, ctrl, tgt, GATE_1Q[g.kind[1:]])
    return amps


def _mix_rows(arr: np.ndarray, r0: np.ndarray, r1: np.ndarray, mat: np.ndarray) -> None:
    top = arr[r0].copy()
    bot = arr[r1]
    arr[r0] = mat[0, 0] * top + mat[0, 1] * bot
    arr[r1] = mat[1, 0] * top + mat[1, 1] * bot


def _apply_rows(arr: np.ndarray, n: int, g: Gate, idx: np.ndarray) -> None:
    """Terminal gate on the row dimension of a stacked array of states."""
    if len(g.qubits) == 1:
        q = g.qubits[0]
        tbit = 1 << (n - 1 - q)
        r0 = idx[(idx & tbit) == 0]
        _mix_rows(arr, r0, r0 | tbit, GATE_1Q[g.kind])
    else:
        ctrl, tgt = g.qubits
        cbit = 1 << (n - 1 - ctrl)
        tbit = 1 << (n - 1 - tgt)
        r0 = idx[((idx & cbit) != 0) & ((idx & tbit) == 0)]
        _mix_rows(arr, r0, r0 | tbit, GATE_1Q[g.kind[1:]])


def unitary_of(c: Circuit) -> np.ndarray:
    """Dense unitary of the circuit (small circuits only)."""
    n = c.n_qubits
    if n > MAX_UNITARY_QUBITS:
        raise ValueError(f"{n} qubits exceeds the unitary cap of {MAX_UNITARY_QUBITS}")
    dim = 1 << n
    mat = np.eye(dim, dtype=np.complex128)
    idx = np.arange(dim)
    for g in _terminal_stream(c.gates):
        _apply_rows(mat, n, g, idx)
    return mat


# ---------------------------------------------------------------------------
# Classical tracking of selection qubits
# ---------------------------------------------------------------------------


def _walk(
    gates: Iterable[Gate],
    bits: dict[int, int],
    sel: set[int],
    on_1q: Callable[[int, str], None],
    on_2q: Callable[[int, int, str], None],
) -> complex:
    """Play a circuit with the ``sel`` qubits held classical.

    Selection qubits may only see bit flips, diagonal phases, and
    controls; anything else raises.  Returns the accumulated global
    phase, mutating ``bits`` along the way.
    """
    phase = 1.0 + 0j
    for g in _terminal_stream(gates):
        qs = g.qubits
        kind = g.kind
        if len(qs) == 1:
            (q,) = qs
            if q not in sel:
                on_1q(q, kind)
                continue
            b = bits[q]
            if kind == "X":
                bits[q] = b ^ 1
            elif kind == "Y":
                bits[q] = b ^ 1
                phase *= 1j if b == 0 else -1j
            elif kind in _SEL_PHASE:
                if b:
                    phase *= _SEL_PHASE[kind]
            else:
                raise ValueError(f"cannot track {kind} on a selection qubit")
            continue
        ctrl, tgt = qs
        if kind == "CZ":
            if ctrl in sel and tgt in sel:
                if bits[ctrl] and bits[tgt]:
                    phase *= -1.0
            elif ctrl in sel:
                if bits[ctrl]:
                    on_1q(tgt, "Z")
            elif tgt in sel:
                if bits[tgt]:
                    on_1q(ctrl, "Z")
            else:
                on_2q(ctrl, tgt, kind)
        elif ctrl in sel:
            if tgt in sel:
                if not bits[ctrl]:
                    continue
                if kind == "CX":
                    bits[tgt] ^= 1
                else:  # CY
                    phase *= 1j if bits[tgt] == 0 else -1j
                    bits[tgt] ^= 1
            elif bits[ctrl]:
                on_1q(tgt, kind[1:])
        elif tgt in sel:
            raise ValueError(f"cannot track a system-controlled {kind} onto a selection qubit")
        else:
            on_2q(ctrl, tgt, kind)
    return phase


def _selection_qubits(c: Circuit) -> tuple[tuple[int, ...], list[int]]:
    system = c.register_labels.get("system")
    if system is None:
        raise ValueError("circuit has no 'system' register label")
    sys_set = set(system)
    sel = [q for q in range(c.n_qubits) if q not in sys_set]
    return system, sel


def _bits_of(word: int, sel: list[int]) -> dict[int, int]:
    width = len(sel)
    return {q: (word >> (width - 1 - r)) & 1 for r, q in enumerate(sel)}


def apply_classical_control(
    c: Circuit, selection_bits: int, system_state: np.ndarray
) -> tuple[complex, np.ndarray]:
    """Act on the system register with the selection register classical.

    ``selection_bits`` packs the selection qubits most significant
    first.  Returns ``(phase, state)``; raises if the circuit would ever
    put a selection qubit into superposition or fails to restore it.
    """
    system, sel = _selection_qubits(c)
    width = len(sel)
    if not 0 <= selection_bits < (1 << width):
        raise ValueError(f"selection word needs {width} bits")
    n_sys = len(system)
    state = np.array(system_state, dtype=np.complex128)
    if state.shape != (1 << n_sys,):
        raise ValueError(f"system state must have {1 << n_sys} amplitudes")
    pos = {q: i for i, q in enumerate(system)}

    def on_1q(q: int, kind: str) -> None:
        kernels.apply_one_qubit(state, n_sys, pos[q], GATE_1Q[kind])

    def on_2q(ctrl: int, tgt: int, kind: str) -> None:
        kernels.apply_controlled_one_qubit(state, n_sys, pos[ctrl], pos[tgt], GATE_1Q[kind[1:]])

    bits = _bits_of(selection_bits, sel)
    phase = _walk(c.gates, bits, set(sel), on_1q, on_2q)
    if bits != _bits_of(selection_bits, sel):
        raise ValueError("selection register was not restored")
    return phase, state


def verify_select(
    n: int,
    k: int,
    variant: str = "star",
    trials: int = 20,
    seed: int = 1,
    tol: float = 1e-9,
    words: Optional[Iterable[int]] = None,
) -> dict:
    """Check a synthesized SELECT against the Pauli oracle, state by state.

    For every valid selection word (or the given ``words``), plays the
    circuit with classical selection bits on a batch of random system
    states and compares with ``pauli_apply`` of the decoded string.

    Returns a report dict with the worst amplitude error and a boolean
    ``pass``.
    """
    if k == 2:
        layout = SelectionLayout(n, 2, "k2")
        circuit = synth_select_k2(n, variant)
    else:
        layout = SelectionLayout(n, k, "general")
        circuit = synth_select_general(n, k, variant)
    system, sel = _selection_qubits(circuit)
    n_sys = len(system)
    pos = {q: i for i, q in enumerate(system)}
    rng = np.random.default_rng(seed)
    dim = 1 << n_sys
    base = rng.standard_normal((dim, trials)) + 1j * rng.standard_normal((dim, trials))
    base /= np.linalg.norm(base, axis=0, keepdims=True)
    idx = np.arange(dim)
    gates = list(_terminal_stream(circuit.gates))

    max_error = 0.0
    states_checked = 0
    for word in layout.valid_states() if words is None else words:
        target = decode_index(word, layout)
        batch = base.copy()

        def on_1q(q: int, kind: str) -> None:
            _apply_rows(batch, n_sys, Gate(kind, (pos[q],)), idx)

        def on_2q(ctrl: int, tgt: int, kind: str) -> None:
            _apply_rows(batch, n_sys, Gate(kind, (pos[ctrl], pos[tgt])), idx)

        bits = _bits_of(word, sel)
        phase = _walk(gates, bits, set(sel), on_1q, on_2q)
        if bits != _bits_of(word, sel):
            raise ValueError("selection register was not restored")
        batch *= phase
        for t in range(trials):
            expected = pauli_apply(target, base[:, t])
            err = float(np.abs(batch[:, t] - expected).max())
            if err > max_error:
                max_error = err
        states_checked += 1
    return {
        "n": n,
        "k": k,
        "variant": variant,
        "states_checked": states_checked,
        "trials": trials,
        "max_error": max_error,
        "pass": bool(max_error <= tol),
    }
