"""Gate IR: macro lowering, scheduling, controls, inversion, emission.

Macro references are built as explicit permutation/diagonal matrices,
not from the package's own expansions.
"""

import numpy as np
import pytest

from fermiselect.circuit_ir import (
    Circuit,
    Gate,
    MACRO_KINDS,
    TERMINAL_KINDS,
    add_global_controls,
    asap_layers,
    chain_depth,
    compose,
    count_extension_points,
    emit_text,
    expand_macro,
    inverse,
    lower_macros,
    schedule,
)
from fermiselect.simulator import unitary_of

from conftest import permutation_matrix


def ref_ccz():
    m = np.eye(8, dtype=complex)
    m[7, 7] = -1
    return m


def ref_toffoli():
    return permutation_matrix(3, lambda b: [b[0], b[1], b[2] ^ (b[0] & b[1])])


def ref_cswap():
    def fn(b):
        if b[0]:
            b[1], b[2] = b[2], b[1]
        return b

    return permutation_matrix(3, fn)


def ref_cswap_star():
    m = ref_cswap()
    m[4, 4] = -1  # |100> picks up a sign
    return m


def ref_swap():
    return permutation_matrix(2, lambda b: [b[1], b[0]])


def ref_cs(sign):
    return np.diag([1, 1, 1, 1j * sign]).astype(complex)


MACRO_REFS = {
    "CCZ": ((0, 1, 2), ref_ccz()),
    "TOFFOLI": ((0, 1, 2), ref_toffoli()),
    "CSWAP": ((0, 1, 2), ref_cswap()),
    "CSWAP_STAR": ((0, 1, 2), ref_cswap_star()),
    "SWAP": ((0, 1), ref_swap()),
    "CS": ((0, 1), ref_cs(+1)),
    "CSdg": ((0, 1), ref_cs(-1)),
}


@pytest.mark.parametrize("kind", sorted(MACRO_REFS))
def test_macro_unitary(kind):
    qubits, ref = MACRO_REFS[kind]
    c = Circuit(len(qubits))
    c.add(kind, *qubits)
    lowered = lower_macros(c)
    assert not ({g.kind for g in lowered.gates} & MACRO_KINDS)
    assert np.abs(unitary_of(lowered) - ref).max() < 1e-12


@pytest.mark.parametrize(
    "kind,t_count,t_depth",
    [("CCZ", 7, 4), ("TOFFOLI", 7, 4), ("CSWAP", 7, 4), ("CSWAP_STAR", 4, 4),
     ("CS", 3, 2), ("CSdg", 3, 2), ("SWAP", 0, 0)],
)
def test_macro_costs(kind, t_count, t_depth):
    c = Circuit(3)
    c.add(kind, *range(2 if kind in ("CS", "CSdg", "SWAP") else 3))
    rep = schedule(lower_macros(c))
    assert rep.t_count == t_count
    assert rep.t_depth == t_depth


def test_macro_expansion_is_one_step():
    g = Gate("CSWAP", (0, 1, 2))
    kinds = [h.kind for h in expand_macro(g)]
    assert kinds == ["CX", "TOFFOLI", "CX"]


@pytest.mark.parametrize("kind", sorted(MACRO_REFS))
def test_inverse_of_macros(kind):
    qubits, ref = MACRO_REFS[kind]
    c = Circuit(len(qubits))
    c.add(kind, *qubits)
    assert np.abs(unitary_of(inverse(c)) - ref.conj().T).max() < 1e-12


def test_inverse_reverses_and_conjugates(rng):
    c = Circuit(3)
    for kind, qs in [("H", (0,)), ("T", (1,)), ("CX", (0, 2)), ("S", (2,)),
                     ("A", (1,)), ("CY", (2, 1)), ("Sdg", (0,)), ("CZ", (0, 1))]:
        c.add(kind, *qs)
    u = unitary_of(c)
    v = unitary_of(inverse(c))
    assert np.abs(u @ v - np.eye(8)).max() < 1e-12


def test_pure_clifford_t_removes_a_gates():
    c = Circuit(3)
    c.add("CSWAP_STAR", 0, 1, 2)
    c.add("A", 0)
    c.add("Adg", 2)
    lowered = lower_macros(c, pure_clifford_t=True)
    kinds = {g.kind for g in lowered.gates}
    assert not kinds & {"A", "Adg"}
    assert not kinds & MACRO_KINDS
    # global phases of the A-rewrites cancel pairwise, so the unitary matches
    assert np.abs(unitary_of(lowered) - unitary_of(lower_macros(c))).max() < 1e-12


def test_schedule_rejects_macros():
    c = Circuit(3)
    c.add("TOFFOLI", 0, 1, 2)
    with pytest.raises(ValueError, match="lowered"):
        schedule(c)


def test_asap_layers_basic():
    c = Circuit(3)
    c.add("H", 0)
    c.add("H", 1)
    c.add("CX", 0, 1)
    c.add("X", 2)
    assert asap_layers(c) == [1, 1, 2, 1]


def test_chain_depth_ignores_other_kinds():
    c = Circuit(2)
    c.add("T", 0)
    c.add("H", 0)
    c.add("T", 0)
    c.add("T", 1)
    assert chain_depth(c, {"T"}) == 2
    assert chain_depth(c, {"H"}) == 1


def test_schedule_counts():
    c = Circuit(2)
    c.add("T", 0)
    c.add("H", 1)
    c.add("CX", 0, 1)
    c.add("Tdg", 1)
    rep = schedule(c)
    assert rep.t_count == 2 and rep.t_depth == 2
    assert rep.clifford_count == 2 and rep.total_qubits == 2


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("XX", (0,))
    with pytest.raises(ValueError):
        Gate("CX", (0,))  # wrong arity
    with pytest.raises(ValueError):
        Gate("CX", (1, 1))  # duplicate qubits
    with pytest.raises(ValueError):
        Gate("X", (-1,))
    c = Circuit(2)
    with pytest.raises(ValueError):
        c.add("X", 5)


def test_compose_embeds_and_keeps_labels():
    a = Circuit(3, [], {"main": (0, 1, 2)})
    b = Circuit(2)
    b.add("CX", 0, 1)
    out = compose(a, b, [2, 0])
    assert out.gates[-1].qubits == (2, 0)
    assert out.register_labels == {"main": (0, 1, 2)}
    with pytest.raises(ValueError):
        compose(a, b, [0])  # wrong map length


def test_compose_preserves_extension_markers():
    b = Circuit(1)
    b.add("Z", 0, control_extension_point=True)
    out = compose(Circuit(2), b, [1])
    assert out.gates[0].control_extension_point


# --- global controls -------------------------------------------------------


def controlled(ref: np.ndarray, num_controls: int) -> np.ndarray:
    dim = ref.shape[0]
    total = dim << num_controls
    out = np.eye(total, dtype=complex)
    out[-dim:, -dim:] = ref
    return out


@pytest.mark.parametrize("num_controls", [1, 2])
@pytest.mark.parametrize(
    "kind,qubits",
    [("Z", (0,)), ("CZ", (0, 1)), ("CX", (0, 1)), ("CY", (0, 1))],
)
def test_add_global_controls_on_marked_gate(kind, qubits, num_controls):
    # one idle qubit: two-control extensions borrow a spare wire, which
    # SELECT circuits always have
    width = max(qubits) + 2
    c = Circuit(width, [], {"payload": tuple(range(width))})
    c.add(kind, *qubits, control_extension_point=True)
    cc = add_global_controls(c, num_controls)
    assert cc.register_labels["ctrl"] == tuple(range(num_controls))
    assert cc.register_labels["payload"] == tuple(
        q + num_controls for q in range(width)
    )
    base = Circuit(width)
    base.add(kind, *qubits)
    ref = controlled(unitary_of(base), num_controls)
    assert np.abs(unitary_of(cc) - ref).max() < 1e-12


@pytest.mark.parametrize("kind,qubits", [("CCZ", (0, 1, 2)), ("TOFFOLI", (0, 1, 2)),
                                         ("Sdg", (0,))])
def test_add_one_control_on_three_qubit_marked_gate(kind, qubits):
    width = max(qubits) + 2
    c = Circuit(width)
    c.add(kind, *qubits, control_extension_point=True)
    cc = add_global_controls(c, 1)
    base = Circuit(width)
    base.add(kind, *qubits)
    ref = controlled(unitary_of(base), 1)
    assert np.abs(unitary_of(cc) - ref).max() < 1e-12
    with pytest.raises(ValueError):
        add_global_controls(c, 2)


def test_unmarked_gates_untouched():
    c = Circuit(1)
    c.add("H", 0)
    cc = add_global_controls(c, 1)
    ref = np.kron(np.eye(2), unitary_of(c))
    assert np.abs(unitary_of(cc) - ref).max() < 1e-12


def test_phase_group_collapses_to_sdg():
    # the four-gate block X Sdg X Sdg realizes a global -i; controlled it
    # becomes a single Sdg / CSdg on the control(s)
    c = Circuit(2)
    for kind in ("X", "Sdg", "X", "Sdg"):
        c.add(kind, 0, control_extension_point=True, extension_group=0)
    assert np.abs(unitary_of(c) + 1j * np.eye(4)).max() < 1e-12
    one = add_global_controls(c, 1)
    assert np.abs(unitary_of(one) - controlled(-1j * np.eye(4), 1)).max() < 1e-12
    assert sum(1 for g in one.gates if g.kind == "Sdg") == 1
    two = add_global_controls(c, 2)
    assert np.abs(unitary_of(two) - controlled(-1j * np.eye(4), 2)).max() < 1e-12
    assert sum(1 for g in two.gates if g.kind == "CSdg") == 1


def test_count_extension_points_groups_once():
    c = Circuit(2)
    c.add("Z", 0, control_extension_point=True)
    c.add("X", 1, control_extension_point=True, extension_group=3)
    c.add("X", 1, control_extension_point=True, extension_group=3)
    c.add("CZ", 0, 1)
    assert count_extension_points(c) == 2


def test_add_global_controls_rejects_bad_count():
    c = Circuit(1)
    with pytest.raises(ValueError):
        add_global_controls(c, 0)
    with pytest.raises(ValueError):
        add_global_controls(c, 3)


# --- emission ---------------------------------------------------------------


def test_emit_text_golden():
    c = Circuit(1)
    c.add("X", 0)
    assert emit_text(c) == "qubits 1;\nx q[0];\n"


def test_emit_text_registers_and_gates():
    c = Circuit(3, [], {"addr": (0, 1), "data": (2,)})
    c.add("CX", 0, 2)
    c.add("Tdg", 1)
    text = emit_text(c)
    assert text.splitlines() == [
        "qubits 3;",
        "# addr: q[0..1]",
        "# data: q[2]",
        "cx q[0],q[2];",
        "tdg q[1];",
    ]


def test_emit_text_rejects_macros():
    c = Circuit(3)
    c.add("CSWAP", 0, 1, 2)
    with pytest.raises(ValueError):
        emit_text(c)
