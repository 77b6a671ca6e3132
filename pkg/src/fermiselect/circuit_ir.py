"""Gate-level circuit IR: kinds, macros, lowering, scheduling, emission.

Gates are stored flat with qubit tuples (controls first).  The terminal
alphabet is {X, Y, Z, H, S, Sdg, T, Tdg, A, Adg, CX, CY, CZ}; everything
else is a macro that ``lower_macros`` expands into terminals.  A is the
pi/8 Y-rotation [[cos, sin], [-sin, cos]](pi/8); it costs one T.

``asap_layers`` gives greedy ASAP layering.  ``schedule`` measures
T-depth and Clifford depth as longest dependency chains counting only
gates of the respective class, so Cliffords never pad T-depth.

``control_extension_point`` marks the gates of a SELECT circuit that gain
global controls; gates sharing an ``extension_group`` id transform as one
unit (used for the four-gate -i phase block, which collapses to a single
Sdg/CSdg on the controls).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional, Sequence

__all__ = [
    "Gate",
    "Circuit",
    "ResourceReport",
    "TERMINAL_KINDS",
    "MACRO_KINDS",
    "NON_CLIFFORD_KINDS",
    "compose",
    "inverse",
    "expand_macro",
    "lower_macros",
    "asap_layers",
    "schedule",
    "chain_depth",
    "count_extension_points",
    "add_global_controls",
    "emit_text",
]

_ARITY = {
    "X": 1, "Y": 1, "Z": 1, "H": 1, "S": 1, "Sdg": 1, "T": 1, "Tdg": 1,
    "A": 1, "Adg": 1,
    "CX": 2, "CY": 2, "CZ": 2, "SWAP": 2, "CS": 2, "CSdg": 2,
    "CSWAP": 3, "CSWAP_STAR": 3, "TOFFOLI": 3, "CCZ": 3,
}

TERMINAL_KINDS = frozenset(
    {"X", "Y", "Z", "H", "S", "Sdg", "T", "Tdg", "A", "Adg", "CX", "CY", "CZ"}
)
MACRO_KINDS = frozenset(_ARITY) - TERMINAL_KINDS
NON_CLIFFORD_KINDS = frozenset({"T", "Tdg", "A", "Adg"})

_INVERSE = {
    "S": "Sdg", "Sdg": "S", "T": "Tdg", "Tdg": "T",
    "A": "Adg", "Adg": "A", "CS": "CSdg", "CSdg": "CS",
}


@dataclass(frozen=True)
class Gate:
    """A single gate application; ``qubits`` lists controls first."""

    kind: str
    qubits: tuple[int, ...]
    control_extension_point: bool = False
    extension_group: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if self.kind not in _ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != _ARITY[self.kind]:
            raise ValueError(
                f"{self.kind} takes {_ARITY[self.kind]} qubits, got {self.qubits}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in {self.kind}{self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.kind}{self.qubits}")


@dataclass
class Circuit:
    """A flat gate list on ``n_qubits`` with optional named registers."""

    n_qubits: int
    gates: list[Gate] = field(default_factory=list)
    register_labels: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for g in self.gates:
            self._check(g)
        for name, qs in self.register_labels.items():
            self.register_labels[name] = tuple(qs)

    def _check(self, g: Gate) -> None:
        if any(q >= self.n_qubits for q in g.qubits):
            raise ValueError(
                f"gate {g.kind}{g.qubits} out of range for {self.n_qubits} qubits"
            )

    def add(self, kind: str, *qubits: int, **kw) -> None:
        g = Gate(kind, tuple(qubits), **kw)
        self._check(g)
        self.gates.append(g)

    def extend(self, gates: Iterable[Gate]) -> None:
        for g in gates:
            self._check(g)
            self.gates.append(g)


@dataclass(frozen=True)
class ResourceReport:
    t_count: int
    t_depth: int
    clifford_count: int
    clifford_depth: int
    total_qubits: int


def compose(a: Circuit, b: Circuit, qubit_map: Optional[Sequence[int]] = None) -> Circuit:
    """Append circuit b to a, with b's qubit i landing on qubit_map[i].

    With no map the circuits must have equal width.  Register labels of a
    are kept; b's are dropped (the host circuit owns the naming).
    """
    if qubit_map is None:
        if b.n_qubits != a.n_qubits:
            raise ValueError("word sizes differ; supply a qubit_map")
        qubit_map = range(a.n_qubits)
    qubit_map = tuple(qubit_map)
    if len(qubit_map) != b.n_qubits:
        raise ValueError(f"qubit_map length {len(qubit_map)} != {b.n_qubits}")
    if any(not 0 <= q < a.n_qubits for q in qubit_map):
        raise ValueError("qubit_map leaves the host circuit")
    out = Circuit(a.n_qubits, list(a.gates), dict(a.register_labels))
    for g in b.gates:
        out.gates.append(replace(g, qubits=tuple(qubit_map[q] for q in g.qubits)))
    return out


def inverse(c: Circuit) -> Circuit:
    """Reverse the gate list and invert each gate."""
    gates = [
        replace(g, kind=_INVERSE.get(g.kind, g.kind)) for g in reversed(c.gates)
    ]
    return Circuit(c.n_qubits, gates, dict(c.register_labels))


def _ccz_network(a: int, b: int, c: int) -> list[Gate]:
    # Seven-T phase-polynomial network for CCZ, ordered so that greedy
    # ASAP layering lands the T gates in exactly four layers:
    # {a,b,c} / {a^b, a^c} / {b^c} / {a^b^c}.
    g = Gate
    return [
        g("T", (a,)), g("T", (b,)), g("T", (c,)),
        g("CX", (b, c)),
        g("CX", (a, b)),
        g("CX", (b, c)),
        g("Tdg", (b,)), g("Tdg", (c,)),
        g("CX", (b, c)),
        g("Tdg", (c,)),
        g("CX", (a, c)),
        g("T", (c,)),
        g("CX", (b, c)),
        g("CX", (a, b)),
    ]


def expand_macro(g: Gate) -> Optional[list[Gate]]:
    """One expansion step for a macro gate; None if g is terminal."""
    k = g.kind
    q = g.qubits
    G = Gate
    if k in TERMINAL_KINDS:
        return None
    if k == "SWAP":
        a, b = q
        return [G("CX", (a, b)), G("CX", (b, a)), G("CX", (a, b))]
    if k == "CS":
        a, b = q
        return [G("T", (a,)), G("T", (b,)), G("CX", (a, b)), G("Tdg", (b,)), G("CX", (a, b))]
    if k == "CSdg":
        a, b = q
        return [G("Tdg", (a,)), G("Tdg", (b,)), G("CX", (a, b)), G("T", (b,)), G("CX", (a, b))]
    if k == "CCZ":
        return _ccz_network(*q)
    if k == "TOFFOLI":
        a, b, t = q
        return [G("H", (t,)), G("CCZ", (a, b, t)), G("H", (t,))]
    if k == "CSWAP":
        c, a, b = q
        return [G("CX", (b, a)), G("TOFFOLI", (c, a, b)), G("CX", (b, a))]
    if k == "CSWAP_STAR":
        c, a, b = q
        return [
            G("CX", (b, a)), G("A", (b,)), G("CX", (a, b)), G("A", (b,)),
            G("CX", (c, b)),
            G("Adg", (b,)), G("CX", (a, b)), G("Adg", (b,)), G("CX", (b, a)),
        ]
    raise AssertionError(f"no expansion for {k}")


def lower_macros(c: Circuit, pure_clifford_t: bool = False) -> Circuit:
    """Expand all macros into the terminal alphabet.

    With ``pure_clifford_t`` the A gates are further rewritten as
    S·H·T·H·Sdg (time order), which equals A only up to a global phase
    exp(i*pi/8); every built circuit is balanced in A/Adg so the phases
    cancel circuit-wide.  Extension markers are dropped: add controls
    before lowering, not after.
    """
    out: list[Gate] = []
    stack = list(reversed(c.gates))
    while stack:
        g = stack.pop()
        expansion = expand_macro(g)
        if expansion is not None:
            stack.extend(reversed(expansion))
            continue
        if pure_clifford_t and g.kind in ("A", "Adg"):
            (t,) = g.qubits
            mid = "T" if g.kind == "A" else "Tdg"
            out.extend(
                Gate(kk, (t,)) for kk in ("S", "H", mid, "H", "Sdg")
            )
            continue
        out.append(replace(g, control_extension_point=False, extension_group=None))
    return Circuit(c.n_qubits, out, dict(c.register_labels))


def asap_layers(c: Circuit) -> list[int]:
    """Greedy earliest layer (1-based) for each gate in list order."""
    last = [0] * c.n_qubits
    layers = []
    for g in c.gates:
        layer = 1 + max(last[q] for q in g.qubits)
        for q in g.qubits:
            last[q] = layer
        layers.append(layer)
    return layers


def schedule(c: Circuit) -> ResourceReport:
    """Count resources of a lowered circuit along dependency chains.

    T-count includes A/Adg (one T each).  Each depth is the longest path
    through the gate dependency graph counting only gates of that class:
    T-depth weights non-Cliffords 1 and Cliffords 0, Clifford depth the
    reverse.  Cliffords therefore never pad T-depth, matching how
    T-layers are batched in practice.
    """
    bad = {g.kind for g in c.gates} & MACRO_KINDS
    if bad:
        raise ValueError(f"schedule needs a lowered circuit; found {sorted(bad)}")
    t_chain = [0] * c.n_qubits
    c_chain = [0] * c.n_qubits
    t_count = 0
    c_count = 0
    for g in c.gates:
        non_clifford = g.kind in NON_CLIFFORD_KINDS
        if non_clifford:
            t_count += 1
        else:
            c_count += 1
        t_here = max(t_chain[q] for q in g.qubits) + (1 if non_clifford else 0)
        c_here = max(c_chain[q] for q in g.qubits) + (0 if non_clifford else 1)
        for q in g.qubits:
            t_chain[q] = t_here
            c_chain[q] = c_here
    return ResourceReport(
        t_count=t_count,
        t_depth=max(t_chain, default=0),
        clifford_count=c_count,
        clifford_depth=max(c_chain, default=0),
        total_qubits=c.n_qubits,
    )


def chain_depth(c: Circuit, kinds: Iterable[str]) -> int:
    """Longest dependency chain counting only gates of the given kinds.

    The staged-execution analogue of T-depth for arbitrary gate classes:
    gates outside ``kinds`` order the chain but add no weight.
    """
    want = set(kinds)
    depth = [0] * c.n_qubits
    for g in c.gates:
        d = max(depth[q] for q in g.qubits) + (1 if g.kind in want else 0)
        for q in g.qubits:
            depth[q] = d
    return max(depth, default=0)


def count_extension_points(c: Circuit) -> int:
    """Number of control-extension units (a marked group counts once)."""
    groups: set[int] = set()
    singles = 0
    for g in c.gates:
        if not g.control_extension_point:
            continue
        if g.extension_group is None:
            singles += 1
        else:
            groups.add(g.extension_group)
    return singles + len(groups)


def _borrow_for(qubits: set[int], n: int) -> int:
    for q in range(n):
        if q not in qubits:
            return q
    raise ValueError("no free qubit available as a borrow")


def _multi_controlled_x(controls: tuple[int, ...], target: int, n: int) -> list[Gate]:
    """CX / Toffoli / C3X on a dirty borrow, all exact permutations."""
    G = Gate
    if len(controls) == 1:
        return [G("CX", (controls[0], target))]
    if len(controls) == 2:
        return [G("TOFFOLI", (*controls, target))]
    if len(controls) == 3:
        c1, c2, c3 = controls
        w = _borrow_for({c1, c2, c3, target}, n)
        # two rounds through a borrowed qubit; its value is restored
        block = [G("TOFFOLI", (c1, c2, w)), G("TOFFOLI", (c3, w, target))]
        return block + block
    raise ValueError("more than three controls are not supported")


def _controlled_unit(g: Gate, controls: tuple[int, ...], n: int) -> list[Gate]:
    """Attach global controls to one marked gate (already index-shifted)."""
    G = Gate
    k = g.kind
    q = g.qubits
    nc = len(controls)
    if k == "Z":
        if nc == 1:
            return [G("CZ", (controls[0], q[0]))]
        return [G("CCZ", (*controls, q[0]))]
    if k == "Sdg":
        if nc == 1:
            return [G("CSdg", (controls[0], q[0]))]
        raise ValueError(
            "a doubly-controlled S† is not exactly expressible in "
            "ancilla-free Clifford+T; use a single control"
        )
    if k == "CZ":
        if nc == 1:
            return [G("CCZ", (controls[0], *q))]
        t = q[1]
        return [G("H", (t,))] + _multi_controlled_x((*controls, q[0]), t, n) + [G("H", (t,))]
    if k == "CX":
        return _multi_controlled_x((*controls, q[0]), q[1], n)
    if k == "CY":
        t = q[1]
        inner = _multi_controlled_x((*controls, q[0]), t, n)
        return [G("Sdg", (t,))] + inner + [G("S", (t,))]
    if k == "CCZ":
        t = q[2]
        if nc == 1:
            return (
                [G("H", (t,))]
                + _multi_controlled_x((controls[0], q[0], q[1]), t, n)
                + [G("H", (t,))]
            )
        raise ValueError("two controls on a doubly-controlled payload are not supported")
    if k == "TOFFOLI":
        if nc == 1:
            return _multi_controlled_x((controls[0], q[0], q[1]), q[2], n)
        raise ValueError("two controls on a doubly-controlled payload are not supported")
    raise ValueError(f"gate kind {k} cannot take a global control")


def add_global_controls(c: Circuit, num_controls: int) -> Circuit:
    """Prepend control qubits and control every marked extension unit.

    The input must be an unlowered SELECT circuit whose extension points
    are still marked.  One or two controls are supported; the four-gate
    phase block becomes Sdg on the control (one) or CSdg between the
    controls (two).
    """
    if num_controls not in (1, 2):
        raise ValueError("num_controls must be 1 or 2")
    nc = num_controls
    n = c.n_qubits + nc
    controls = tuple(range(nc))
    labels = {"ctrl": controls}
    for name, qs in c.register_labels.items():
        labels[name] = tuple(q + nc for q in qs)
    out = Circuit(n, [], labels)
    done_groups: set[int] = set()
    for g in c.gates:
        shifted = replace(
            g,
            qubits=tuple(q + nc for q in g.qubits),
            control_extension_point=False,
            extension_group=None,
        )
        if not g.control_extension_point:
            out.gates.append(shifted)
            continue
        if g.extension_group is not None:
            if g.extension_group in done_groups:
                continue
            done_groups.add(g.extension_group)
            # the phase block contributes a bare -i; controlled, that is
            # an S† on the control line(s)
            if nc == 1:
                out.gates.append(Gate("Sdg", (controls[0],)))
            else:
                out.gates.append(Gate("CSdg", controls))
            continue
        out.extend(_controlled_unit(shifted, controls, n))
    return out


def emit_text(c: Circuit) -> str:
    """Deterministic text form of a lowered circuit.

    One gate per line, ``kind q[i],q[j];`` with a ``qubits N;`` header and
    a comment line per named register.
    """
    bad = {g.kind for g in c.gates} & MACRO_KINDS
    if bad:
        raise ValueError(f"emit_text needs a lowered circuit; found {sorted(bad)}")
    lines = [f"qubits {c.n_qubits};"]
    for name, qs in c.register_labels.items():
        if qs and qs == tuple(range(qs[0], qs[0] + len(qs))):
            span = f"q[{qs[0]}..{qs[-1]}]" if len(qs) > 1 else f"q[{qs[0]}]"
        else:
            span = ",".join(f"q[{i}]" for i in qs)
        lines.append(f"# {name}: {span}")
    for g in c.gates:
        args = ",".join(f"q[{i}]" for i in g.qubits)
        lines.append(f"{g.kind.lower()} {args};")
    return "\n".join(lines) + "\n"
