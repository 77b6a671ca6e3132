"""Circuit gadgets: parity ladders, CNOT fanout, swap networks, injectors.

Register conventions: address registers are most-significant-bit first
(qubit 0 of the register is the highest address bit).  Gadgets that
combine an address with data lay qubits out as [address | flags | data]
and carry register labels so hosts can embed them with ``compose``.

The swap network ("swap-up") conditionally permutes data qubit x to
position 0 for address value x.  The plain variant uses exact controlled
swaps arranged in a toggle pattern: paired swap units borrow each other's
qubits as controls so the address bit only ever drives a log-depth CNOT
fanout, giving 2(n-1) controlled swaps per network for n >= 3.  The star
variant instead uses a cheaper controlled swap that is wrong by a -1
phase on one basis state; conjugation cancels the phases, so every
injector built from it is still exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

from .circuit_ir import Circuit, Gate, compose, inverse

__all__ = [
    "MultiSwapLayout",
    "GadgetSpec",
    "GADGETS",
    "address_bits",
    "ladder_cascade",
    "ladder_tree",
    "fanout_cnot",
    "multi_target_controlled_swap",
    "swap_up",
    "swap_up_star",
    "cswap_phase_incorrect",
    "select_q",
    "select_p",
    "inject",
    "inject_star_z",
    "inject_select_q",
    "inject_select_p",
]

_ONE_QUBIT_TERMINALS = {"X", "Y", "Z", "H", "S", "Sdg", "T", "Tdg", "A", "Adg"}


def address_bits(n: int) -> int:
    """Width of an address register for n data qubits (>= 1 for n = 2)."""
    if n < 2:
        raise ValueError(f"need at least two data qubits, got {n}")
    return (n - 1).bit_length()


def _check_variant(variant: str) -> bool:
    if variant not in ("plain", "star"):
        raise ValueError(f"variant must be 'plain' or 'star', got {variant!r}")
    return variant == "star"


# ---------------------------------------------------------------------------
# Parity ladders
# ---------------------------------------------------------------------------


def ladder_cascade(n: int) -> Circuit:
    """Linear-depth suffix-parity ladder: z_j -> z_j ^ z_{j+1} ^ ... ^ z_{n-1}."""
    c = Circuit(n)
    for j in range(n - 2, -1, -1):
        c.add("CX", j + 1, j)
    return c


def ladder_tree(n: int) -> Circuit:
    """Log-depth suffix-parity ladder, same GF(2) action as the cascade.

    Built as an up-sweep / down-sweep prefix tree over the next power of
    two, with gates touching out-of-range qubits dropped.  CX-depth is at
    most 2*ceil(log2 n).
    """
    c = Circuit(n)
    if n < 2:
        return c
    levels = address_bits(n)
    full = 1 << levels
    for d in range(1, levels + 1):
        half = 1 << (d - 1)
        for i in range(0, full, 1 << d):
            if i + half < n:
                c.add("CX", i + half, i)
    for d in range(levels - 1, 0, -1):
        half = 1 << (d - 1)
        for i in range(half, full, 1 << d):
            if i + half < n:
                c.add("CX", i + half, i)
    return c


# ---------------------------------------------------------------------------
# CNOT fanout without ancillas
# ---------------------------------------------------------------------------


def _fanout_gates(control: int, targets: Sequence[int]) -> list[Gate]:
    m = len(targets)
    if m == 0:
        return []
    if m == 1:
        return [Gate("CX", (control, targets[0]))]
    # Pair up the first m-1 targets; leaders take the control's value in a
    # recursive middle stage and spread it to their partners on the way
    # out.  Targets may hold arbitrary values throughout (dirty fanout).
    pairs = [(targets[i], targets[i + 1]) for i in range(0, m - 2, 2)]
    inner = [a for a, _ in pairs]
    if (m - 1) % 2:
        inner.append(targets[m - 2])
    spread = [Gate("CX", (a, b)) for a, b in pairs]
    first = spread + [Gate("CX", (control, targets[m - 1]))]
    return first + _fanout_gates(control, inner) + spread


def fanout_cnot(control: int, targets: Sequence[int], n_qubits: Optional[int] = None) -> Circuit:
    """CNOT from one control onto every target, CX-depth <= 2*ceil(log2(m+1)).

    Exactly equivalent to applying CX(control, t) for each target in any
    order; no ancillas, and intermediate target values may be dirty.
    """
    targets = list(targets)
    if control in targets:
        raise ValueError("control cannot be a fanout target")
    if len(set(targets)) != len(targets):
        raise ValueError("duplicate fanout target")
    if n_qubits is None:
        n_qubits = max([control, *targets]) + 1
    return Circuit(n_qubits, _fanout_gates(control, targets))


# ---------------------------------------------------------------------------
# Controlled swap networks
# ---------------------------------------------------------------------------


class MultiSwapLayout(NamedTuple):
    control: int
    pairs: tuple[tuple[int, int], ...]
    borrow: Optional[int]
    n_qubits: int


def _toggle_gates(
    control: int,
    pairs: Sequence[tuple[int, int]],
    borrow: Optional[int],
) -> list[Gate]:
    """Controlled SWAP on every pair, using at most four CSWAP layers.

    Swap units are processed two at a time: each unit's leading qubit
    serves as a dirty control for its partner, and the real control only
    drives CNOT fanouts onto those leading qubits.  An odd unit out is
    swapped through the external borrow when one is supplied (two CSWAPs)
    and directly off the control otherwise (one CSWAP).
    """
    m = len(pairs)
    gates: list[Gate] = []
    if m == 0:
        return gates
    duos = [(pairs[2 * s], pairs[2 * s + 1]) for s in range(m // 2)]
    single = pairs[-1] if m % 2 else None

    first = [Gate("CSWAP", (ua[0], *ub)) for ua, ub in duos]
    fan_to = [ua[0] for ua, _ in duos]
    if single is not None:
        if borrow is not None:
            first.append(Gate("CSWAP", (borrow, *single)))
            fan_to.append(borrow)
        else:
            gates.append(Gate("CSWAP", (control, *single)))
    fan = _fanout_gates(control, fan_to)
    gates += first + fan + first + fan

    if duos:
        second = [Gate("CSWAP", (ub[0], *ua)) for ua, ub in duos]
        fan = _fanout_gates(control, [ub[0] for _, ub in duos])
        gates += second + fan + second + fan
    return gates


def multi_target_controlled_swap(m: int, layout: Optional[MultiSwapLayout] = None) -> Circuit:
    """One control qubit conditionally swapping m disjoint qubit pairs.

    The default layout puts the control on qubit 0 and pair i on qubits
    (2i+1, 2i+2) with no borrow.  Emits 2m CSWAPs for even m, 2m-1 for odd
    m without a borrow, and exactly 2m when a borrow qubit is available.
    """
    if layout is None:
        if m < 1:
            raise ValueError("need at least one pair")
        layout = MultiSwapLayout(
            control=0,
            pairs=tuple((2 * i + 1, 2 * i + 2) for i in range(m)),
            borrow=None,
            n_qubits=2 * m + 1,
        )
    if len(layout.pairs) != m:
        raise ValueError(f"layout has {len(layout.pairs)} pairs, expected {m}")
    used = [layout.control, *[q for p in layout.pairs for q in p]]
    if layout.borrow is not None:
        used.append(layout.borrow)
    if len(set(used)) != len(used):
        raise ValueError("control, borrow and pair qubits must be disjoint")
    return Circuit(
        layout.n_qubits, _toggle_gates(layout.control, layout.pairs, layout.borrow)
    )


def _swap_levels(n: int) -> list[tuple[int, int, list[tuple[int, int]]]]:
    """(level bit j, pair count m, data index pairs) from the top level down."""
    bits = address_bits(n)
    levels = []
    for j in range(bits - 1, -1, -1):
        m = min(1 << j, n - (1 << j))
        levels.append((j, m, [(i, i + (1 << j)) for i in range(m)]))
    return levels


def _swap_up_labels(n: int) -> dict[str, tuple[int, ...]]:
    bits = address_bits(n)
    return {
        "address": tuple(range(bits)),
        "data": tuple(range(bits, bits + n)),
    }


def swap_up(n: int) -> Circuit:
    """Bring data qubit x to position 0, controlled on address value x.

    Qubits [0, bits) hold the address (MSB first), the rest the data.
    Level j (bit weight 2^j) conditionally swaps (i, i+2^j); odd levels
    borrow an idle address bit so the total is exactly 2(n-1) controlled
    swaps for every n >= 3.  n = 2 has no idle qubit and emits the single
    controlled swap.
    """
    bits = address_bits(n)
    c = Circuit(bits + n, [], _swap_up_labels(n))
    for j, m, data_pairs in _swap_levels(n):
        control = bits - 1 - j
        pairs = [(bits + a, bits + b) for a, b in data_pairs]
        borrow = None
        if m % 2 and bits >= 2:
            borrow = bits - 1 - ((j + 1) % bits)
        c.extend(_toggle_gates(control, pairs, borrow))
    return c


def swap_up_star(n: int) -> Circuit:
    """Swap network from phase-incorrect controlled swaps, n-1 of them.

    Each level fuses the per-pair halves of the cheap controlled swap and
    routes the shared control through one CNOT fanout, so level depth is
    O(log n) while the unitary stays the gate-for-gate product of
    phase-incorrect controlled swaps.  Only safe under conjugation.
    """
    bits = address_bits(n)
    c = Circuit(bits + n, [], _swap_up_labels(n))
    for j, _m, data_pairs in _swap_levels(n):
        control = bits - 1 - j
        pairs = [(bits + a, bits + b) for a, b in data_pairs]
        for a, b in pairs:
            c.extend(
                [Gate("CX", (b, a)), Gate("A", (b,)), Gate("CX", (a, b)), Gate("A", (b,))]
            )
        c.extend(_fanout_gates(control, [b for _, b in pairs]))
        for a, b in pairs:
            c.extend(
                [Gate("Adg", (b,)), Gate("CX", (a, b)), Gate("Adg", (b,)), Gate("CX", (b, a))]
            )
    return c


def cswap_phase_incorrect() -> Circuit:
    """Controlled swap up to a -1 phase on |100>: 4 T, no ancillas.

    Qubit 0 controls a swap of qubits 1 and 2; the unitary equals CSWAP
    except that |100> picks up a minus sign.
    """
    c = Circuit(3)
    c.extend(
        [
            Gate("CX", (2, 1)), Gate("A", (2,)), Gate("CX", (1, 2)), Gate("A", (2,)),
            Gate("CX", (0, 2)),
            Gate("Adg", (2,)), Gate("CX", (1, 2)), Gate("Adg", (2,)), Gate("CX", (2, 1)),
        ]
    )
    return c


# ---------------------------------------------------------------------------
# Payload selectors and injectors
# ---------------------------------------------------------------------------


def select_q() -> Circuit:
    """Two flag qubits (0, 1) pick sign and letter applied to qubit 2.

    Flag word ab maps to +Y, -Y, -X, +X for 00, 01, 10, 11: exactly the
    image of the signed Paulis +X, -X, +Y, -Y under X -> Y -> -X.  All
    four non-conjugation gates are control extension points.
    """
    c = Circuit(3)
    c.add("Z", 0, control_extension_point=True)
    c.add("Z", 1, control_extension_point=True)
    c.add("X", 0)
    c.add("CY", 0, 2, control_extension_point=True)
    c.add("X", 0)
    c.add("CX", 0, 2, control_extension_point=True)
    return c


def select_p() -> Circuit:
    """One flag qubit (0) picks X (flag 0) or Y (flag 1) on qubit 1."""
    c = Circuit(2)
    c.add("X", 0)
    c.add("CX", 0, 1, control_extension_point=True)
    c.add("X", 0)
    c.add("CY", 0, 1, control_extension_point=True)
    return c


def inject(u: str, n: int) -> Circuit:
    """Apply the one-qubit gate ``u`` to the addressed data qubit.

    Swap-network conjugation of ``u`` on data position 0: |x>|d> ->
    |x> U_x |d>.  The payload gate is the circuit's control extension
    point.
    """
    if u not in _ONE_QUBIT_TERMINALS:
        raise ValueError(f"payload must be a one-qubit terminal gate, got {u!r}")
    net = swap_up(n)
    c = Circuit(net.n_qubits, list(net.gates), dict(net.register_labels))
    c.add(u, address_bits(n), control_extension_point=True)
    c.extend(inverse(net).gates)
    return c


def inject_star_z(n: int) -> Circuit:
    """Addressed Z via the phase-incorrect network; exact by conjugation."""
    net = swap_up_star(n)
    c = Circuit(net.n_qubits, list(net.gates), dict(net.register_labels))
    c.add("Z", address_bits(n), control_extension_point=True)
    c.extend(inverse(net).gates)
    return c


def _star_block(c: Circuit, flag: int, data0: int, net: Circuit, open_on: bool) -> None:
    """Flag-controlled addressed-Z block in the star construction."""
    if open_on:
        c.add("X", flag)
    c.extend(net.gates)
    c.add("CZ", flag, data0, control_extension_point=True)
    c.extend(inverse(net).gates)
    if open_on:
        c.add("X", flag)


def _basis_change(c: Circuit, data: Sequence[int], to: str, forward: bool) -> None:
    """Map Z to X (to='X') or Z to Y (to='Y') on every data qubit.

    forward=True emits the change *into* the rotated frame (applied before
    the diagonal payload), forward=False the return trip.
    """
    for q in data:
        if to == "X":
            c.add("H", q)
        elif forward:
            c.add("Sdg", q)  # B_Y† = (S·H)†, time order Sdg then H
            c.add("H", q)
        else:
            c.add("H", q)
            c.add("S", q)


def inject_select_q(n: int, variant: str = "star") -> Circuit:
    """Signed X/Y on the addressed qubit, selected by two flag qubits.

    Layout: [address | flags a,b | data].  Flag word ab applies the image
    under X -> Y -> -X of the signed Pauli (+X, -X, +Y, -Y for ab = 00,
    01, 10, 11) at the addressed position.
    """
    star = _check_variant(variant)
    bits = address_bits(n)
    a, b = bits, bits + 1
    data = tuple(range(bits + 2, bits + 2 + n))
    labels = {"address": tuple(range(bits)), "flags": (a, b), "data": data}
    c = Circuit(bits + 2 + n, [], labels)
    c.add("Z", a, control_extension_point=True)
    c.add("Z", b, control_extension_point=True)
    if not star:
        net = swap_up(n)
        net_map = list(range(bits)) + list(data)
        c = compose(c, net, net_map)
        c.add("X", a)
        c.add("CY", a, data[0], control_extension_point=True)
        c.add("X", a)
        c.add("CX", a, data[0], control_extension_point=True)
        c = compose(c, inverse(net), net_map)
        return c
    net = swap_up_star(n)
    net_map = list(range(bits)) + list(data)
    embedded = compose(Circuit(c.n_qubits, [], labels), net, net_map)
    # a = 0 branch: Y payload, via the Z->Y frame
    _basis_change(c, data, "Y", forward=True)
    _star_block(c, a, data[0], embedded, open_on=True)
    _basis_change(c, data, "Y", forward=False)
    # a = 1 branch: X payload, via the Z->X frame
    _basis_change(c, data, "X", forward=True)
    _star_block(c, a, data[0], embedded, open_on=False)
    _basis_change(c, data, "X", forward=False)
    return c


def inject_select_p(n: int, variant: str = "star") -> Circuit:
    """Unsigned X (flag 0) or Y (flag 1) on the addressed qubit.

    Layout: [address | flag | data].
    """
    star = _check_variant(variant)
    bits = address_bits(n)
    flag = bits
    data = tuple(range(bits + 1, bits + 1 + n))
    labels = {"address": tuple(range(bits)), "flags": (flag,), "data": data}
    c = Circuit(bits + 1 + n, [], labels)
    net_map = list(range(bits)) + list(data)
    if not star:
        net = swap_up(n)
        c = compose(c, net, net_map)
        c.add("X", flag)
        c.add("CX", flag, data[0], control_extension_point=True)
        c.add("X", flag)
        c.add("CY", flag, data[0], control_extension_point=True)
        c = compose(c, inverse(net), net_map)
        return c
    net = swap_up_star(n)
    embedded = compose(Circuit(c.n_qubits, [], labels), net, net_map)
    _basis_change(c, data, "X", forward=True)
    _star_block(c, flag, data[0], embedded, open_on=True)
    _basis_change(c, data, "X", forward=False)
    _basis_change(c, data, "Y", forward=True)
    _star_block(c, flag, data[0], embedded, open_on=False)
    _basis_change(c, data, "Y", forward=False)
    return c


@dataclass(frozen=True)
class GadgetSpec:
    """A named gadget family: builder plus the registers it labels."""

    name: str
    build: Callable[[int], Circuit]
    registers: tuple[str, ...]


GADGETS: dict[str, GadgetSpec] = {
    "SwapUp": GadgetSpec("SwapUp", swap_up, ("address", "data")),
    "SwapUpStar": GadgetSpec("SwapUpStar", swap_up_star, ("address", "data")),
    "InjectZ": GadgetSpec("InjectZ", lambda n: inject("Z", n), ("address", "data")),
    "InjectZStar": GadgetSpec("InjectZStar", inject_star_z, ("address", "data")),
    "InjSelQ": GadgetSpec(
        "InjSelQ", lambda n: inject_select_q(n, "plain"), ("address", "flags", "data")
    ),
    "InjSelQStar": GadgetSpec(
        "InjSelQStar", lambda n: inject_select_q(n, "star"), ("address", "flags", "data")
    ),
    "InjSelP": GadgetSpec(
        "InjSelP", lambda n: inject_select_p(n, "plain"), ("address", "flags", "data")
    ),
    "InjSelPStar": GadgetSpec(
        "InjSelPStar", lambda n: inject_select_p(n, "star"), ("address", "flags", "data")
    ),
}
