"""Pauli-string algebra and the Jordan-Wigner fermion-to-qubit transform.

Conventions used throughout the package:

* Qubit 0 is the leftmost tensor factor and the most significant bit of a
  basis-state index.
* A Pauli string stores its scalar prefactor as an exponent of i, so a
  ``PauliString`` represents the operator ``i**phase * (letters[0] ⊗
  letters[1] ⊗ ...)``.
* Orbital p lives on qubit p, and the transform sends

      a_p   ->  Z_0 .. Z_{p-1} (X_p + i Y_p) / 2
      a†_p  ->  Z_0 .. Z_{p-1} (X_p - i Y_p) / 2
      n_p   ->  (I - Z_p) / 2

``pauli_apply`` is the reference oracle the rest of the package is tested
against; it is a direct vectorized implementation of the flip/phase action
of a Pauli string and deliberately shares no code with the circuit
simulator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

__all__ = [
    "PauliString",
    "PauliLCU",
    "Raise",
    "Lower",
    "Number",
    "FermionTerm",
    "FermionHamiltonian",
    "identity_string",
    "pauli_mul",
    "pauli_apply",
    "jw_transform_term",
    "jw_transform",
]

_TOL = 1e-12

# (a, b) -> (a*b letter, power of i picked up).  Products follow the cyclic
# rule X*Y = iZ and friends.
_SINGLE_MUL = {
    ("I", "I"): ("I", 0), ("I", "X"): ("X", 0), ("I", "Y"): ("Y", 0), ("I", "Z"): ("Z", 0),
    ("X", "I"): ("X", 0), ("X", "X"): ("I", 0), ("X", "Y"): ("Z", 1), ("X", "Z"): ("Y", 3),
    ("Y", "I"): ("Y", 0), ("Y", "X"): ("Z", 3), ("Y", "Y"): ("I", 0), ("Y", "Z"): ("X", 1),
    ("Z", "I"): ("Z", 0), ("Z", "X"): ("Y", 1), ("Z", "Y"): ("X", 3), ("Z", "Z"): ("I", 0),
}


@dataclass(frozen=True)
class PauliString:
    """A signed multi-qubit Pauli operator.

    ``letters`` is a word over IXYZ with one letter per qubit; ``phase`` is
    the exponent of i in the scalar prefactor, reduced mod 4.
    """

    letters: str
    phase: int = 0

    def __post_init__(self) -> None:
        bad = set(self.letters) - set("IXYZ")
        if bad:
            raise ValueError(f"invalid Pauli letters {sorted(bad)} in {self.letters!r}")
        object.__setattr__(self, "phase", self.phase % 4)

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def coefficient(self) -> complex:
        return 1j ** self.phase

    @property
    def weight(self) -> int:
        return sum(1 for ch in self.letters if ch != "I")

    def dagger(self) -> "PauliString":
        return PauliString(self.letters, (-self.phase) % 4)

    def __str__(self) -> str:
        sign = ("+", "+i", "-", "-i")[self.phase]
        return sign + self.letters


def identity_string(n: int) -> PauliString:
    return PauliString("I" * n, 0)


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Operator product a·b (matrix product, a applied after b)."""
    if len(a.letters) != len(b.letters):
        raise ValueError("cannot multiply Pauli strings of different lengths")
    phase = a.phase + b.phase
    out = []
    for la, lb in zip(a.letters, b.letters):
        letter, k = _SINGLE_MUL[(la, lb)]
        out.append(letter)
        phase += k
    return PauliString("".join(out), phase % 4)


def _parity(v: np.ndarray) -> np.ndarray:
    """Bitwise parity of each entry of an integer array."""
    v = v.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> shift
    return (v & 1).astype(bool)


def pauli_apply(p: PauliString, amps: np.ndarray) -> np.ndarray:
    """Apply a Pauli string to a statevector (reference oracle).

    Every string acts by a bit flip plus a diagonal phase, so the full
    action is one fancy-indexed copy:

        P |b> = i**phase * i**(#Y) * (-1)^(b . yz_mask) |b XOR flip_mask>

    Args:
        p: the Pauli string to apply.
        amps: statevector of length 2**n, qubit 0 most significant.

    Returns:
        A new statevector; the input is not modified.
    """
    n = p.n_qubits
    amps = np.asarray(amps, dtype=np.complex128)
    if amps.shape != (1 << n,):
        raise ValueError(f"state has shape {amps.shape}, expected ({1 << n},)")
    flip = 0
    diag = 0
    n_y = 0
    for j, letter in enumerate(p.letters):
        bit = 1 << (n - 1 - j)
        if letter in ("X", "Y"):
            flip |= bit
        if letter in ("Y", "Z"):
            diag |= bit
        if letter == "Y":
            n_y += 1
    idx = np.arange(1 << n, dtype=np.int64)
    coeff = (1j ** ((p.phase + n_y) % 4)) * np.where(_parity(idx & diag), -1.0, 1.0)
    out = np.empty_like(amps)
    out[idx ^ flip] = coeff * amps
    return out


# ---------------------------------------------------------------------------
# Fermionic terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Raise:
    orbital: int


@dataclass(frozen=True)
class Lower:
    orbital: int


@dataclass(frozen=True)
class Number:
    orbital: int


Factor = Union[Raise, Lower, Number]


@dataclass(frozen=True)
class FermionTerm:
    """A coefficient times a product of ladder/number operators.

    ``include_hc`` means the term stands for itself plus its Hermitian
    conjugate.  Ladder factors must appear as canonically ordered pairs:
    within each pair the first orbital index is strictly smaller, and with
    two pairs the first pair's indices all precede the second's.
    """

    coefficient: complex
    factors: tuple[Factor, ...]
    include_hc: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(self.factors))

    def orbitals(self) -> set[int]:
        return {f.orbital for f in self.factors}


@dataclass(frozen=True)
class FermionHamiltonian:
    """A sum of fermionic terms on ``n_orbitals`` modes.

    ``k`` is the interaction order bound used by the circuit encoder: no
    term may touch more than k distinct orbitals.
    """

    n_orbitals: int
    k: int
    terms: tuple[FermionTerm, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.k < 2 or self.k % 2:
            raise ValueError(f"interaction order k must be even and >= 2, got {self.k}")
        for t in self.terms:
            if len(t.orbitals()) > self.k:
                raise ValueError(
                    f"term touches {len(t.orbitals())} orbitals, exceeding k={self.k}"
                )


@dataclass(frozen=True)
class PauliLCU:
    """A linear combination of unitaries: sum_j alpha_j * P_j.

    Every alpha is strictly positive and every string phase is +1 or -1
    (exponent 0 or 2); signs live in the string phases.
    """

    n_qubits: int
    entries: tuple[tuple[float, PauliString], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        for alpha, ps in self.entries:
            if alpha <= 0:
                raise ValueError(f"alpha must be positive, got {alpha}")
            if ps.phase not in (0, 2):
                raise ValueError(f"LCU entry phase must be +/-1, got i^{ps.phase}")
            if ps.n_qubits != self.n_qubits:
                raise ValueError("entry length does not match n_qubits")

    @property
    def total_alpha(self) -> float:
        return sum(alpha for alpha, _ in self.entries)


def _validate_term(term: FermionTerm, n: int) -> None:
    for f in term.factors:
        if not 0 <= f.orbital < n:
            raise ValueError(f"orbital {f.orbital} out of range for n={n}")
    ladders = [f for f in term.factors if isinstance(f, (Raise, Lower))]
    if len(ladders) not in (0, 2, 4):
        raise ValueError(
            f"expected 0, 2 or 4 ladder factors per term, got {len(ladders)}"
        )
    pairs = [tuple(ladders[i : i + 2]) for i in range(0, len(ladders), 2)]
    for first, second in pairs:
        if first.orbital >= second.orbital:
            raise ValueError(
                "non-canonical ladder pair: indices must be strictly increasing "
                f"(got {first.orbital}, {second.orbital}); rewrite via the "
                "Hermitian conjugate"
            )
        if isinstance(first, Lower) and isinstance(second, Raise):
            raise ValueError(
                "non-canonical ladder pair a a†: rewrite using a†a and n"
            )
    if len(pairs) == 2 and pairs[0][1].orbital >= pairs[1][0].orbital:
        raise ValueError(
            "non-canonical pair ordering: first pair must precede second"
        )


def _ladder_image(p: int, n: int, raising: bool) -> dict[str, complex]:
    base = "Z" * p
    tail = "I" * (n - p - 1)
    y_coeff = -0.5j if raising else 0.5j
    return {base + "X" + tail: 0.5, base + "Y" + tail: y_coeff}


def _number_image(p: int, n: int) -> dict[str, complex]:
    z = "I" * p + "Z" + "I" * (n - p - 1)
    return {"I" * n: 0.5, z: -0.5}


def _sum_mul(a: dict[str, complex], b: dict[str, complex]) -> dict[str, complex]:
    out: dict[str, complex] = {}
    for la, ca in a.items():
        for lb, cb in b.items():
            phase = 0
            letters = []
            for x, y in zip(la, lb):
                letter, k = _SINGLE_MUL[(x, y)]
                letters.append(letter)
                phase += k
            key = "".join(letters)
            out[key] = out.get(key, 0.0) + ca * cb * (1j ** (phase % 4))
    return out


def _term_expansion(term: FermionTerm, n: int) -> dict[str, complex]:
    _validate_term(term, n)
    acc: dict[str, complex] = {"I" * n: complex(term.coefficient)}
    for f in term.factors:
        if isinstance(f, Raise):
            image = _ladder_image(f.orbital, n, raising=True)
        elif isinstance(f, Lower):
            image = _ladder_image(f.orbital, n, raising=False)
        else:
            image = _number_image(f.orbital, n)
        acc = _sum_mul(acc, image)
    if term.include_hc:
        # bare letter-strings are Hermitian, so conjugating coefficients
        # conjugates the whole operator
        acc = {letters: c + c.conjugate() for letters, c in acc.items()}
    return acc


def _collect(acc: dict[str, complex], n: int) -> PauliLCU:
    scale = max([abs(c) for c in acc.values()], default=1.0)
    entries = []
    for letters in sorted(acc):
        c = acc[letters]
        if abs(c) < _TOL:
            continue
        if abs(c.imag) > _TOL * max(1.0, scale):
            raise ValueError(
                "expansion has a non-real coefficient "
                f"({c:.3g} on {letters}); the input is not Hermitian — "
                "ladder terms need include_hc"
            )
        alpha = abs(c.real)
        phase = 0 if c.real > 0 else 2
        entries.append((alpha, PauliString(letters, phase)))
    return PauliLCU(n, tuple(entries))


def jw_transform_term(term: FermionTerm, n: int) -> PauliLCU:
    """Transform a single Hermitian fermionic term into a Pauli LCU.

    Args:
        term: a canonical fermionic term (see FermionTerm).  The term must
            be Hermitian, either intrinsically (number products) or via
            ``include_hc``.
        n: total number of orbitals / qubits.

    Returns:
        PauliLCU with positive alphas, signs pushed into string phases and
        entries sorted by letters.  Coefficients below 1e-12 are dropped.
    """
    return _collect(_term_expansion(term, n), n)


def jw_transform(h: FermionHamiltonian) -> PauliLCU:
    """Transform a fermionic Hamiltonian; like-strings are merged."""
    acc: dict[str, complex] = {}
    for term in h.terms:
        for letters, c in _term_expansion(term, h.n_orbitals).items():
            acc[letters] = acc.get(letters, 0.0) + c
    return _collect(acc, h.n_orbitals)
