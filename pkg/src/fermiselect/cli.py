"""Command-line front end.

Subcommands:

* ``transform``  — parse a fermionic Hamiltonian file, Jordan-Wigner
  transform it, and print the selection-encoded LCU table.
* ``synth``      — synthesize a SELECT circuit, lower it to one- and
  two-qubit gates, and print it in text form.
* ``resources``  — measure catalogued components against their
  closed-form costs and print a CSV.
* ``verify``     — run the state-by-state oracle check and print a JSON
  report; exit 1 when it fails.

Hamiltonian files hold one term per line, ``<re> <im> : <factor>...``
with factors ``adag p`` / ``a p`` / ``n p``, an optional trailing
``+hc``, and ``#`` comments.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .circuit_ir import emit_text, lower_macros
from .pauli import (
    FermionHamiltonian,
    FermionTerm,
    Lower,
    Number,
    Raise,
    jw_transform,
)
from .select_synth import SelectionLayout, controlled_select, encode_lcu, slots_needed
from .resources import check_against_formulas
from .simulator import verify_select

_FACTOR_KINDS = {"adag": Raise, "a": Lower, "n": Number}


def parse_hamiltonian(text: str) -> list[FermionTerm]:
    """Terms from Hamiltonian text; raises ValueError with line numbers."""
    terms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ValueError(f"line {lineno}: expected '<re> <im> : <factors>'")
        head, tail = line.split(":", 1)
        parts = head.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: coefficient needs two floats, got {head!r}")
        try:
            coefficient = complex(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad coefficient: {exc}") from None
        tokens = tail.split()
        include_hc = False
        if tokens and tokens[-1] == "+hc":
            include_hc = True
            tokens = tokens[:-1]
        if not tokens or len(tokens) % 2:
            raise ValueError(f"line {lineno}: factors come as '<kind> <orbital>' pairs")
        factors = []
        for kind, orb in zip(tokens[::2], tokens[1::2]):
            if kind not in _FACTOR_KINDS:
                raise ValueError(f"line {lineno}: unknown factor kind {kind!r}")
            try:
                factors.append(_FACTOR_KINDS[kind](int(orb)))
            except ValueError:
                raise ValueError(f"line {lineno}: bad orbital index {orb!r}") from None
        terms.append(FermionTerm(coefficient, tuple(factors), include_hc))
    return terms


def _even_at_least_two(value: int) -> int:
    return max(2, value + (value % 2))


def _write(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_transform(args: argparse.Namespace) -> int:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    terms = parse_hamiltonian(text)
    max_orbitals = max((len(set(t.orbitals())) for t in terms), default=0)
    hamiltonian = FermionHamiltonian(args.n, _even_at_least_two(max_orbitals), tuple(terms))
    lcu = jw_transform(hamiltonian)
    needed = max((slots_needed(ps) for _, ps in lcu.entries), default=0)
    k = args.k if args.k is not None else _even_at_least_two(needed)
    layout = SelectionLayout(args.n, k, "general")
    rows = encode_lcu(lcu, layout)
    lines = [
        f"# n={args.n} k={k} selection_width={layout.width} terms={len(rows)}",
        f"# total_alpha={lcu.total_alpha!r}",
    ]
    for word, alpha, ps in rows:
        lines.append(f"{word:0{layout.width}b} {alpha!r} {ps}")
    _write("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    circuit = controlled_select(args.n, args.k, args.variant, args.controls)
    _write(emit_text(lower_macros(circuit)), args.output)
    return 0


def _cmd_resources(args: argparse.Namespace) -> int:
    if args.n is not None:
        n_list = [args.n]
    elif args.n_list:
        n_list = [int(tok) for tok in args.n_list.split(",") if tok.strip()]
    else:
        n_list = [4, 8, 16, 32]
    _write(check_against_formulas(n_list), args.output)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.k == 2:
        if args.n > 12:
            raise ValueError("verify handles at most n=12 for k=2")
    elif args.n > 5:
        raise ValueError("verify handles at most n=5 for k>2")
    report = verify_select(args.n, args.k, args.variant, args.trials, args.seed)
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return 0 if report["pass"] else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fermiselect",
        description="SELECT-circuit synthesis for Jordan-Wigner Hamiltonians",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="Hamiltonian file to encoded LCU table")
    p.add_argument("input", help="Hamiltonian file, or - for stdin")
    p.add_argument("--n", type=int, required=True, help="number of orbitals")
    p.add_argument("--k", type=int, default=None, help="slot count (default: inferred)")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("synth", help="emit a lowered SELECT circuit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--variant", choices=("plain", "star"), default="star")
    p.add_argument("--controls", type=int, choices=(0, 1, 2), default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("resources", help="measured vs closed-form costs, CSV")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--n-list", default=None, help="comma-separated sizes")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_resources)

    p = sub.add_parser("verify", help="oracle check of a synthesized SELECT")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--variant", choices=("plain", "star"), default="star")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
