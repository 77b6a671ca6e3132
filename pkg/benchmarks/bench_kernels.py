"""Timing comparison of the numpy and numba statevector kernels.

Usage::

    python3 benchmarks/bench_kernels.py [--qubits 12 16 20] [--repeats 5]

Runs both backends in one process by flipping fermiselect.kernels
USE_NUMBA between passes (the dispatch checks it per call).  The numba
pass does a discarded warmup run first so JIT compilation time is not
counted.  Reports best-of-N wall times per kernel call and an
end-to-end SELECT application.
"""

import argparse
import time

import numpy as np

from fermiselect import kernels
from fermiselect.circuit_ir import lower_macros
from fermiselect.select_synth import synth_select_k2
from fermiselect.simulator import apply_circuit, random_state


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kernels(n, repeats, rng):
    dim = 1 << n
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    amps = amps.astype(np.complex128)
    mat = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    q = n // 2
    rows = []
    for label, flag in (("numpy", False), ("numba", True)):
        if flag and not kernels.HAS_NUMBA:
            continue
        kernels.USE_NUMBA = flag
        if flag:  # discard the JIT compile
            kernels.apply_one_qubit(amps.copy(), n, q, mat)
            kernels.apply_controlled_one_qubit(amps.copy(), n, 0, q, mat)
        work = amps.copy()
        t1 = best_of(lambda: kernels.apply_one_qubit(work, n, q, mat), repeats)
        t2 = best_of(
            lambda: kernels.apply_controlled_one_qubit(work, n, 0, q, mat), repeats
        )
        rows.append((label, t1, t2))
    return rows


def bench_select(n, repeats, rng):
    circuit = lower_macros(synth_select_k2(n, "star"))
    state = random_state(circuit.n_qubits, rng)
    rows = []
    for label, flag in (("numpy", False), ("numba", True)):
        if flag and not kernels.HAS_NUMBA:
            continue
        kernels.USE_NUMBA = flag
        apply_circuit(circuit, state)  # warmup either way
        rows.append((label, best_of(lambda: apply_circuit(circuit, state), repeats)))
    return circuit, rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--qubits", type=int, nargs="+", default=[12, 16, 20])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--select-n", type=int, default=8)
    args = parser.parse_args()
    rng = np.random.default_rng(1)
    saved = kernels.USE_NUMBA

    print(f"{'qubits':>6} {'backend':>8} {'1q kernel':>12} {'ctrl kernel':>12}")
    for n in args.qubits:
        for label, t1, t2 in bench_kernels(n, args.repeats, rng):
            print(f"{n:>6} {label:>8} {t1 * 1e3:>10.3f}ms {t2 * 1e3:>10.3f}ms")

    circuit, rows = bench_select(args.select_n, args.repeats, rng)
    print(
        f"\nSELECT n={args.select_n} star: {len(circuit.gates)} gates "
        f"on {circuit.n_qubits} qubits"
    )
    for label, t in rows:
        print(f"  {label:>8} {t * 1e3:>10.1f}ms")
    if len(rows) == 2:
        print(f"  speedup  {rows[0][1] / rows[1][1]:>9.2f}x")
    kernels.USE_NUMBA = saved


if __name__ == "__main__":
    main()
