"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from qnetcode import _fallback
from qnetcode.circuits import GATE_MATRICES, GateKind

try:
    from qnetcode import _kernels
except ImportError:
    _kernels = None


def cases(rng):
    n = 18
    psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    psi /= np.linalg.norm(psi)
    h = GATE_MATRICES[GateKind.H]
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    herm = (a + a.conj().T) / 2
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    rho /= np.trace(rho)
    th = np.linspace(0, np.pi, 64)
    ph = 2 * np.pi * np.arange(64) / 64
    return {
        "apply_1q H on every qubit, 18 qubits": lambda k: [k.apply_1q(psi, n, q, h) for q in range(n)],
        "apply_cnot chain, 18 qubits": lambda k: [k.apply_cnot(psi, n, q, q + 1) for q in range(n - 1)],
        "jacobi_eigh 8x8 x100": lambda k: [k.jacobi_eigh(herm) for _ in range(100)],
        "conditional_entropy_grid 64x64": lambda k: k.conditional_entropy_grid(rho, th, ph),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    rng = np.random.default_rng(0)
    impls = [("python", _fallback)] + ([("compiled", _kernels)] if _kernels else [])
    print(f"{'kernel':40s} " + " ".join(f"{name:>12s}" for name, _ in impls) + "   speedup")
    for label, fn in cases(rng).items():
        times = [min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) for _, k in impls]
        speed = f"{times[0] / times[1]:8.1f}x" if len(times) == 2 else "       -"
        print(f"{label:40s} " + " ".join(f"{t * 1e3:10.2f}ms" for t in times) + f"  {speed}")
    if _kernels is None:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
