"""Compare the compiled and NumPy gate kernels on the exhaustive SMAC workload.

Run: python benchmarks/bench_kernels.py [--d 3 --q 2 --repeat 3]
"""
import argparse
import time
from fractions import Fraction

import numpy as np

from qudit_arith import kernels
from qudit_arith.circuits import build_smac
from qudit_arith.core import GateSpec, Kind
from qudit_arith.sim import run_batch


def time_backend(name, fn, repeat):
    kernels.use_backend(name)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--batch", type=int, default=729)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    block = build_smac(args.d, args.q, 1)
    dim = block.system.dim
    cols = min(args.batch, dim)
    states = np.eye(dim, cols, dtype=complex)
    w = block.system.w
    h = GateSpec(Kind.H, (w // 2,))
    rk = GateSpec(Kind.RK, (0, w - 1), angles=(Fraction(1, args.d ** 2),), k=2)
    workloads = {
        f"SMAC circuit ({len(block.circuit)} gates, {dim}x{cols})": lambda: run_batch(block.circuit, states),
        "single dense H gate": lambda: run_batch(block.circuit.with_gates([h]), states),
        "single diagonal RK gate": lambda: run_batch(block.circuit.with_gates([rk]), states),
    }
    backends = kernels.available_backends()
    print(f"backends: {backends} (default {kernels.BACKEND})")
    default = kernels.BACKEND
    for label, fn in workloads.items():
        results = {b: time_backend(b, fn, args.repeat) for b in backends}
        ref = results["numpy"][1]
        line = f"{label:<45}"
        for b, (t, out) in results.items():
            line += f"  {b}: {t * 1e3:8.1f} ms"
            assert np.allclose(out, ref, atol=1e-12), f"{b} disagrees with numpy"
        if "cython" in results:
            line += f"  speedup {results['numpy'][0] / results['cython'][0]:.2f}x"
        print(line)
    kernels.use_backend(default)


if __name__ == "__main__":
    main()
