"""Compare the compiled kernels with the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py``. Each kernel is timed on the
same inputs under both backends; a final row times one full Theorem 3
deconvolution (the heaviest user of the 2F1 kernels) in a subprocess per
backend, since the backend is fixed at import.
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from ratio_deconv import _pykernels

try:
    from ratio_deconv import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _euler_args(n: int):
    rng = np.random.default_rng(0)
    zeta = (1.0 + rng.uniform(0.5, 50.0, n) * np.exp(1j * rng.uniform(-2.5, 2.5, n))).astype(
        np.complex128)
    h = np.full(n, 0.05)
    return 1.0, 2.0, 3.0, zeta, h, np.full(n, -40.0), np.full(n, 40.0)


CASES = {
    "lanczos_ln_gamma": lambda k: [k.lanczos_ln_gamma(x) for x in np.linspace(0.1, 150.0, 200)],
    "series_1f1": lambda k: [k.series_1f1(2.5, 3.5, z, 2000, 1e-14) for z in np.linspace(0, 25, 50)],
    "series_2f1": lambda k: [k.series_2f1(1.5, 2.0, 3.5, z, 2000, 1e-14)
                             for z in np.linspace(-0.5, 0.5, 100)],
    "euler_2f1_sums": (lambda args: lambda k: k.euler_2f1_sums(*args))(_euler_args(64)),
}

PIPELINE = (
    "import time;from ratio_deconv.verify import run_case;t=time.perf_counter();"
    "run_case('gbp-gbp');print(time.perf_counter()-t)"
)


def bench_kernels(repeat: int) -> list[tuple[str, float, float | None]]:
    rows = []
    for name, fn in CASES.items():
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=repeat))
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=repeat)) if _ckernels else None
        rows.append((name, py, cy))
    return rows


def bench_pipeline() -> tuple[float, float]:
    out = []
    for pure in ("1", "0"):
        env = dict(os.environ, RATIO_DECONV_PURE_PYTHON=pure)
        res = subprocess.run([sys.executable, "-c", PIPELINE], env=env, capture_output=True,
                             text=True, check=True)
        out.append(float(res.stdout.strip()))
    return out[0], out[1]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-pipeline", action="store_true")
    args = ap.parse_args(argv)
    print(f"{'kernel':22s} {'python [s]':>12s} {'cython [s]':>12s} {'speedup':>8s}")
    for name, py, cy in bench_kernels(args.repeat):
        if cy is None:
            print(f"{name:22s} {py:12.5f} {'n/a':>12s}")
        else:
            print(f"{name:22s} {py:12.5f} {cy:12.5f} {py / cy:8.1f}x")
    if not args.skip_pipeline and _ckernels is not None:
        py, cy = bench_pipeline()
        print(f"{'gbp-gbp deconvolution':22s} {py:12.3f} {cy:12.3f} {py / cy:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
