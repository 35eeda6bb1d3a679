"""Numba vs numpy timings for the hot kernels.

    python benchmarks/bench_kernels.py [--repeat N] [--json out.json]

With BIDISC_SPECTRA_NO_NUMBA=1 (or without numba installed) only the numpy
column is timed.  The numba column excludes compilation (one warm-up call).
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
import time

import numpy as np

from bidisc_spectra import kernels
from bidisc_spectra._accel import USE_NUMBA
from bidisc_spectra.certify import BIDISC, certified_min_modulus
from bidisc_spectra.weight import parse_weight


def _best(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def _cases(rng):
    w = parse_weight("3 + z1 - 0.5*z2 + 0.25*z1^3*z2^2 - 0.1*z1^2*z2^4")
    coef = w.array
    consts = np.array(w.lipschitz_constants(), dtype=float)
    n = 200_000
    t = rng.uniform(0, 2 * np.pi, (2, n))
    z1, z2 = np.exp(1j * t[0]), np.exp(1j * t[1])
    m = 20_000
    centers = np.column_stack(
        [rng.uniform(0, 1, m), rng.uniform(0, 2 * np.pi, m), rng.uniform(0, 1, m), rng.uniform(0, 2 * np.pi, m)]
    )
    half = np.full((m, 4), 0.01)
    nodes = np.exp(2j * np.pi * np.arange(256) / 256)
    return [
        ("poly_eval_grad (200k points)", kernels.poly_eval_grad_np, kernels.poly_eval_grad_nb, (coef, z1, z2)),
        ("cell_bounds (20k cells)", kernels.cell_bounds_np, kernels.cell_bounds_nb, (coef, consts, centers, half)),
        ("log_abs_mean (256x256 nodes)", kernels.log_abs_mean_np, kernels.log_abs_mean_nb, (coef, nodes, nodes)),
    ], w


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="write results to this file")
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    cases, w = _cases(rng)
    rows = []
    for name, f_np, f_nb, a in cases:
        t_np = _best(lambda: f_np(*a), args.repeat)
        t_nb = _best(lambda: f_nb(*a), args.repeat) if USE_NUMBA else None
        rows.append({"kernel": name, "numpy_s": t_np, "numba_s": t_nb})
    # end to end: one certified minimum over the bidisc through the dispatching kernels
    t_e2e = _best(lambda: certified_min_modulus(w, BIDISC, tol=1e-6), max(1, args.repeat // 2))
    rows.append({"kernel": f"certified_min_modulus ({'numba' if USE_NUMBA else 'numpy'} backend)", "numpy_s": None, "numba_s": None, "total_s": t_e2e})

    print(f"python {platform.python_version()}, numpy {np.__version__}, numba active: {USE_NUMBA}")
    print(f"{'kernel':<48}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for r in rows:
        if "total_s" in r:
            print(f"{r['kernel']:<48}{r['total_s']:>12.4f}")
            continue
        nb = f"{r['numba_s']:.4f}" if r["numba_s"] is not None else "-"
        sp = f"{r['numpy_s'] / r['numba_s']:.1f}x" if r["numba_s"] else "-"
        print(f"{r['kernel']:<48}{r['numpy_s']:>12.4f}{nb:>12}{sp:>10}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump({"numba": USE_NUMBA, "rows": rows}, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
