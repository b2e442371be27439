"""Time every hot kernel under the numba and the pure-numpy backend.

    python benchmarks/bench_kernels.py [--repeat 5] [--scale 1.0] [--json out.json]

Each kernel runs once untimed per backend (numba compiles, or loads its
cache, on first call); then the best of ``--repeat`` runs is reported and
outputs of the two backends are compared.
"""
from __future__ import annotations

import argparse
import json
import platform
import time

import numpy as np

from mixedwaring import _accel, kernels
from mixedwaring.smooth import primes_up_to


def cases(scale: float):
    P = int(200_000 * scale)
    lo = int(10_000_000 * scale)
    xs = np.arange(1, int(200_000 * scale), dtype=np.int64)
    w = np.arange(1, int(10_000 * scale) + 1, dtype=np.float64) ** -0.5 / 2
    betas = np.linspace(0.0, 0.005, 401)
    window = int(50_000 * scale)
    cur = np.zeros(window, dtype=np.int64)
    cur[:224] = 1
    squares = np.arange(1, int(window**0.5) + 1, dtype=np.int64) ** 2
    m = int(3**8 * scale) or 1
    dist = np.zeros(m, dtype=np.int64)
    dist[0] = 1
    return {
        "largest_prime_factors": (kernels.largest_prime_factors, (P,)),
        "segment_smooth_mask": (kernels.segment_smooth_mask, (lo, lo + P, primes_up_to(1000))),
        "weyl_sum_rational": (kernels.weyl_sum_rational, (xs, 123456789, 1_000_000_007, 3)),
        "weighted_expsum": (kernels.weighted_expsum, (betas, w)),
        "shift_add": (kernels.shift_add, (cur, squares)),
        "power_residue_histogram": (kernels.power_residue_histogram, (4, int(10**6 * scale))),
        "cyclic_convolve": (kernels.cyclic_convolve, (dist, kernels.power_residue_histogram(2, m))),
    }


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(abs(x - y) < 1e-6 for x, y in zip(a, b))
    if a.dtype.kind in "fc":
        return bool(np.allclose(a, b, rtol=0, atol=1e-6))
    return bool(np.array_equal(a, b))


def best_of(fn, args, repeat: int) -> tuple[float, object]:
    out = fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--scale", type=float, default=1.0)
    ap.add_argument("--json", help="write results here")
    args = ap.parse_args(argv)

    backends = ["numpy"] + (["numba"] if _accel.HAVE_NUMBA else [])
    rows = []
    for name, (fn, fargs) in cases(args.scale).items():
        timings, outputs = {}, {}
        for b in backends:
            with _accel.use_backend(b):
                timings[b], outputs[b] = best_of(fn, fargs, args.repeat)
        row = {"kernel": name, **{f"{b}_s": t for b, t in timings.items()}}
        if "numba" in timings:
            row["speedup"] = timings["numpy"] / timings["numba"]
            row["agree"] = _same(outputs["numpy"], outputs["numba"])
        rows.append(row)

    print(f"{'kernel':<26}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>9}  agree")
    for r in rows:
        nb = f"{1e3 * r['numba_s']:12.2f}" if "numba_s" in r else f"{'-':>12}"
        sp = f"{r['speedup']:9.1f}" if "speedup" in r else f"{'-':>9}"
        print(f"{r['kernel']:<26}{1e3 * r['numpy_s']:12.2f}{nb}{sp}  {r.get('agree', '-')}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"python": platform.python_version(), "numpy": np.__version__,
                       "scale": args.scale, "results": rows}, fh, indent=2, sort_keys=True)
    return 0 if all(r.get("agree", True) for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
