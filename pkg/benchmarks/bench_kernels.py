"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--seed 0]

Each row runs one kernel on one generated instance with both backends,
checks the outputs are identical, and reports the best wall time of
``--repeat`` runs.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from ggrid import kernels
from ggrid.generate import GenParams, generate_instance

CASES = [
    # kernel, cells, points-per-cell range
    ("selection_mst_weights", 8, (2, 4)),
    ("selection_mst_weights", 10, (2, 3)),
    ("selection_tour_weights", 7, (2, 3)),
    ("selection_tour_weights", 9, (1, 3)),
    ("prufer_dp_weights", 6, (1, 3)),
    ("prufer_dp_weights", 7, (1, 3)),
    ("prufer_dp_weights", 8, (1, 2)),
    ("matching_dp", 12, None),
    ("matching_dp", 18, None),
]


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return a[0] == b[0] and a[1] == b[1]
    return np.array_equal(a, b)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if "cython" not in kernels.BACKENDS:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation` first")

    print(f"{'kernel':<24}{'size':>18}{'python ms':>12}{'cython ms':>12}{'speedup':>10}  same")
    for name, cells, ppc in CASES:
        if ppc is None:
            rng = np.random.default_rng(args.seed)
            xy = rng.random((cells, 2)) * 10
            d = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])
            call = {b: (lambda b=b: kernels.matching_dp(d, b)) for b in ("python", "cython")}
            size = f"{cells} nodes"
        else:
            inst = generate_instance(GenParams(mode="clustered", rows=6, cols=6, cells=cells, ppc=ppc, seed=args.seed))
            fn = getattr(kernels, name)
            dist, off = inst.packed_distances, inst.offsets
            call = {b: (lambda b=b: fn(dist, off, b)) for b in ("python", "cython")}
            work = inst.selection_count() if name.startswith("selection") else cells ** (cells - 2)
            size = f"k={cells}, {work} items"
        tp, outp = _best(call["python"], args.repeat)
        tc, outc = _best(call["cython"], args.repeat)
        print(f"{name:<24}{size:>18}{tp * 1e3:>12.2f}{tc * 1e3:>12.2f}{tp / tc:>9.1f}x  {_same(outp, outc)}")


if __name__ == "__main__":
    main()
