"""Compare the numba kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs once per backend to warm up (numba compiles then), then
``--repeat`` times; the median wall time is reported along with a check
that both backends returned identical arrays.
"""
import argparse
import statistics
import time

import numpy as np

from rdskit import _kernels
from rdskit.fields import complement_singer_ds, paley_ds
from rdskit.groupring import RdsParams, apply_numerical
from rdskit.multipliers import units
from rdskit.orbitsearch import SearchJob, _plan


def _cases():
    D, ds = paley_ds(503)
    elems = np.array(D.support, dtype=np.int64)
    ones = np.ones(len(elems), dtype=np.int64)
    cands = np.array(units(ds.v), dtype=np.int64)

    base, bds = complement_singer_ds(8, 3)
    base = apply_numerical(base, pow(9, -1, 73))
    p = RdsParams.lifting(bds, 2)
    plan = _plan(SearchJob(p.m, p.n, p.k, p.lam, base.support, [75]))

    return {
        "difference_counts  paley 503": lambda: _kernels.difference_counts(elems, ones, ds.v),
        "multiplier_flags   paley 503": lambda: _kernels.multiplier_flags(elems, ds.v, cands),
        "rds_backtrack      (13,2,9,3)": lambda: _kernels.rds_backtrack(13, 2, 9, 3),
        "orbit_search       (73,2,64,28)": lambda: _kernels.orbit_search(
            plan.choices, plan.ncho, plan.sizes, p.order, p.m, p.n, p.lam, plan.profiles),
    }


def _time(fn, repeat):
    fn()
    runs = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; only the numpy backend can run")
    cases = _cases()
    print(f"{'kernel':<34}{'numpy s':>10}{'numba s':>10}{'speedup':>9}  same")
    for name, fn in cases.items():
        _kernels.use_backend("numpy")
        t_np, out_np = _time(fn, args.repeat)
        if _kernels.HAVE_NUMBA:
            _kernels.use_backend("numba")
            t_nb, out_nb = _time(fn, args.repeat)
            same = np.array_equal(out_np, out_nb)
            print(f"{name:<34}{t_np:>10.4f}{t_nb:>10.4f}{t_np / t_nb:>9.1f}  {same}")
        else:
            print(f"{name:<34}{t_np:>10.4f}{'-':>10}{'-':>9}  -")


if __name__ == "__main__":
    main()
