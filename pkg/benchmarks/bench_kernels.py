"""Time the numba and numpy versions of each finite-field kernel.

    python3 benchmarks/bench_kernels.py [--repeat N]

The first numba call is run once untimed, so compile time is not counted.
"""
import argparse
import timeit

import numpy as np

from workbench import kernels
from workbench._accel import HAVE_NUMBA
from workbench.finite_lie import J


def cases():
    rng = np.random.default_rng(0)
    a = rng.integers(0, 7, size=(240, 320), dtype=np.int64)
    vecs = kernels.all_vectors(3, 4)
    form = J.to_numpy()
    gram = kernels.gram_table(vecs, form, 3)
    s, u = [0, -1, 1, 0], [0, -1, 1, 1]
    return {
        "rank_mod_q 240x320 mod 7": (kernels.rank_mod_q_numba, kernels.rank_mod_q_numpy, (a, 7)),
        "count_sl3 p=5": (kernels.count_sl3_numba, kernels.count_sl3_numpy, (5,)),
        "count_isometries Sp4(F_3)": (kernels.count_isometries_numba, kernels.count_isometries_numpy,
                                      (gram, form % 3)),
        "psl2_tables p=13": (kernels.psl2_tables_numba, kernels.psl2_tables_numpy, (13, s, u)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba is not importable; only the numpy column is meaningful")
    print(f"{'kernel':<28} {'numba (s)':>10} {'numpy (s)':>10} {'speedup':>8}")
    for name, (fast, slow, call_args) in cases().items():
        r1 = fast(*call_args)         # compile + warm up
        r2 = slow(*call_args)
        same = all(np.array_equal(x, y) for x, y in zip(r1, r2)) if isinstance(r1, tuple) else r1 == r2
        if not same:
            raise SystemExit(f"{name}: numba and numpy disagree")
        t_fast = min(timeit.repeat(lambda: fast(*call_args), number=1, repeat=args.repeat))
        t_slow = min(timeit.repeat(lambda: slow(*call_args), number=1, repeat=args.repeat))
        print(f"{name:<28} {t_fast:>10.4f} {t_slow:>10.4f} {t_slow / t_fast:>7.1f}x")


if __name__ == "__main__":
    main()
