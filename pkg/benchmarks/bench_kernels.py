"""Time the numba kernels against the numpy/scipy fallback.

    python3 benchmarks/bench_kernels.py --levels 4 5 6 7 --repeat 3

Both backends are called directly, so FRACSQ_NUMBA has no effect here.
Outputs are checked for equality before timing.
"""
import argparse
import time

import numpy as np

from fracsq import _kernels
from fracsq.catalogue import SQUARES_3_5, TEE
from fracsq.grid import approximation


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(levels):
    for k in levels:
        yield f"M1 k={k} free", ~approximation(SQUARES_3_5[1], k).kept
        yield f"tee k={k} kept", approximation(TEE, k).kept
        yield f"M4 k={k} kept", approximation(SQUARES_3_5[4], k).kept


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, nargs="+", default=[4, 5, 6])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    offs = _kernels._as_offsets(_kernels.FOUR)
    # compile once outside the timings
    warm = np.ones((4, 4), dtype=bool)
    _kernels.bfs_distances_numba(warm, np.array([0], dtype=np.int64), offs)
    _kernels.label_components_numba(warm, offs)

    print(f"{'case':<18} {'cells':>9} {'kernel':<6} {'numba s':>9} {'numpy s':>9} {'speedup':>8}")
    for name, mask in cases(args.levels):
        mask = np.ascontiguousarray(mask)
        src = np.arange(mask.shape[1], dtype=np.int64)  # bottom row
        a = _kernels.bfs_distances_numba(mask, src, offs)
        b = _kernels.bfs_distances_numpy(mask, src, offs)
        assert np.array_equal(a, b), name
        la, ca = _kernels.label_components_numba(mask, offs)
        lb, cb = _kernels.label_components_numpy(mask, offs)
        assert ca == cb and np.array_equal(la, lb), name
        for kern, f_nb, f_np in (
            ("bfs", lambda: _kernels.bfs_distances_numba(mask, src, offs),
             lambda: _kernels.bfs_distances_numpy(mask, src, offs)),
            ("label", lambda: _kernels.label_components_numba(mask, offs),
             lambda: _kernels.label_components_numpy(mask, offs)),
        ):
            t_nb = best_of(f_nb, args.repeat)
            t_np = best_of(f_np, args.repeat)
            print(f"{name:<18} {mask.size:>9} {kern:<6} {t_nb:>9.4f} {t_np:>9.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
