"""Time the compiled kernels against the numpy fallback.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``.  Prints one
line per kernel and size with the best-of-N time for each backend and the
speedup.  Both backends are checked to agree before timing.
"""
import argparse
import timeit

import numpy as np

from lpblaschke import _pykernels

try:
    from lpblaschke import _ckernels
except ImportError:
    _ckernels = None


def power_sum_case(rng, n, k, m):
    X = rng.normal(size=(k, n))
    U = rng.normal(size=(m, n))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    return X, U, rng.uniform(size=m), 2.5, 0.3


def cone_case(rng, n, k, t):
    X = rng.normal(size=(k, n))
    S = rng.normal(size=(t, n, n))
    return X, S, rng.uniform(size=t), 2.5, 0.3


CASES = [
    ("lp_power_sum", "n=2 k=720 m=720", lambda r: power_sum_case(r, 2, 720, 720)),
    ("lp_power_sum", "n=3 k=2562 m=2562", lambda r: power_sum_case(r, 3, 2562, 2562)),
    ("cone_moment", "n=2 k=720 segs=64", lambda r: cone_case(r, 2, 720, 64)),
    ("cone_moment", "n=3 k=2562 tris=200", lambda r: cone_case(r, 3, 2562, 200)),
]


def best(fn, args, repeat):
    number = max(1, int(0.2 / max(timeit.timeit(lambda: fn(*args), number=1), 1e-6)))
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; nothing to compare")
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<14} {'case':<22} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, label, make in CASES:
        inputs = make(rng)
        py, cy = getattr(_pykernels, name), getattr(_ckernels, name)
        np.testing.assert_allclose(cy(*inputs), py(*inputs), rtol=1e-9, atol=1e-12)
        t_py, t_cy = best(py, inputs, args.repeat), best(cy, inputs, args.repeat)
        print(f"{name:<14} {label:<22} {1e3 * t_py:10.3f} {1e3 * t_cy:10.3f} {t_py / t_cy:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
