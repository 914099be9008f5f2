"""Kernel backend selection.

The compiled module is used when it imports; ``LPBLASCHKE_PURE_PYTHON=1``
forces the numpy fallback.  The power sum always runs in numpy: a BLAS
matmul followed by numpy's SIMD ``pow`` beats the scalar compiled loop
(see ``benchmarks/bench_kernels.py``), so only ``cone_moment`` dispatches.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("LPBLASCHKE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

lp_power_sum = _pykernels.lp_power_sum
cone_moment = _impl.cone_moment

__all__ = ["BACKEND", "lp_power_sum", "cone_moment"]
