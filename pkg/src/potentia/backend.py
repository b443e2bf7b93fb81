"""Backend selection for the hot summation kernels.

The environment variable ``POTENTIA_BACKEND`` picks the implementation used
by the inner summation loops:

* ``numba`` -- JIT-compiled parallel kernels (the default when numba imports),
* ``numpy`` -- pure-numpy fallback, no compilation step,
* ``auto`` / unset -- numba when available, numpy otherwise.

The choice is made once at import time; both code paths produce values that
agree to rounding, and each path is bitwise deterministic on its own.
"""

from __future__ import annotations

import os

_requested = os.environ.get("POTENTIA_BACKEND", "auto").strip().lower() or "auto"
if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"POTENTIA_BACKEND must be 'numba', 'numpy' or 'auto', got {_requested!r}"
    )

if _requested == "numpy":
    numba = None
else:
    try:
        import numba
    except ImportError:
        if _requested == "numba":
            raise RuntimeError("POTENTIA_BACKEND=numba but numba is not importable")
        numba = None

USE_NUMBA = numba is not None


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"


def max_threads() -> int:
    if USE_NUMBA:
        return int(numba.config.NUMBA_NUM_THREADS)
    return 1


def set_threads(n: int | None) -> int:
    """Pin the worker-thread count; ``None`` falls back to POTENTIA_THREADS.

    Returns the effective thread count.  A no-op (returning 1) on the numpy
    backend, whose loops are single-threaded by construction.
    """
    if n is None:
        env = os.environ.get("POTENTIA_THREADS", "").strip()
        if not env:
            return thread_count()
        n = int(env)
    if n < 1:
        raise ValueError(f"thread count must be >= 1, got {n}")
    if USE_NUMBA:
        eff = min(n, max_threads())
        numba.set_num_threads(eff)
        return eff
    return 1


def thread_count() -> int:
    if USE_NUMBA:
        return int(numba.get_num_threads())
    return 1
