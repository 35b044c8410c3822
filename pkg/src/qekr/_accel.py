"""Backend switch for the compiled kernels.

Set ``QEKR_DISABLE_NUMBA=1`` to force the pure-numpy path.  The flag is read
once at import time; :func:`use_numba` reports the active choice.
"""

from __future__ import annotations

import os

_FLAG = os.environ.get("QEKR_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by QEKR_DISABLE_NUMBA")
    import numba

    # the TBB shipped with some distros is too old; prefer OpenMP
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    HAS_NUMBA = True
except ImportError:
    numba = None
    HAS_NUMBA = False


def use_numba() -> bool:
    return HAS_NUMBA


def backend_name() -> str:
    return "numba" if HAS_NUMBA else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise a no-op decorator."""
    if HAS_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn


def set_threads(n: int) -> None:
    if HAS_NUMBA and n > 0:
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
