"""JIT switch.

Kernels are compiled with numba unless ``DFS_PHOTONICS_JIT=0`` is set or numba
cannot be imported, in which case the pure-numpy implementations are used.
``DFS_PHOTONICS_THREADS`` caps the numba thread pool.
"""

import os

_flag = os.environ.get("DFS_PHOTONICS_JIT", "1").strip().lower()
JIT_REQUESTED = _flag not in ("0", "false", "no", "off")

try:
    import numba

    if "NUMBA_THREADING_LAYER" not in os.environ:
        # skips the TBB probe, which warns on older system TBB installs
        numba.config.THREADING_LAYER = "workqueue"

    GOT_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    GOT_NUMBA = False

JIT_ENABLED = JIT_REQUESTED and GOT_NUMBA

if JIT_ENABLED:
    from numba import njit, prange

    _threads = os.environ.get("DFS_PHOTONICS_THREADS")
    if _threads:
        numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))
else:

    def njit(func=None, **kwargs):
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper

    prange = range
