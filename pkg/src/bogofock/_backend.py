"""Kernel backend selection.

The hot kernels exist twice: numba-compiled (default) and pure numpy.  The
environment variable ``BOGOFOCK_BACKEND`` picks one at import time:

* ``numba`` (default) - JIT-compiled kernels,
* ``numpy`` - the pure-Python/numpy fallback, handy for debugging and for
  environments without a working numba.

``BOGOFOCK_THREADS`` caps the numba thread pool; the current kernels are
single-threaded, so this is an upper bound rather than a demand.
"""

import os
import warnings

_requested = os.environ.get("BOGOFOCK_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ValueError(
        f"BOGOFOCK_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numba":
    try:
        from . import _kernels_numba as _impl

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - depends on environment
        warnings.warn("numba unavailable, falling back to the numpy backend")
        from . import _kernels_numpy as _impl

        BACKEND = "numpy"
else:
    from . import _kernels_numpy as _impl

    BACKEND = "numpy"

if BACKEND == "numba":
    _threads = os.environ.get("BOGOFOCK_THREADS")
    if _threads:
        import numba

        numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))

hermite_lattice = _impl.hermite_lattice
scaled_lattice = _impl.scaled_lattice
kan_sum = _impl.kan_sum
