"""Hot numeric kernels with a numba fast path and a numpy fallback.

The backend is chosen once at import time:

* default: numba-compiled kernels (``infldiag.kernels._numba``)
* ``INFLDIAG_DISABLE_NUMBA=1`` or numba unavailable: pure-numpy fallback
  (``infldiag.kernels._numpy``)

``BACKEND`` records which one is live; ``benchmarks/bench_kernels.py``
compares the two.
"""

import os

_FORCE_NUMPY = os.environ.get("INFLDIAG_DISABLE_NUMBA", "").strip() in {"1", "true", "yes"}

if not _FORCE_NUMPY:
    try:
        from . import _numba as _impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - exercised via env flag instead
        from . import _numpy as _impl
        BACKEND = "numpy"
else:
    from . import _numpy as _impl
    BACKEND = "numpy"

CONVERGED = _impl.CONVERGED
MAX_SWEEPS = _impl.MAX_SWEEPS
OBJECTIVE_INCREASED = _impl.OBJECTIVE_INCREASED
SUPPORT_CYCLE = _impl.SUPPORT_CYCLE
PEN_CONVEX = _impl.PEN_CONVEX
PEN_SCAD = _impl.PEN_SCAD
PEN_MCP = _impl.PEN_MCP

cd_solve = _impl.cd_solve
loo_corr = _impl.loo_corr
subset_corr_gap = _impl.subset_corr_gap
