"""Backend selection for the hot kernels.

The compiled extension ``dss_distill._ckernels`` is used when it imports;
otherwise the numpy implementations in ``_pykernels`` are used. Setting
``DSS_DISTILL_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

BACKENDS = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels

if _ckernels is not None and os.environ.get("DSS_DISTILL_PURE_PYTHON", "") in ("", "0"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_active = BACKENDS[BACKEND]


def jacobi_eigh(a, eps=1e-15, max_sweeps=100):
    return _active.jacobi_eigh(a, eps, max_sweeps)


def block_scan(rho, dim_b, subs_a, subs_b):
    return _active.block_scan(rho, dim_b, subs_a, subs_b)


def use_backend(name):
    """Switch the active backend (``"cython"`` or ``"python"``); returns the previous name."""
    global BACKEND, _active
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    previous = BACKEND
    BACKEND, _active = name, BACKENDS[name]
    return previous
