"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the numpy
fallback.  ``LCONVEX_KERNELS=python`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("LCONVEX_KERNELS", "").lower() != "python":
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "compiled"

ABSENT = _kernels_py.ABSENT
INFINITE = _kernels_py.INFINITE
FINITE = _kernels_py.FINITE


def midpoint_violation(mid_lo, mid_hi, n, base, codes, vals, state):
    return _impl.midpoint_violation(mid_lo, mid_hi, n, base, codes, vals, state)


def potential_ball_min(cand_ray, cand_t, cand_len, unary, ei, ej, ec, ea2):
    return _impl.potential_ball_min(cand_ray, cand_t, cand_len, unary, ei, ej, ec, ea2)
