"""Backend selection for the hot scan kernels.

The compiled module is used when it imports; set ``ORDFIX_PURE_PYTHON=1``
to force the fallback. ``BACKEND`` names the active one.
"""
import os

from . import _pykernels

try:
    if os.environ.get("ORDFIX_PURE_PYTHON"):
        raise ImportError("pure-Python backend requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

import numpy as np


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _u8(a):
    return np.ascontiguousarray(a, dtype=bool).view(np.uint8)


def _idx(a):
    return np.ascontiguousarray(a, dtype=np.int_)


def triangle_violation(dist, impl=None):
    """First ``(i, j, k)`` with ``dist[i,k] > dist[i,j] + dist[j,k]``, or None."""
    return (impl or _impl).triangle_violation(_f64(dist))


def transitivity_violation(rel, impl=None):
    """First ``(i, j, k)`` with ``i R j``, ``j R k`` but not ``i R k``, or None."""
    return (impl or _impl).transitivity_violation(_u8(rel))


def floyd_warshall(dist, impl=None):
    return (impl or _impl).floyd_warshall(_f64(dist))


def transitive_closure(rel, impl=None):
    return np.asarray((impl or _impl).transitive_closure(_u8(rel)), dtype=bool)


def linear_contraction_violation(dist, selfmap, mask, alpha, slack=0.0, impl=None):
    """Scan masked pairs for ``dist[Tx,Ty] > alpha*dist[x,y] + slack``.

    Returns ``(x, y, checked)``; ``x == -1`` when no pair violates.
    """
    i, j, checked = (impl or _impl).linear_contraction_violation(
        _f64(dist), _idx(selfmap), _u8(mask), float(alpha), float(slack)
    )
    return int(i), int(j), int(checked)


def maia_series(dist, selfmap, lam, terms, impl=None):
    """Partial sums ``sum_{k<terms} lam**k * dist[T^k x, T^k y]`` for all pairs."""
    return np.asarray(
        (impl or _impl).maia_series(_f64(dist), _idx(selfmap), float(lam), int(terms))
    )


def available_backends():
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
