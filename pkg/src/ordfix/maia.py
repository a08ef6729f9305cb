"""Series metric ``e(x, y) = sum_k lam**k d(T^k x, T^k y)`` for order contractions.

When ``T`` contracts comparable pairs by ``alpha`` and the comparability
graph is connected, the series converges for every pair, dominates ``d``,
and makes ``T`` a plain contraction with factor ``1/lam``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .contract import ContractionVariant, check_contraction, check_monotone
from .errors import InputError, PreconditionError
from .spaces import FiniteSpace, chain_components, check_axioms, find_chain

__all__ = ["DerivedMetric", "MaiaReport", "build_maia_metric", "verify_maia_properties", "default_lambda"]

DEFAULT_TOL = 1e-9


def default_lambda(alpha):
    """Geometric midpoint of ``(1, 1/alpha)``."""
    return math.sqrt(1.0 / alpha)


@dataclass(frozen=True, eq=False)
class DerivedMetric:
    """Truncated series table with per-entry tail bounds.

    ``table[i, j]`` is the partial sum over ``terms`` terms for the ``i``-th
    and ``j``-th points of ``space.points``; ``tail[i, j]`` bounds what the
    truncation leaves out.
    """

    space: object
    lam: float
    alpha: float
    table: np.ndarray
    tail: np.ndarray
    terms: int
    tol: float

    @property
    def mu(self):
        return 1.0 / self.lam

    @property
    def finite(self):
        return isinstance(self.space, FiniteSpace)

    @property
    def tail_bound(self):
        return float(self.tail.max()) if self.tail.size else 0.0

    def _index(self, x):
        if self.finite:
            return x
        return self._positions[x]

    @property
    def _positions(self):
        cache = self.__dict__.get("_pos")
        if cache is None:
            cache = {p: i for i, p in enumerate(self.space.points)}
            object.__setattr__(self, "_pos", cache)
        return cache

    def value(self, x, y):
        """``e(x, y)``; points off the carrier grid are summed on the fly."""
        if self.finite:
            return float(self.table[x, y])
        pos = self._positions
        if x in pos and y in pos:
            return float(self.table[pos[x], pos[y]])
        return _series(self.space, x, y, self.lam, self.terms)

    def slack(self, i, j):
        """Tolerance used by the property checks at table entry ``(i, j)``."""
        return 2.0 * float(self.tail[i, j]) + 1e-12 * max(1.0, abs(float(self.table[i, j])))

    def to_json(self):
        return {
            "n": int(self.table.shape[0]),
            "dist": self.table.tolist(),
            "lambda": self.lam,
            "alpha": self.alpha,
            "truncation_N": self.terms,
            "tail_bound": self.tail_bound,
            "tol": self.tol,
        }


def _series(space, x, y, lam, terms):
    total, weight = 0.0, 1.0
    for _ in range(terms):
        if x == y:
            break
        total += weight * space.d(x, y)
        weight *= lam
        x, y = space.T(x), space.T(y)
    return total


def _chain_sum(space, x, y):
    if isinstance(space, FiniteSpace):
        chain = find_chain(space, x, y)
        if chain is None:
            raise PreconditionError("b03", f"no comparability chain between {x} and {y}")
        return sum(space.d(a, b) for a, b in zip(chain, chain[1:]))
    if space.leq(x, y) or space.leq(y, x):
        return space.d(x, y)
    raise PreconditionError("b03", f"{x} and {y} are not comparable")


def _preconditions(space, alpha):
    if not space.has_selfmap:
        raise InputError("the series metric needs a self-map")
    if isinstance(space, FiniteSpace):
        report = check_axioms(space, "metric")
        if not report.ok:
            raise PreconditionError("metric", f"failed axioms {report.failed()}")
        if len(chain_components(space)) != 1:
            raise PreconditionError("b03", "comparability graph is disconnected")
    elif not getattr(space, "symmetric", False):
        raise PreconditionError("metric", "base distance is not declared symmetric")
    a02 = check_contraction(space, ContractionVariant("order-linear", alpha=alpha))
    if not a02.holds:
        raise PreconditionError("a02", f"violated at {a02.witness}: {a02.lhs} > {a02.rhs}")
    b02 = check_monotone(space, "comparability")
    if not b02.increasing:
        raise PreconditionError("b02", f"violated at {b02.witness_increasing}")


def build_maia_metric(space, alpha, lam=None, tol=DEFAULT_TOL):
    """Sum the series on every pair of ``space.points``.

    The truncation length ``N`` is the smallest one for which the geometric
    tail ``(lam*alpha)**N * S / (1 - lam*alpha)`` is at most ``tol`` for
    every pair, ``S`` being the length of the shortest comparability chain.
    """
    if not 0 < alpha < 1:
        raise InputError(f"alpha must lie in (0, 1), got {alpha!r}")
    lam = default_lambda(alpha) if lam is None else float(lam)
    if not 1 < lam < 1 / alpha:
        raise InputError(f"lambda must lie in (1, 1/alpha) = (1, {1 / alpha:g}), got {lam!r}")
    if tol <= 0:
        raise InputError("tol must be > 0")
    _preconditions(space, alpha)
    pts = list(space.points)
    ratio = lam * alpha
    S = np.array([[_chain_sum(space, x, y) for y in pts] for x in pts], dtype=np.float64)
    smax = float(S.max())
    if smax == 0:
        terms = 1
    else:
        terms = max(1, math.ceil(math.log(tol * (1 - ratio) / smax) / math.log(ratio)))
    tail = (ratio**terms) * S / (1 - ratio)
    if isinstance(space, FiniteSpace):
        table = kernels.maia_series(space.dist, space.selfmap, lam, terms)
        # once both orbits hit the same fixed point the remainder is exactly zero
        t = np.asarray(space.selfmap)
        fixed_after = _merged_within(t, terms)
        tail = np.where(fixed_after, 0.0, tail)
    else:
        table = np.array([[_series(space, x, y, lam, terms) for y in pts] for x in pts])
    table.setflags(write=False)
    tail.setflags(write=False)
    return DerivedMetric(space, lam, alpha, table, tail, terms, tol)


def _merged_within(t, terms):
    """``[i, j]`` true when ``T^k i == T^k j`` for some ``k < terms``."""
    n = len(t)
    cur = np.arange(n)
    merged = np.eye(n, dtype=bool)
    for _ in range(min(terms - 1, n)):
        cur = t[cur]
        merged |= cur[:, None] == cur[None, :]
    return merged


@dataclass(frozen=True)
class MaiaReport:
    identity: bool
    subordination: bool
    axioms: bool
    contraction_mu: bool
    symmetric: bool
    witnesses: dict
    max_identity_residual: float

    @property
    def ok(self):
        return self.identity and self.subordination and self.axioms and self.contraction_mu

    def to_json(self):
        return {
            "identity": self.identity,
            "subordination": self.subordination,
            "axioms": self.axioms,
            "contraction_mu": self.contraction_mu,
            "symmetric": self.symmetric,
            "max_identity_residual": self.max_identity_residual,
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
        }


def verify_maia_properties(dm):
    """Identity, domination of ``d``, almost-metric axioms and ``1/lam`` contraction.

    Each entry is compared with ``2*tail + 1e-12*max(1, |e|)`` slack.
    """
    space = dm.space
    pts = list(space.points)
    n = len(pts)
    e = dm.table
    witnesses = {}
    worst = 0.0
    for i, x in enumerate(pts):
        tx = space.T(x)
        for j, y in enumerate(pts):
            ty = space.T(y)
            s = dm.slack(i, j)
            e_t = dm.value(tx, ty)
            resid = abs(e[i, j] - (space.d(x, y) + dm.lam * e_t))
            worst = max(worst, resid)
            if resid > s and "identity" not in witnesses:
                witnesses["identity"] = (i, j)
            if e[i, j] + s < space.d(x, y) and "subordination" not in witnesses:
                witnesses["subordination"] = (i, j)
            if e_t > dm.mu * e[i, j] + s and "contraction_mu" not in witnesses:
                witnesses["contraction_mu"] = (i, j)
    diag = np.diag(e)
    if np.any(diag != 0):
        witnesses["axioms"] = (int(np.flatnonzero(diag)[0]),) * 2
    off = ~np.eye(n, dtype=bool)
    zero = np.argwhere((e == 0) & off)
    if len(zero) and "axioms" not in witnesses:
        witnesses["axioms"] = tuple(int(v) for v in zero[0])
    if "axioms" not in witnesses:
        slack = 2.0 * dm.tail[:, None, :] + 1e-12 * np.maximum(1.0, np.abs(e))[:, None, :]
        bad = e[:, None, :] > e[:, :, None] + e[None, :, :] + slack
        if bad.any():
            witnesses["axioms"] = tuple(int(v) for v in np.argwhere(bad)[0])
    return MaiaReport(
        identity="identity" not in witnesses,
        subordination="subordination" not in witnesses,
        axioms="axioms" not in witnesses,
        contraction_mu="contraction_mu" not in witnesses,
        symmetric=bool(np.array_equal(e, e.T)),
        witnesses=witnesses,
        max_identity_residual=float(worst),
    )
