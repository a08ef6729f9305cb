"""Finite quasi-ordered (almost-)metric spaces.

A :class:`FiniteSpace` is a carrier ``0..n-1`` with a distance table, a
relation table for the (quasi-)order and an optional self-map.  Everything
here is exhaustive: axioms, comparability, chains and bound checks are
decided by scanning the tables.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels
from .errors import InputError

__all__ = [
    "FiniteSpace",
    "AxiomReport",
    "BoundsReport",
    "order_from_pairs",
    "check_axioms",
    "comparable",
    "comparability",
    "find_chain",
    "chain_components",
    "check_bounds_and_directedness",
]

AXIOMS = {
    "metric": ("nonnegative", "reflexive", "symmetric", "triangular", "sufficient"),
    "almost-metric": ("nonnegative", "reflexive", "triangular", "sufficient"),
    "quasi-order": ("reflexive", "transitive"),
    "order": ("reflexive", "transitive", "antisymmetric"),
}


def _readonly(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FiniteSpace:
    """Immutable finite space ``(X, d, <=, T)``.

    ``order[i, j]`` reads ``i <= j``; ``selfmap[i]`` is the image of ``i``.
    Shapes are validated on construction, axioms are not (see
    :func:`check_axioms`).
    """

    dist: np.ndarray
    order: np.ndarray
    selfmap: np.ndarray | None = None
    labels: tuple | None = field(default=None)

    def __post_init__(self):
        try:
            dist = np.array(self.dist, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise InputError(f"dist is not a numeric table: {exc}") from None
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1] or dist.shape[0] == 0:
            raise InputError(f"dist must be a nonempty square table, got shape {dist.shape}")
        n = dist.shape[0]
        if not np.all(np.isfinite(dist)):
            raise InputError("dist contains non-finite entries")
        order = np.array(self.order, dtype=bool)
        if order.shape != (n, n):
            raise InputError(f"order must have shape {(n, n)}, got {order.shape}")
        selfmap = None
        if self.selfmap is not None:
            selfmap = np.array(self.selfmap, dtype=np.int_)
            if selfmap.shape != (n,):
                raise InputError(f"selfmap must have length {n}, got shape {selfmap.shape}")
            if selfmap.size and (selfmap.min() < 0 or selfmap.max() >= n):
                raise InputError("selfmap has an image outside 0..n-1")
            selfmap = _readonly(selfmap)
        labels = None if self.labels is None else tuple(self.labels)
        if labels is not None and len(labels) != n:
            raise InputError(f"labels must have length {n}")
        object.__setattr__(self, "dist", _readonly(dist))
        object.__setattr__(self, "order", _readonly(order))
        object.__setattr__(self, "selfmap", selfmap)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self):
        return self.dist.shape[0]

    @property
    def points(self):
        return range(self.n)

    @property
    def symmetric(self):
        return bool(np.array_equal(self.dist, self.dist.T))

    @property
    def has_selfmap(self):
        return self.selfmap is not None

    def d(self, x, y):
        return float(self.dist[x, y])

    def leq(self, x, y):
        return bool(self.order[x, y])

    def T(self, x):
        if self.selfmap is None:
            raise InputError("space has no self-map")
        return int(self.selfmap[x])

    def with_selfmap(self, selfmap):
        return FiniteSpace(self.dist, self.order, selfmap, self.labels)

    def with_dist(self, dist):
        return FiniteSpace(dist, self.order, self.selfmap, self.labels)

    def with_order(self, order):
        return FiniteSpace(self.dist, order, self.selfmap, self.labels)

    def __eq__(self, other):
        if not isinstance(other, FiniteSpace):
            return NotImplemented
        same_map = (self.selfmap is None and other.selfmap is None) or (
            self.selfmap is not None
            and other.selfmap is not None
            and np.array_equal(self.selfmap, other.selfmap)
        )
        return (
            np.array_equal(self.dist, other.dist)
            and np.array_equal(self.order, other.order)
            and same_map
            and self.labels == other.labels
        )

    def __hash__(self):
        sm = None if self.selfmap is None else self.selfmap.tobytes()
        return hash((self.dist.tobytes(), self.order.tobytes(), sm, self.labels))

    def __repr__(self):
        return f"FiniteSpace(n={self.n}, symmetric={self.symmetric}, selfmap={self.has_selfmap})"


def order_from_pairs(n, pairs):
    """Reflexive-transitive closure of the relation given by ``(i, j)`` pairs (``i <= j``)."""
    rel = np.eye(n, dtype=bool)
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise InputError(f"order pair {(i, j)} out of range for n={n}")
        rel[i, j] = True
    return kernels.transitive_closure(rel)


@dataclass(frozen=True)
class AxiomReport:
    mode: str
    results: dict
    witnesses: dict

    @property
    def ok(self):
        return all(self.results.values())

    def failed(self):
        return [name for name, held in self.results.items() if not held]


def _first(mask):
    hits = np.argwhere(mask)
    return tuple(int(v) for v in hits[0]) if len(hits) else None


def _distance_axiom(d, name):
    n = d.shape[0]
    if name == "nonnegative":
        return _first(d < 0)
    if name == "reflexive":
        w = _first(np.diag(d) != 0)
        return None if w is None else (w[0], w[0])
    if name == "symmetric":
        return _first(d != d.T)
    if name == "triangular":
        return kernels.triangle_violation(d)
    if name == "sufficient":
        return _first((d == 0) & ~np.eye(n, dtype=bool))
    raise InputError(f"unknown distance axiom {name!r}")


def _order_axiom(r, name):
    n = r.shape[0]
    if name == "reflexive":
        w = _first(~np.diag(r))
        return None if w is None else (w[0], w[0])
    if name == "transitive":
        return kernels.transitivity_violation(r)
    if name == "antisymmetric":
        return _first(r & r.T & ~np.eye(n, dtype=bool))
    raise InputError(f"unknown order axiom {name!r}")


def check_axioms(space, mode):
    """Exhaustively check the axiom set of ``mode``.

    Modes: ``metric``, ``almost-metric`` (metric without symmetry),
    ``quasi-order`` and ``order`` (quasi-order plus antisymmetry). Each failed
    axiom carries its first violating index tuple.
    """
    if mode not in AXIOMS:
        raise InputError(f"unknown axiom mode {mode!r}; expected one of {sorted(AXIOMS)}")
    results, witnesses = {}, {}
    for name in AXIOMS[mode]:
        if mode in ("metric", "almost-metric"):
            w = _distance_axiom(space.dist, name)
        else:
            w = _order_axiom(space.order, name)
        results[name] = w is None
        if w is not None:
            witnesses[name] = w
    return AxiomReport(mode, results, witnesses)


def recheck_witness(space, mode, name, witness):
    """True iff ``witness`` really violates axiom ``name`` (independent re-evaluation)."""
    d, r = space.dist, space.order
    if mode in ("metric", "almost-metric"):
        if name == "nonnegative":
            return d[witness] < 0
        if name == "reflexive":
            return d[witness[0], witness[0]] != 0
        if name == "symmetric":
            i, j = witness
            return d[i, j] != d[j, i]
        if name == "triangular":
            i, j, k = witness
            return d[i, k] > d[i, j] + d[j, k]
        if name == "sufficient":
            i, j = witness
            return i != j and d[i, j] == 0
    else:
        if name == "reflexive":
            return not r[witness[0], witness[0]]
        if name == "transitive":
            i, j, k = witness
            return r[i, j] and r[j, k] and not r[i, k]
        if name == "antisymmetric":
            i, j = witness
            return i != j and r[i, j] and r[j, i]
    raise InputError(f"unknown axiom {name!r} for mode {mode!r}")


def _check_index(space, *points):
    for p in points:
        if not 0 <= p < space.n:
            raise InputError(f"point {p} out of range 0..{space.n - 1}")


def comparability(space):
    """The symmetric relation ``x <> y`` as a boolean table."""
    return space.order | space.order.T


def comparable(space, x, y):
    _check_index(space, x, y)
    return bool(space.order[x, y] or space.order[y, x])


def find_chain(space, x, y):
    """Shortest ``<>``-chain from ``x`` to ``y`` as a list, or None.

    Breadth-first over the comparability graph, neighbours visited in
    increasing index order. ``x == y`` gives the degenerate chain ``[x]``.
    """
    _check_index(space, x, y)
    if x == y:
        return [x]
    comp = comparability(space)
    parent = {x: None}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(comp[u]):
            v = int(v)
            if v in parent:
                continue
            parent[v] = u
            if v == y:
                chain = [y]
                while parent[chain[-1]] is not None:
                    chain.append(parent[chain[-1]])
                return chain[::-1]
            queue.append(v)
    return None


def chain_components(space):
    """Blocks of the chain-equivalence ``~``, each sorted, ordered by least element."""
    _, labels = connected_components(csr_matrix(comparability(space)), directed=False)
    blocks = {}
    for p, lab in enumerate(labels):
        blocks.setdefault(int(lab), []).append(p)
    return sorted(blocks.values(), key=lambda b: b[0])


@dataclass(frozen=True)
class BoundsReport:
    a05: bool
    d03: bool
    d04: bool
    linear: bool
    witnesses: dict


def check_bounds_and_directedness(space):
    """Lower/upper bounds for every pair, and the two conditions on ``X_(<=)``.

    ``d03``: the comparability relation is transitive. ``d04``: every
    incomparable pair has a common comparable point. ``linear`` is the direct
    test that every pair is comparable.
    """
    r = space.order.astype(np.int64)
    has_lower = (r.T @ r) > 0  # exists u: u<=x and u<=y
    has_upper = (r @ r.T) > 0  # exists v: x<=v and y<=v
    comp = comparability(space)
    ci = comp.astype(np.int64)
    witnesses = {}
    bad = _first(~(has_lower & has_upper))
    if bad is not None:
        witnesses["a05"] = bad
    d03_w = kernels.transitivity_violation(comp)
    if d03_w is not None:
        witnesses["d03"] = d03_w
    common = (ci @ ci) > 0
    bad = _first(~comp & ~common)
    if bad is not None:
        witnesses["d04"] = bad
    linear = bool(comp.all())
    if not linear:
        witnesses["linear"] = _first(~comp)
    return BoundsReport(
        a05="a05" not in witnesses,
        d03=d03_w is None,
        d04="d04" not in witnesses,
        linear=linear,
        witnesses=witnesses,
    )
