"""Contraction and structural hypotheses on a space with a self-map.

Works on a :class:`~ordfix.spaces.FiniteSpace` (exhaustive, with compiled
fast paths for the linear variants) and on any object exposing ``points``,
``d``, ``leq`` and ``T`` (scanned pair by pair over ``points``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

from . import kernels
from .compfn import DEFAULT_PLAN, PointGaugeFamily, ScalarGauge, UniformFamily
from .errors import InputError
from .spaces import FiniteSpace

__all__ = [
    "ContractionVariant",
    "ContractionReport",
    "MonotoneReport",
    "HLMTriple",
    "Progressive",
    "E1011Report",
    "progressive_sets",
    "check_monotone",
    "hlm",
    "hlm_tables",
    "check_contraction",
    "recheck_violation",
    "check_e10_e11",
    "metric_fn",
    "metric_table",
    "power",
]

# descriptive tag -> short label
VARIANTS = {
    "order-linear": "a02",
    "plain-linear": "b04",
    "eM-order": "c06",
    "eM-plain": "d01",
    "phi-order": "d02",
    "iterative": "e07",
    "iterative-uniform": "e12",
}
_BY_LABEL = {v: k for k, v in VARIANTS.items()}
_ORDERED = {"order-linear", "eM-order", "phi-order"}
_LINEAR = {"order-linear", "plain-linear"}
_GAUGED = {"eM-order", "eM-plain", "phi-order"}


def _need_selfmap(space):
    if not space.has_selfmap:
        raise InputError("operation needs a self-map")


def metric_fn(space, metric=None):
    """Distance callable for the selector: None (base), a table, or a derived metric."""
    if metric is None:
        return space.d
    if hasattr(metric, "value"):
        return metric.value
    table = np.asarray(metric, dtype=np.float64)
    return lambda x, y: float(table[x, y])


def metric_table(space, metric=None):
    if metric is None:
        return space.dist
    if hasattr(metric, "table"):
        return metric.table
    table = np.asarray(metric, dtype=np.float64)
    if table.shape != space.dist.shape:
        raise InputError(f"metric table shape {table.shape} does not match the space")
    return table


def power(space, x, k):
    """``T^k x``."""
    for _ in range(k):
        x = space.T(x)
    return x


class Progressive(NamedTuple):
    leq: frozenset  # {x : x <= Tx}
    comp: frozenset  # {x : x <> Tx}


def progressive_sets(space):
    _need_selfmap(space)
    leq, comp = set(), set()
    for x in space.points:
        tx = space.T(x)
        up, down = space.leq(x, tx), space.leq(tx, x)
        if up:
            leq.add(x)
        if up or down:
            comp.add(x)
    return Progressive(frozenset(leq), frozenset(comp))


@dataclass(frozen=True)
class MonotoneReport:
    mode: str
    increasing: bool
    decreasing: bool
    witness_increasing: tuple | None
    witness_decreasing: tuple | None
    pairs_checked: int

    @property
    def holds(self):
        return self.increasing

    @property
    def monotone(self):
        """Increasing or decreasing."""
        return self.increasing or self.decreasing


def check_monotone(space, mode="leq"):
    """``leq``: ``x <= y => Tx <= Ty`` (dual checked too); ``comparability``: ``x <> y => Tx <> Ty``."""
    _need_selfmap(space)
    if mode not in ("leq", "comparability"):
        raise InputError(f"unknown monotonicity mode {mode!r}")
    if isinstance(space, FiniteSpace):
        r = space.order
        rel = r if mode == "leq" else (r | r.T)
        t = space.selfmap
        image = rel[np.ix_(t, t)]
        inc_bad = rel & ~image
        dec_bad = rel & ~image.T
        w_inc = tuple(int(v) for v in np.argwhere(inc_bad)[0]) if inc_bad.any() else None
        w_dec = tuple(int(v) for v in np.argwhere(dec_bad)[0]) if dec_bad.any() else None
        return MonotoneReport(mode, w_inc is None, w_dec is None, w_inc, w_dec, int(rel.sum()))
    if mode == "leq":
        rel = space.leq
    else:
        def rel(x, y):
            return space.leq(x, y) or space.leq(y, x)
    w_inc = w_dec = None
    checked = 0
    for x in space.points:
        for y in space.points:
            if not rel(x, y):
                continue
            checked += 1
            tx, ty = space.T(x), space.T(y)
            if w_inc is None and not rel(tx, ty):
                w_inc = (x, y)
            if w_dec is None and not rel(ty, tx):
                w_dec = (x, y)
    return MonotoneReport(mode, w_inc is None, w_dec is None, w_inc, w_dec, checked)


class HLMTriple(NamedTuple):
    H: float
    L: float
    M: float


def hlm(space, x, y, metric=None):
    _need_selfmap(space)
    e = metric_fn(space, metric)
    tx, ty = space.T(x), space.T(y)
    H = max(e(x, tx), e(y, ty))
    L = 0.5 * (e(x, ty) + e(tx, y))
    return HLMTriple(H, L, max(e(x, y), H, L))


def hlm_tables(space, metric=None):
    """``(H, L, M)`` as n-by-n tables on a finite space."""
    _need_selfmap(space)
    e = metric_table(space, metric)
    t = space.selfmap
    step = e[np.arange(space.n), t]
    H = np.maximum(step[:, None], step[None, :])
    L = 0.5 * (e[:, t] + e[t, :])
    M = np.maximum(np.maximum(e, H), L)
    return H, L, M


@dataclass(frozen=True)
class ContractionVariant:
    """Which inequality to check, with its parameter and metric selector.

    ``tag`` accepts either the descriptive name (``order-linear``) or the
    short label (``a02``).
    """

    tag: str
    alpha: float | None = None
    gauge: ScalarGauge | None = None
    family: PointGaugeFamily | UniformFamily | None = None
    metric: Any = field(default=None, compare=False)

    def __post_init__(self):
        tag = _BY_LABEL.get(self.tag, self.tag)
        if tag not in VARIANTS:
            raise InputError(f"unknown contraction variant {self.tag!r}")
        object.__setattr__(self, "tag", tag)
        if tag in _LINEAR:
            if self.alpha is None or not 0 < self.alpha < 1:
                raise InputError(f"{tag} needs 0 < alpha < 1, got {self.alpha!r}")
        elif tag in _GAUGED:
            if self.gauge is None:
                raise InputError(f"{tag} needs a gauge")
        elif tag == "iterative":
            if not isinstance(self.family, PointGaugeFamily):
                raise InputError("iterative variant needs a PointGaugeFamily")
        elif tag == "iterative-uniform":
            if not isinstance(self.family, UniformFamily):
                raise InputError("iterative-uniform variant needs a UniformFamily")

    @property
    def label(self):
        return VARIANTS[self.tag]

    def to_json(self):
        out = {"tag": self.tag}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        if self.gauge is not None:
            out["gauge"] = self.gauge.to_json()
        if self.family is not None:
            out["family"] = self.family.to_json()
        return out

    @classmethod
    def from_json(cls, spec, metric=None):
        tag = _BY_LABEL.get(spec.get("tag"), spec.get("tag"))
        family = None
        if "family" in spec:
            fam = spec["family"]
            family = (UniformFamily if tag == "iterative-uniform" else PointGaugeFamily).from_json(fam)
        gauge = ScalarGauge.from_json(spec["gauge"]) if "gauge" in spec else None
        return cls(tag, alpha=spec.get("alpha"), gauge=gauge, family=family, metric=metric)


@dataclass(frozen=True)
class ContractionReport:
    tag: str
    holds: bool
    witness: tuple | None
    lhs: float | None
    rhs: float | None
    pairs_checked: int

    def to_json(self):
        return {
            "tag": self.tag,
            "label": VARIANTS[self.tag],
            "holds": self.holds,
            "witness": None if self.witness is None else list(self.witness),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "pairs_checked": self.pairs_checked,
        }


def _sides(space, variant, x, y, e, orbit_cache):
    """Both sides of the variant's inequality at ``(x, y)``."""
    tag = variant.tag
    if tag in _LINEAR:
        return e(space.T(x), space.T(y)), variant.alpha * e(x, y)
    if tag in ("eM-order", "eM-plain"):
        return e(space.T(x), space.T(y)), variant.gauge(hlm(space, x, y, variant.metric).M)
    if tag == "phi-order":
        return e(space.T(x), space.T(y)), variant.gauge(e(x, y))
    fam = variant.family
    n = fam.n(x)
    if x not in orbit_cache:
        pts = [x]
        for _ in range(n):
            pts.append(space.T(pts[-1]))
        orbit_cache[x] = pts
    ox = orbit_cache[x]
    oy = [y]
    for _ in range(n):
        oy.append(space.T(oy[-1]))
    lhs = e(ox[n], oy[n])
    if tag == "iterative":
        alphas = [e(x, p) for p in ox[1:]]
        betas = [e(x, q) for q in oy]
        return lhs, fam.f(x)(alphas, betas)
    return lhs, fam.gauge(e(x, y))


def _pairs(space, variant):
    tag = variant.tag
    pts = list(space.points)
    if tag in ("iterative", "iterative-uniform"):
        Y = progressive_sets(space).leq
        return [(x, y) for x in pts for y in pts if x in Y and y in Y and space.leq(x, y)]
    if tag in _ORDERED:
        return [(x, y) for x in pts for y in pts if space.leq(x, y)]
    return [(x, y) for x in pts for y in pts]


def check_contraction(space, variant, slack=0.0):
    """Check the variant's inequality over its quantified pairs.

    Order variants scan ``{(x, y): x <= y}``, plain ones all pairs, the
    iterative ones ``{(x, y) in Y x Y: x <= y}`` with ``Y = {x: x <= Tx}``.
    The first violating pair in lexicographic order is the witness.
    ``slack`` is added to the right-hand side (0 means exact comparison).
    """
    _need_selfmap(space)
    if variant.tag in _LINEAR and isinstance(space, FiniteSpace):
        table = metric_table(space, variant.metric)
        mask = space.order if variant.tag == "order-linear" else np.ones_like(space.order)
        i, j, checked = kernels.linear_contraction_violation(
            table, space.selfmap, mask, variant.alpha, slack
        )
        if i < 0:
            return ContractionReport(variant.tag, True, None, None, None, checked)
        t = space.selfmap
        return ContractionReport(
            variant.tag, False, (i, j), float(table[t[i], t[j]]), variant.alpha * float(table[i, j]), checked
        )
    e = metric_fn(space, variant.metric)
    cache = {}
    checked = 0
    for x, y in _pairs(space, variant):
        checked += 1
        lhs, rhs = _sides(space, variant, x, y, e, cache)
        if lhs > rhs + slack:
            return ContractionReport(variant.tag, False, (x, y), lhs, rhs, checked)
    return ContractionReport(variant.tag, True, None, None, None, checked)


def recheck_violation(space, variant, report, slack=0.0):
    """Independently re-evaluate a report's witness; True iff it strictly fails."""
    if report.witness is None:
        return False
    x, y = report.witness
    lhs, rhs = _sides(space, variant, x, y, metric_fn(space, variant.metric), {})
    return lhs > rhs + slack


@dataclass(frozen=True)
class E1011Report:
    e10: bool
    e11: bool
    betas: dict  # point -> list of (alphas, beta) found for (e10)
    witnesses: dict
    plan: str

    @property
    def holds(self):
        return self.e10 and self.e11


def _alpha_vectors(n, plan, rng):
    """Sampled nonnegative vectors of length ``n``: constant ones plus random ones."""
    lo, hi = min(plan.grid_exponents), max(plan.grid_exponents)
    vecs = [tuple([float(s)] * n) for s in plan.samples()]
    for _ in range(32):
        vecs.append(tuple(float(v) for v in 10.0 ** rng.uniform(lo, hi, size=n)))
    return vecs


def _e10_beta(f, alphas, max_halvings=80):
    n = len(alphas)
    target = alphas[-1]
    beta = 0.5 * target
    for _ in range(max_halvings):
        if beta + f(alphas, (beta,) * (n + 1)) < target:
            return beta
        beta *= 0.5
    return None


def check_e10_e11(family, space=None, plan=DEFAULT_PLAN):
    """Sampled check of the two per-point conditions on ``f(x)``.

    (e10): for alpha-vectors with a positive last entry, a ``beta > 0`` with
    ``beta + f(alpha; beta..beta) < alpha_n`` is searched by halving from
    ``alpha_n / 2``. (e11): for vectors with ``alpha_1 > 0 = alpha_n``,
    ``f(alpha; alpha, alpha_1) < alpha_1``. Points range over ``Y`` when a
    space with a self-map is given, else over every point of the family.
    """
    if space is not None and space.has_selfmap:
        points = sorted(progressive_sets(space).leq)
    else:
        points = list(range(len(family.exponents)))
    rng = np.random.default_rng(plan.seed + 2)
    e10 = e11 = True
    betas, witnesses = {}, {}
    for x in points:
        n, f = family.n(x), family.f(x)
        vecs = _alpha_vectors(n, plan, rng)
        found = []
        for alphas in vecs:
            if e10 and alphas[-1] > 0:
                beta = _e10_beta(f, alphas)
                if beta is None:
                    e10 = False
                    witnesses["e10"] = (x, alphas)
                else:
                    found.append((alphas, beta))
            if e11 and n >= 2:
                a = alphas[:-1] + (0.0,)
                if not f(a, a + (a[0],)) < a[0]:
                    e11 = False
                    witnesses["e11"] = (x, a)
        betas[x] = found
    return E1011Report(e10, e11, betas, witnesses, plan.name)
