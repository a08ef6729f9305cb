"""Random and curated instances, plus the shared JSON instance format.

The generator builds a self-map first (a random rooted forest, so every
orbit ends in a root), then an order that ``T`` preserves, then a metric
under which ``T`` contracts: a random dyadic metric ``d0`` is folded along
orbits as ``d = sum_{k<=K} lam**k d0(T^k ., T^k .)`` with ``T^K`` collapsing
each tree, which gives ``d(Tx, Ty) <= d(x, y) / lam`` for same-tree pairs.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .compfn import PointGaugeFamily, ScalarGauge, UniformFamily, VectorGauge
from .errors import GenerationError, InputError, PreconditionError
from .maia import DerivedMetric, build_maia_metric
from .oracle import SuiteParams, canonical_theorem, theorem_suite
from .spaces import FiniteSpace, chain_components, check_axioms, order_from_pairs

__all__ = [
    "GeneratorParams",
    "InstanceSpec",
    "AnalyticSpace",
    "gen_random_space",
    "gen_theorem_instance",
    "builtin_library",
    "library_names",
    "get_instance",
    "half_map_analytic",
    "parse_instance",
    "instance_to_json",
    "t8_quasi_order_counterexample",
]

_MONOTONE = {"a04", "b02", "c05", "e06"}
_CONNECT = {"a05", "b03"}
_CONTRACT = {"a02", "b04", "c06", "d01", "d02", "e07", "e12"}
_ORDER_KIND = {
    "T1-RanReurings": "total",
    "T2": "closure",
    "T3-Maia": "closure",
    "T4": "closure",
    "C1": "trivial",
    "C2": "total",
    "T6": "closure",
    "T7": "closure",
    "T8": "closure",
    "T9": "closure",
}
_NEEDS_ANTISYMMETRY = {"T1-RanReurings", "T2", "T3-Maia", "C2", "T7", "T8"}


@dataclass(frozen=True)
class GeneratorParams:
    """Knobs for the random generator; ``drop`` names hypotheses left unenforced."""

    seed: int = 0
    n: int = 6
    order_density: float = 0.3
    alpha: float = 0.5
    target: str = "T2"
    max_attempts: int = 50
    drop: tuple = ()
    gauge: str = "linear"
    quasi: bool = False
    asymmetric: bool = False
    max_exponent: int = 2

    def __post_init__(self):
        if int(self.n) < 1:
            raise InputError("n must be >= 1")
        if not 0 < float(self.alpha) < 1:
            raise InputError("alpha must lie in (0, 1)")
        if not 0 <= float(self.order_density) <= 1:
            raise InputError("order_density must lie in [0, 1]")
        if self.gauge not in ("linear", "rational"):
            raise InputError("gauge must be 'linear' or 'rational'")
        if int(self.max_attempts) < 1 or int(self.max_exponent) < 1:
            raise InputError("max_attempts and max_exponent must be >= 1")
        object.__setattr__(self, "target", canonical_theorem(self.target))
        drop = (self.drop,) if isinstance(self.drop, str) else tuple(self.drop)
        object.__setattr__(self, "drop", drop)

    @classmethod
    def from_string(cls, text):
        """Parse ``"n=6,alpha=0.5,target=T4,drop=c05"`` (drop accepts ``a+b``)."""
        kwargs = {}
        types = {f: t for f, t in cls.__dataclass_fields__.items()}
        for item in filter(None, (s.strip() for s in text.split(","))):
            if "=" not in item:
                raise InputError(f"generator parameter {item!r} is not key=value")
            key, val = (s.strip() for s in item.split("=", 1))
            if key not in types:
                raise InputError(f"unknown generator parameter {key!r}")
            try:
                if key in ("seed", "n", "max_attempts", "max_exponent"):
                    kwargs[key] = int(val)
                elif key in ("order_density", "alpha"):
                    kwargs[key] = float(val)
                elif key in ("quasi", "asymmetric"):
                    kwargs[key] = val.lower() in ("1", "true", "yes")
                elif key == "drop":
                    kwargs[key] = tuple(v for v in val.split("+") if v)
                else:
                    kwargs[key] = val
            except ValueError:
                raise InputError(f"bad value for {key}: {val!r}") from None
        return cls(**kwargs)

    def to_json(self):
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["drop"] = list(self.drop)
        return out


class AnalyticSpace:
    """A real-valued carrier given by callables, scanned on a finite grid of points."""

    has_selfmap = True

    def __init__(self, name, grid, selfmap, dist, leq, symmetric=True):
        self.name = name
        self.points = tuple(grid)
        self._T = selfmap
        self._d = dist
        self._leq = leq
        self.symmetric = symmetric

    def T(self, x):
        return self._T(x)

    def d(self, x, y):
        return self._d(x, y)

    def leq(self, x, y):
        return self._leq(x, y)

    def __repr__(self):
        return f"AnalyticSpace({self.name!r}, grid={self.points})"


@dataclass(frozen=True, eq=False)
class InstanceSpec:
    name: str
    space: object
    alpha: float | None = None
    mu: float | None = None
    phi: ScalarGauge | None = None
    family: object = None
    metric: object = None
    modes: tuple = ("metric", "order")
    provenance: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)

    def suite_params(self, slack=0.0, **overrides):
        base = SuiteParams(
            alpha=self.alpha, mu=self.mu, phi=self.phi, family=self.family, metric=self.metric, slack=slack
        )
        return replace(base, **overrides)

    def to_json(self):
        return instance_to_json(self)

    def __eq__(self, other):
        if not isinstance(other, InstanceSpec):
            return NotImplemented
        return self.to_json() == other.to_json()

    def __hash__(self):
        return hash(json.dumps(self.to_json(), sort_keys=True))


# ---------------------------------------------------------------- generation


def _rng(seed):
    return np.random.default_rng(seed)


def _random_dag(rng, n, density, allowed=None):
    perm = rng.permutation(n)
    rel = np.eye(n, dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = perm[i], perm[j]
            if allowed is not None and not allowed[a, b]:
                continue
            if rng.random() < density:
                rel[a, b] = True
    return rel


def _dyadic_metric(rng, n, asymmetric=False):
    w = rng.integers(1, 17, size=(n, n)).astype(np.float64) / 16.0
    if not asymmetric:
        w = np.triu(w, 1)
        w = w + w.T
    np.fill_diagonal(w, 0.0)
    d = kernels.floyd_warshall(w)
    off = ~np.eye(n, dtype=bool)
    if np.any((d == 0) & off):
        d = kernels.floyd_warshall(np.where(off & (d == 0), 2.0**-20, d))
    return d


def gen_random_space(params):
    """Random metric (dyadic weights closed under shortest paths) and DAG-closure order."""
    if not isinstance(params, GeneratorParams):
        raise InputError("gen_random_space expects GeneratorParams")
    rng = _rng(params.seed)
    n = params.n
    dist = _dyadic_metric(rng, n, params.asymmetric)
    rel = _random_dag(rng, n, params.order_density)
    if params.quasi and n >= 2:
        a, b = rng.choice(n, size=2, replace=False)
        rel[a, b] = rel[b, a] = True
    return FiniteSpace(dist, kernels.transitive_closure(rel))


def _forest(rng, n, roots):
    perm = rng.permutation(n)
    t = np.empty(n, dtype=np.int_)
    t[perm[:roots]] = perm[:roots]
    for i in range(roots, n):
        t[perm[i]] = perm[rng.integers(0, i)]
    # depth and tree id
    depth = np.zeros(n, dtype=np.int_)
    tree = np.empty(n, dtype=np.int_)
    for x in range(n):
        y, k = x, 0
        while t[y] != y:
            y, k = t[y], k + 1
        depth[x], tree[x] = k, y
    return t, depth, tree


def _close_under_map(rel, t):
    """Smallest transitive relation containing ``rel`` and closed under ``T x T``."""
    rel = kernels.transitive_closure(rel)
    while True:
        idx = np.argwhere(rel)
        grown = rel.copy()
        grown[t[idx[:, 0]], t[idx[:, 1]]] = True
        grown = kernels.transitive_closure(grown)
        if np.array_equal(grown, rel):
            return rel
        rel = grown


def _total_order(rng, t, depth):
    n = len(t)
    rank = np.empty(n, dtype=np.int_)
    key = {}
    pos = 0
    for lvl in range(int(depth.max()) + 1):
        members = [x for x in range(n) if depth[x] == lvl]
        tie = rng.random(len(members))
        members = [m for _, _, m in sorted(
            (key.get(int(t[m]), -1) if lvl else 0, tie[i], m) for i, m in enumerate(members))]
        for m in members:
            key[m] = pos
            rank[m] = pos
            pos += 1
    up = rng.random() < 0.5  # root on top: every point lies below its image
    if up:
        return rank[:, None] >= rank[None, :]
    return rank[:, None] <= rank[None, :]


def _tree_order(t):
    """``x <= T^k x`` for every ``k``: closed under the map and antisymmetric on a forest."""
    n = len(t)
    rel = np.eye(n, dtype=bool)
    cur = np.arange(n)
    for _ in range(n):
        cur = t[cur]
        rel[np.arange(n), cur] = True
    return rel


def _has_cycle(rel):
    return bool((rel & rel.T & ~np.eye(len(rel), dtype=bool)).any())


def _antisymmetric_order(rng, t, density, allowed, monotone):
    """Random order grown one pair at a time, keeping a pair only if the closure stays antisymmetric."""
    n = len(t)

    def close(r):
        return _close_under_map(r, t) if monotone else kernels.transitive_closure(r)

    rel = np.eye(n, dtype=bool)
    if rng.random() < 0.5:
        rel = _tree_order(t)
        if rng.random() < 0.5:
            rel = rel.T.copy()
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for k in rng.permutation(len(pairs)):
        i, j = pairs[k]
        if rng.random() >= density or (allowed is not None and not allowed[i, j]):
            continue
        a, b = (i, j) if rng.random() < 0.5 else (j, i)
        trial = rel.copy()
        trial[a, b] = True
        trial = close(trial)
        if not _has_cycle(trial):
            rel = trial
    return rel


def _connect_antisymmetric(rng, rel, t):
    tree = _tree_order(t)
    for cand in rng.permutation(2):
        joined = _close_under_map(rel | (tree if cand == 0 else tree.T), t)
        if not _has_cycle(joined):
            return joined
    return rel


def _fold_metric(d0, t, lam, depth_max):
    n = len(t)
    cur = np.arange(n)
    d = np.zeros_like(d0)
    w = 1.0
    for _ in range(depth_max + 1):
        d = d + w * d0[np.ix_(cur, cur)]
        cur = t[cur]
        w *= lam
    return d


def _dyadic_lambda(alpha):
    return math.ceil(4.0 * 1.05 / alpha) / 4.0


def _attach(target, rng, space, params, exps):
    a = params.alpha
    phi = ScalarGauge.linear(a) if params.gauge == "linear" else ScalarGauge.rational(1.0)
    out = {"alpha": a}
    if target in ("T4", "C1", "C2"):
        out["phi"] = phi
    if target in ("T6", "T7", "T8"):
        out["family"] = PointGaugeFamily.shared(exps, VectorGauge.max_tail(a))
    if target == "T9":
        out["family"] = UniformFamily(exps, phi)
    if target == "T3-Maia":
        dm = build_maia_metric(space, a)
        out["metric"] = dm
        out["mu"] = dm.mu
    return out


def _candidate(params, rng):
    target = params.target
    n = params.n
    drop = set(params.drop)
    forest = bool(drop & _CONNECT) and n >= 2
    monotone = not (drop & _MONOTONE)
    contract = not (drop & _CONTRACT)
    kind = _ORDER_KIND[target]
    if forest and kind == "total":
        kind = "closure"
    t, depth, tree = _forest(rng, n, 2 if forest else 1)
    same_tree = tree[:, None] == tree[None, :]
    if kind == "trivial":
        rel = np.ones((n, n), dtype=bool)
    elif kind == "total":
        rel = _total_order(rng, t, depth)
    elif target in _NEEDS_ANTISYMMETRY:
        rel = _antisymmetric_order(rng, t, params.order_density, same_tree if forest else None, monotone)
        if not forest and target in ("T2", "T3-Maia") and monotone:
            if len(chain_components(FiniteSpace(np.zeros((n, n)), rel))) > 1:
                rel = _connect_antisymmetric(rng, rel, t)
    else:
        rel = _random_dag(rng, n, params.order_density, allowed=same_tree if forest else None)
        if params.quasi and n >= 2 and target not in _NEEDS_ANTISYMMETRY:
            cand = np.argwhere(same_tree & ~np.eye(n, dtype=bool))
            if len(cand):
                a, b = cand[rng.integers(len(cand))]
                rel[a, b] = rel[b, a] = True
        rel = _close_under_map(rel, t) if monotone else kernels.transitive_closure(rel)
    d0 = _dyadic_metric(rng, n, params.asymmetric and target in ("T4", "C1"))
    if contract:
        lam = _dyadic_lambda(params.alpha)
        d = _fold_metric(d0, t, lam, int(depth.max()) + 1)
        if params.gauge == "rational":
            while d.max() > lam - 1.0:
                d = d * 0.5
    else:
        d = d0
    exps = tuple(int(v) for v in rng.integers(1, params.max_exponent + 1, size=n))
    if target == "T8":
        exps = tuple(min(e, 2) for e in exps)
    return FiniteSpace(d, rel, t), exps


def _modes(space, target):
    dist_mode = "metric" if space.symmetric else "almost-metric"
    order_mode = "order" if check_axioms(space, "order").ok else "quasi-order"
    return (dist_mode, order_mode)


def gen_theorem_instance(params):
    """Instance whose advertised hypotheses (all but ``params.drop``) hold.

    Each attempt ``k`` draws from ``seed`` and ``k``; the attached objects
    are re-checked with the theorem's suite before returning.
    """
    if not isinstance(params, GeneratorParams):
        raise InputError("gen_theorem_instance expects GeneratorParams")
    target = params.target
    last = None
    for attempt in range(params.max_attempts):
        rng = _rng([params.seed, attempt])
        space, exps = _candidate(params, rng)
        if target in _NEEDS_ANTISYMMETRY and not check_axioms(space, "order").ok:
            last = "antisymmetry"
            continue
        try:
            extra = _attach(target, rng, space, params, exps)
        except (PreconditionError, InputError) as exc:  # precondition of the series metric
            if params.drop:
                extra = {"alpha": params.alpha}
            else:
                last = str(exc)
                continue
        spec = InstanceSpec(
            name=f"gen-{target}-{params.seed}",
            space=space,
            modes=_modes(space, target),
            provenance={"generator": params.to_json(), "attempt": attempt},
            **extra,
        )
        if target == "T3-Maia" and "metric" not in extra:
            last = "series metric unavailable"
            continue
        verdict = theorem_suite(space, target, spec.suite_params(), drop=params.drop)
        if verdict.hypotheses_hold:
            return spec
        last = verdict.failed_hypotheses()
    raise GenerationError(f"no instance for {target} after {params.max_attempts} attempts (last: {last})")


# ---------------------------------------------------------------- library


def _grid_half_map():
    grid = (0.0, 0.25, 0.5, 0.75, 1.0)
    n = len(grid)
    dist = np.abs(np.subtract.outer(grid, grid))
    # x/2 snapped down onto the grid
    selfmap = [max(i for i, g in enumerate(grid) if g <= x / 2) for x in grid]
    order = order_from_pairs(n, [(0, j) for j in range(n)])
    return FiniteSpace(dist, order, selfmap, labels=grid)


def half_map_analytic():
    """``T x = x/2`` on the reals with ``|x - y|`` and the usual order, scanned on five grid points."""
    space = AnalyticSpace(
        "half-map-analytic",
        (0.0, 0.25, 0.5, 0.75, 1.0),
        lambda x: x / 2.0,
        lambda x, y: abs(x - y),
        lambda x, y: x <= y,
    )
    return InstanceSpec(
        name="half-map-analytic",
        space=space,
        alpha=0.5,
        phi=ScalarGauge.linear(0.5),
        modes=("metric", "order"),
        provenance={"library": "half-map-analytic"},
        expected={"lambda": 1.5, "series_factor": 4.0, "mu": 2.0 / 3.0, "fixed_point": 0.0},
    )


def t8_quasi_order_counterexample():
    """Two tied points ``y <= z <= y`` with ``T y = z = T z`` and the zero gauge."""
    space = FiniteSpace([[0.0, 1.0], [1.0, 0.0]], np.ones((2, 2), dtype=bool), [1, 1], labels=("y", "z"))
    return InstanceSpec(
        name="t8-quasi-order",
        space=space,
        family=PointGaugeFamily.shared((1, 1), VectorGauge.zero()),
        modes=("metric", "quasi-order"),
        provenance={"library": "t8-quasi-order"},
        expected={"T8": "hypotheses hold, vi-b fails"},
    )


def builtin_library():
    """Curated finite instances, in a fixed order."""
    lattice = FiniteSpace(
        [[0, 1, 1, 3], [1, 0, 2, 2], [1, 2, 0, 2], [3, 2, 2, 0]],
        order_from_pairs(4, [(0, 1), (0, 2), (1, 3), (2, 3)]),
        [0, 0, 0, 1],
        labels=("bot", "a", "b", "top"),
    )
    pos = np.array([0.0, 0.5, 0.75, 0.875, 0.9375, 1.0])
    chain = FiniteSpace(
        np.abs(np.subtract.outer(pos, pos)),
        order_from_pairs(6, [(i, i + 1) for i in range(5)]),
        [1, 2, 3, 4, 5, 5],
    )
    specs = [
        InstanceSpec(
            name="half-map-grid",
            space=_grid_half_map(),
            alpha=0.5,
            phi=ScalarGauge.linear(0.5),
            family=UniformFamily((1,) * 5, ScalarGauge.linear(0.5)),
            provenance={"library": "half-map-grid"},
            expected={"fix": [0]},
        ),
        InstanceSpec(
            name="two-components",
            space=FiniteSpace([[0, 1], [1, 0]], np.eye(2, dtype=bool), [0, 1]),
            alpha=0.5,
            provenance={"library": "two-components"},
            expected={"fix": [0, 1]},
        ),
        InstanceSpec(
            name="two-cycle",
            space=FiniteSpace([[0, 1], [1, 0]], np.eye(2, dtype=bool), [1, 0]),
            alpha=0.5,
            provenance={"library": "two-cycle"},
            expected={"fix": []},
        ),
        InstanceSpec(
            name="bounds-lattice",
            space=lattice,
            alpha=0.5,
            provenance={"library": "bounds-lattice"},
            expected={"fix": [0]},
        ),
        InstanceSpec(
            name="directed-not-transitive",
            space=FiniteSpace(
                [[0, 2, 1], [2, 0, 1], [1, 1, 0]], order_from_pairs(3, [(0, 2), (1, 2)]), [2, 2, 2]
            ),
            alpha=0.5,
            phi=ScalarGauge.linear(0.5),
            provenance={"library": "directed-not-transitive"},
            expected={"fix": [2], "d03": False, "d04": True},
        ),
        InstanceSpec(
            name="variable-exponent-chain",
            space=chain,
            family=PointGaugeFamily.shared((2, 1, 2, 1, 2, 1), VectorGauge.max_tail(0.75)),
            provenance={"library": "variable-exponent-chain"},
            expected={"fix": [5]},
        ),
        t8_quasi_order_counterexample(),
    ]
    return specs


def library_names():
    return [s.name for s in builtin_library()] + ["half-map-analytic"]


def get_instance(name):
    if name == "half-map-analytic":
        return half_map_analytic()
    for spec in builtin_library():
        if spec.name == name:
            return spec
    raise InputError(f"unknown library instance {name!r}; known: {library_names()}")


# ---------------------------------------------------------------- JSON


def _family_json(fam):
    if fam is None:
        return None
    kind = "uniform" if isinstance(fam, UniformFamily) else "point"
    return {"kind": kind, **fam.to_json()}


def instance_to_json(spec):
    space = spec.space
    if not isinstance(space, FiniteSpace):
        raise InputError(f"instance {spec.name!r} is analytic and has no table form")
    out = {
        "name": spec.name,
        "n": space.n,
        "dist": space.dist.tolist(),
        "order": space.order.tolist(),
    }
    if space.has_selfmap:
        out["selfmap"] = [int(v) for v in space.selfmap]
    if space.labels is not None:
        out["labels"] = [v if isinstance(v, (str, int, float)) else str(v) for v in space.labels]
    if spec.alpha is not None:
        out["alpha"] = spec.alpha
    if spec.mu is not None:
        out["mu"] = spec.mu
    if spec.phi is not None:
        out["phi"] = spec.phi.to_json()
    if spec.family is not None:
        out["family"] = _family_json(spec.family)
    if spec.metric is not None:
        if isinstance(spec.metric, DerivedMetric):
            out["metric"] = {"derived": True, **spec.metric.to_json()}
        else:
            out["metric"] = {"dist": np.asarray(spec.metric).tolist()}
    out["modes"] = list(spec.modes)
    if spec.provenance:
        out["provenance"] = spec.provenance
    if spec.expected:
        out["expected"] = spec.expected
    return out


def _path_error(path, msg):
    return InputError(f"{path}: {msg}")


def _square(doc, key, n, kind, prefix="$"):
    rows = doc.get(key)
    path = f"{prefix}.{key}"
    if not isinstance(rows, list) or len(rows) != n:
        raise _path_error(path, f"expected {n} rows")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise _path_error(f"{path}[{i}]", f"row length {got}, expected {n}")
        for j, v in enumerate(row):
            if kind is bool and not isinstance(v, bool):
                raise _path_error(f"{path}[{i}][{j}]", f"expected a boolean, got {v!r}")
            if kind is float and (isinstance(v, bool) or not isinstance(v, (int, float))):
                raise _path_error(f"{path}[{i}][{j}]", f"expected a number, got {v!r}")
    return rows


def _order(doc, n):
    raw = doc.get("order")
    if raw is None:
        return np.eye(n, dtype=bool)
    if isinstance(raw, list) and raw and all(isinstance(r, list) and len(r) == 2 for r in raw) and not (
        n == 2 and all(isinstance(v, bool) for r in raw for v in r)
    ):
        pairs = []
        for k, pr in enumerate(raw):
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in pr):
                raise _path_error(f"$.order[{k}]", f"expected an index pair, got {pr!r}")
            pairs.append(tuple(pr))
        try:
            return order_from_pairs(n, pairs)
        except InputError as exc:
            raise _path_error("$.order", str(exc)) from None
    if isinstance(raw, list) and not raw and n == 0:
        return np.zeros((0, 0), dtype=bool)
    return np.array(_square(doc, "order", n, bool), dtype=bool)


def parse_instance(text, name="instance"):
    """Validate a JSON document and build an :class:`InstanceSpec`.

    ``order`` is either an ``n x n`` boolean matrix taken literally or a list
    of ``[i, j]`` pairs closed reflexively and transitively. Axioms of the
    declared ``modes`` are checked eagerly.
    """
    try:
        doc = json.loads(text) if isinstance(text, (str, bytes)) else text
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise _path_error("$", "expected an object")
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise _path_error("$.n", f"expected a positive integer, got {n!r}")
    dist = np.array(_square(doc, "dist", n, float), dtype=np.float64)
    order = _order(doc, n)
    selfmap = doc.get("selfmap")
    if selfmap is not None:
        if not isinstance(selfmap, list) or len(selfmap) != n:
            raise _path_error("$.selfmap", f"expected {n} indices")
        for i, v in enumerate(selfmap):
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < n:
                raise _path_error(f"$.selfmap[{i}]", f"expected an index in 0..{n - 1}, got {v!r}")
    labels = doc.get("labels")
    space = FiniteSpace(dist, order, selfmap, None if labels is None else tuple(labels))
    modes = tuple(doc.get("modes", ("metric" if space.symmetric else "almost-metric", "quasi-order")))
    for mode in modes:
        try:
            rep = check_axioms(space, mode)
        except InputError as exc:
            raise _path_error("$.modes", str(exc)) from None
        if not rep.ok:
            where = "$.dist" if mode in ("metric", "almost-metric") else "$.order"
            failed = rep.failed()[0]
            raise _path_error(where, f"{mode} axiom {failed!r} fails at {rep.witnesses[failed]}")
    kwargs = {}
    for key in ("alpha", "mu"):
        if key in doc:
            v = doc[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise _path_error(f"$.{key}", f"expected a number, got {v!r}")
            kwargs[key] = float(v)
    try:
        if "phi" in doc:
            kwargs["phi"] = ScalarGauge.from_json(doc["phi"])
    except InputError as exc:
        raise _path_error("$.phi", str(exc)) from None
    if "family" in doc:
        fam = doc["family"]
        try:
            if not isinstance(fam, dict):
                raise InputError("expected an object")
            body = {k: v for k, v in fam.items() if k != "kind"}
            if len(body.get("exponents", ())) != n:
                raise InputError(f"expected {n} exponents")
            if fam.get("kind", "point") == "uniform":
                kwargs["family"] = UniformFamily.from_json(body)
            else:
                kwargs["family"] = PointGaugeFamily.from_json(body)
        except (InputError, KeyError, TypeError) as exc:
            raise _path_error("$.family", str(exc)) from None
    if "metric" in doc:
        m = doc["metric"]
        if not isinstance(m, dict):
            raise _path_error("$.metric", "expected an object")
        table = np.array(_square(m, "dist", n, float, "$.metric"), dtype=np.float64)
        if m.get("derived"):
            tail = np.full((n, n), float(m.get("tail_bound", 0.0)))
            table.setflags(write=False)
            tail.setflags(write=False)
            kwargs["metric"] = DerivedMetric(
                space, float(m["lambda"]), float(m["alpha"]), table, tail,
                int(m["truncation_N"]), float(m.get("tol", 1e-9)),
            )
        else:
            kwargs["metric"] = table
    return InstanceSpec(
        name=doc.get("name", name),
        space=space,
        modes=modes,
        provenance=doc.get("provenance", {}),
        expected=doc.get("expected", {}),
        **kwargs,
    )
