"""Brute-force ground truth on finite carriers and per-theorem suites.

Each theorem binds a list of hypotheses and a list of conclusions
(``THEOREMS``). Hypotheses are evaluated with the checkers in
``spaces``/``contract``/``compfn``; conclusions are decided here by direct
simulation with powers of the self-map table, independently of the
``picard`` engine. Topological hypotheses that hold automatically on a
finite carrier are recorded with status ``finite-carrier``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any

import numpy as np

from .compfn import (
    DEFAULT_PLAN,
    PointGaugeFamily,
    ScalarGauge,
    UniformFamily,
    VectorGauge,
    check_comparison,
    check_composite_decay,
    check_normal,
    check_normal5,
)
from .contract import ContractionVariant, check_contraction, check_e10_e11, check_monotone, progressive_sets
from .errors import InputError
from .picard import PicardReport
from .spaces import FiniteSpace, chain_components, check_axioms, check_bounds_and_directedness

__all__ = [
    "THEOREMS",
    "SuiteParams",
    "SuiteVerdict",
    "Check",
    "enumerate_fixed_points",
    "brute_picard_check",
    "theorem_suite",
    "matkowski_suite",
    "canonical_theorem",
]

FINITE = "finite-carrier"

_PICARD_D = ("orbits-converge", "limits-fixed", "fix-singleton")
_PICARD_C = ("orbits-converge", "limits-fixed", "ascent", "fix-leq-singleton", "maximality")
_ZLIM = ("iii-fix-nonempty", "iv-converge-in-fix", "v-comparable-same-limit")
_ZLIM_VI = _ZLIM + ("vi-a-below-limit", "vi-b-limit-maximal")

# theorem -> (hypotheses, finite-carrier hypotheses, conclusions)
THEOREMS = {
    "T1-RanReurings": (
        ("metric", "order", "a02", "a03", "a04", "a05"),
        ("complete", "continuous"),
        _PICARD_D,
    ),
    "T2": (("metric", "order", "a02", "b02", "b03"), ("complete", "continuous"), _PICARD_D),
    "T3-Maia": (("metric", "e-metric", "b04", "subordinated"), ("complete", "continuous"), _PICARD_D),
    "T4": (
        ("almost-metric", "quasi-order", "phi-comparison", "c04", "c05", "c06"),
        ("ao-continuous", "ao-complete", "ao-self-closed"),
        _PICARD_C,
    ),
    "C1": (("almost-metric", "phi-comparison", "d01"), ("o-continuous", "o-complete"), _PICARD_D),
    "C2": (
        ("metric", "order", "phi-comparison", "a03", "b02", "d02", "d03", "d04"),
        ("complete", "o-continuous"),
        _PICARD_D,
    ),
    "T6": (
        ("metric", "quasi-order", "e05", "e06", "e07", "e08", "e09"),
        ("quasi-order-complete", "self-closed", "left-continuous"),
        _ZLIM,
    ),
    "T7": (
        ("metric", "order", "e05", "e06", "e07", "e08", "e09"),
        ("quasi-order-complete", "interval-closed"),
        _ZLIM_VI,
    ),
    "T8": (
        ("metric", "quasi-order", "e05", "e06", "e07", "e08", "e09", "e10", "e11"),
        ("quasi-order-complete", "interval-closed"),
        _ZLIM_VI,
    ),
    "T9": (
        ("metric", "quasi-order", "e05", "e06", "e12", "e02", "e03"),
        ("quasi-order-complete", "self-closed", "left-continuous"),
        _ZLIM,
    ),
}

_ALIASES = {"T1": "T1-RanReurings", "T3": "T3-Maia"}

# which parameter each hypothesis needs
_NEEDS = {
    "a02": "alpha",
    "b04": "mu",
    "e-metric": "metric",
    "subordinated": "metric",
    "phi-comparison": "phi",
    "c06": "phi",
    "d01": "phi",
    "d02": "phi",
    "e07": "family",
    "e08": "family",
    "e09": "family",
    "e10": "family",
    "e11": "family",
    "e12": "family",
    "e02": "family",
    "e03": "family",
}


def canonical_theorem(tag):
    tag = _ALIASES.get(tag, tag)
    if tag not in THEOREMS:
        raise InputError(f"unknown theorem {tag!r}; expected one of {sorted(THEOREMS)}")
    return tag


def enumerate_fixed_points(space):
    """``{x : T x = x}`` read straight off the self-map table."""
    if not space.has_selfmap:
        raise InputError("fixed points need a self-map")
    t = np.asarray(space.selfmap)
    return frozenset(int(i) for i in np.flatnonzero(t == np.arange(space.n)))


def _limits(space):
    """``T^n`` applied to every point, and whether it is a fixed point."""
    t = np.asarray(space.selfmap)
    cur = np.arange(space.n)
    history = [cur]
    for _ in range(space.n):
        cur = t[cur]
        history.append(cur)
    hist = np.stack(history)  # (n+1, n): hist[k, x] = T^k x
    lim = hist[-1]
    return hist, lim, t[lim] == lim


def brute_picard_check(space, mode="modulo-d"):
    """Exhaustive Picard decision by table powers (no use of the orbit engine)."""
    if mode not in ("modulo-d", "modulo-C-leq"):
        raise InputError(f"unknown mode {mode!r}")
    if not isinstance(space, FiniteSpace) or not space.has_selfmap:
        raise InputError("brute force needs a finite space with a self-map")
    hist, lim, conv = _limits(space)
    fix = tuple(sorted(enumerate_fixed_points(space)))
    r = space.order
    prog = np.flatnonzero(r[np.arange(space.n), space.selfmap])
    starts = tuple(range(space.n)) if mode == "modulo-d" else tuple(int(p) for p in prog)
    limits = {s: (int(lim[s]) if conv[s] else None) for s in starts}
    witnesses = {}
    bad = [s for s in starts if not conv[s]]
    if bad:
        witnesses["converged"] = (bad[0],)
    ascent = {}
    if mode == "modulo-C-leq":
        for s in starts:
            ascent[s] = bool(conv[s] and r[hist[:, s], lim[s]].all())
            if not ascent[s] and "ascent" not in witnesses:
                witnesses["ascent"] = (s,)
        fa = np.asarray(fix, dtype=np.int_)
        sub = r[np.ix_(fa, fa)] & ~np.eye(len(fa), dtype=bool)
        singleton = not sub.any()
        if not singleton:
            i, j = np.argwhere(sub)[0]
            witnesses["singleton"] = (fix[i], fix[j])
    else:
        singleton = len(fix) == 1
        if not singleton:
            witnesses["singleton"] = fix
    maximality = {}
    for z in fix:
        viol = [int(u) for u in prog if r[z, u] and not r[u, z]]
        maximality[z] = not viol
        if viol and "maximality" not in witnesses:
            witnesses["maximality"] = (z, viol[0])
    return PicardReport(
        mode=mode,
        fix_set=fix,
        starts=starts,
        limits=limits,
        converged=not bad,
        singleton=singleton,
        ascent=ascent,
        maximality=maximality,
        witnesses=witnesses,
    )


@dataclass(frozen=True)
class SuiteParams:
    """Objects a suite may need; which ones depends on the theorem.

    ``metric`` is the distance for ``e``-based hypotheses (None means the
    base table); ``slack`` is added to every contraction right-hand side.
    """

    alpha: float | None = None
    mu: float | None = None
    phi: ScalarGauge | None = None
    family: PointGaugeFamily | UniformFamily | None = None
    metric: Any = None
    slack: float = 0.0
    plan: Any = DEFAULT_PLAN


@dataclass(frozen=True)
class Check:
    status: str  # pass | fail | finite-carrier
    witness: Any = None
    dropped: bool = False

    @property
    def passed(self):
        return self.status != "fail"

    def to_json(self):
        out = {"status": self.status}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.dropped:
            out["dropped"] = True
        return out


def _jsonable(v):
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return repr(v)


@dataclass(frozen=True)
class SuiteVerdict:
    theorem: str
    hypotheses: dict
    conclusions: dict
    dropped: tuple = ()

    @property
    def hypotheses_hold(self):
        return all(c.passed for name, c in self.hypotheses.items() if not c.dropped)

    @property
    def conclusions_hold(self):
        return all(c.passed for c in self.conclusions.values())

    @property
    def implication_respected(self):
        return (not self.hypotheses_hold) or self.conclusions_hold

    @property
    def counterexample(self):
        return not self.implication_respected

    def failed_hypotheses(self):
        return [k for k, c in self.hypotheses.items() if not c.passed]

    def failed_conclusions(self):
        return [k for k, c in self.conclusions.items() if not c.passed]

    def to_json(self):
        return {
            "theorem": self.theorem,
            "hypotheses": {k: c.to_json() for k, c in self.hypotheses.items()},
            "conclusions": {k: c.to_json() for k, c in self.conclusions.items()},
            "hypotheses_hold": self.hypotheses_hold,
            "conclusions_hold": self.conclusions_hold,
            "implication_respected": self.implication_respected,
            "dropped": list(self.dropped),
        }


def _ok(flag, witness=None):
    return Check("pass") if flag else Check("fail", witness)


def _axioms(space, mode):
    rep = check_axioms(space, mode)
    return _ok(rep.ok, rep.witnesses or None)


def _metric_space(space, metric):
    """A FiniteSpace carrying the ``e`` table (and whether that table is derived)."""
    if metric is None:
        return space, False
    if hasattr(metric, "table"):
        return space.with_dist(metric.table), True
    return space.with_dist(np.asarray(metric, dtype=np.float64)), False


def _derived_axioms(dm, mode):
    """Metric axioms on a derived table, triangle with its tail slack."""
    e = dm.table
    n = e.shape[0]
    if np.any(np.diag(e) != 0):
        return Check("fail", {"reflexive": int(np.flatnonzero(np.diag(e))[0])})
    if np.any((e == 0) & ~np.eye(n, dtype=bool)):
        return Check("fail", {"sufficient": tuple(int(v) for v in np.argwhere((e == 0) & ~np.eye(n, dtype=bool))[0])})
    if e.min() < 0:
        return Check("fail", {"nonnegative": None})
    slack = 2.0 * dm.tail[:, None, :] + 1e-12 * np.maximum(1.0, np.abs(e))[:, None, :]
    bad = e[:, None, :] > e[:, :, None] + e[None, :, :] + slack
    if bad.any():
        return Check("fail", {"triangular": tuple(int(v) for v in np.argwhere(bad)[0])})
    if mode == "metric":
        tol = 2.0 * np.maximum(dm.tail, dm.tail.T) + 1e-12 * np.maximum(1.0, np.abs(e))
        if np.any(np.abs(e - e.T) > tol):
            return Check("fail", {"symmetric": tuple(int(v) for v in np.argwhere(np.abs(e - e.T) > tol)[0])})
    return Check("pass")


def _block_orbit(space, family, x0, limit=None):
    """Block points ``x_0, x_1, ...`` until a repeat; returns (prefix, cycle)."""
    seen = {}
    pts = []
    x = x0
    limit = limit or 4 * space.n + 4
    while x not in seen and len(pts) < limit:
        seen[x] = len(pts)
        pts.append(x)
        for _ in range(family.n(x)):
            x = space.T(x)
    start = seen.get(x, len(pts))
    return pts[:start], pts[start:]


def _composite_decays(space, family, x0, plan):
    prefix, cycle = _block_orbit(space, family, x0)
    gauges = [family.g(p) for p in prefix + cycle]
    if all(g.tag in ("linear", "zero") for g in gauges):
        coef = [0.0 if g.tag == "zero" else g.params["alpha"] for g in gauges]
        cyc = coef[len(prefix):]
        if any(c == 0 for c in coef):
            return True, None
        if not cyc:
            return True, None
        return float(np.prod(cyc)) < 1.0, (x0,)
    def gauge_at(k):
        if k < len(prefix):
            return family.g(prefix[k])
        return family.g(cycle[(k - len(prefix)) % len(cycle)])

    ok, w, _ = check_composite_decay(gauge_at, plan)
    return ok, None if ok else (x0, w)


class _Evaluator:
    """Evaluates hypotheses lazily, sharing intermediate results."""

    def __init__(self, space, params):
        self.space = space
        self.p = params
        self._cache = {}

    def need(self, name):
        attr = _NEEDS.get(name)
        if attr and getattr(self.p, attr) is None:
            raise InputError(f"hypothesis {name} needs parameter {attr!r}")

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def progressive(self):
        return self.cached("prog", lambda: progressive_sets(self.space))

    def bounds(self):
        return self.cached("bounds", lambda: check_bounds_and_directedness(self.space))

    def mono(self, mode):
        return self.cached(("mono", mode), lambda: check_monotone(self.space, mode))

    def contraction(self, variant):
        rep = check_contraction(self.space, variant, slack=self.p.slack)
        return _ok(rep.holds, None if rep.holds else {"pair": rep.witness, "lhs": rep.lhs, "rhs": rep.rhs})

    def e_family_points(self):
        return sorted(self.progressive().leq)

    def evaluate(self, name):
        s, p = self.space, self.p
        self.need(name)
        if name in ("metric", "order", "quasi-order"):
            return _axioms(s, name)
        if name == "almost-metric":
            es, derived = _metric_space(s, p.metric)
            if derived:
                return _derived_axioms(p.metric, "almost-metric")
            return _axioms(es, "almost-metric")
        if name == "e-metric":
            es, derived = _metric_space(s, p.metric)
            if derived:
                return _derived_axioms(p.metric, "metric")
            return _axioms(es, "metric")
        if name == "subordinated":
            e = p.metric.table if hasattr(p.metric, "table") else np.asarray(p.metric, dtype=np.float64)
            slack = 2.0 * p.metric.tail if hasattr(p.metric, "tail") else 0.0
            bad = s.dist > e + slack
            return _ok(not bad.any(), tuple(int(v) for v in np.argwhere(bad)[0]) if bad.any() else None)
        if name == "a02":
            return self.contraction(ContractionVariant("order-linear", alpha=p.alpha))
        if name == "b04":
            slack = p.slack
            if hasattr(p.metric, "tail"):
                slack = max(slack, 2.0 * p.metric.tail_bound + 1e-12 * max(1.0, float(p.metric.table.max())))
            rep = check_contraction(s, ContractionVariant("plain-linear", alpha=p.mu, metric=p.metric), slack=slack)
            return _ok(rep.holds, None if rep.holds else {"pair": rep.witness, "lhs": rep.lhs, "rhs": rep.rhs})
        if name == "a03":
            comp = self.progressive().comp
            return _ok(bool(comp))
        if name in ("c04", "e05"):
            return _ok(bool(self.progressive().leq))
        if name == "a04":
            rep = self.mono("leq")
            return _ok(rep.monotone, rep.witness_increasing)
        if name in ("c05", "e06"):
            rep = self.mono("leq")
            return _ok(rep.increasing, rep.witness_increasing)
        if name == "b02":
            rep = self.mono("comparability")
            return _ok(rep.increasing, rep.witness_increasing)
        if name == "a05":
            b = self.bounds()
            return _ok(b.a05, b.witnesses.get("a05"))
        if name == "b03":
            blocks = chain_components(s)
            return _ok(len(blocks) == 1, None if len(blocks) == 1 else (blocks[0][0], blocks[1][0]))
        if name in ("d03", "d04"):
            b = self.bounds()
            return _ok(getattr(b, name), b.witnesses.get(name))
        if name == "phi-comparison":
            rep = self.cached("phi", lambda: check_comparison(p.phi, p.plan))
            return _ok(rep.passed, rep.witnesses or None)
        if name == "c06":
            return self.contraction(ContractionVariant("eM-order", gauge=p.phi, metric=p.metric))
        if name == "d01":
            return self.contraction(ContractionVariant("eM-plain", gauge=p.phi, metric=p.metric))
        if name == "d02":
            return self.contraction(ContractionVariant("phi-order", gauge=p.phi))
        if name == "e07":
            return self.contraction(ContractionVariant("iterative", family=self._point_family()))
        if name == "e12":
            return self.contraction(ContractionVariant("iterative-uniform", family=self._uniform_family()))
        if name == "e08":
            fam = self._point_family()
            reports = {}
            for x in self.e_family_points():
                g = fam.g(x)
                key = g if g.tag is not None else id(g)
                if key not in reports:
                    reports[key] = check_normal(g, p.plan)
                rep = reports[key]
                if not (rep.f1 and rep.divergence and rep.increasing):
                    return Check("fail", {"point": x, **rep.witnesses})
            return Check("pass")
        if name == "e09":
            fam = self._point_family()
            for x in self.e_family_points():
                ok, w = _composite_decays(s, fam, x, p.plan)
                if not ok:
                    return Check("fail", w)
            return Check("pass")
        if name in ("e10", "e11"):
            rep = self.cached("e1011", lambda: check_e10_e11(self._point_family(), s, p.plan))
            return _ok(getattr(rep, name), rep.witnesses.get(name))
        if name in ("e02", "e03"):
            f = self._uniform_family().gauge
            rep = self.cached("normal-f", lambda: check_normal(f, p.plan))
            flag = (rep.e02 and rep.increasing) if name == "e02" else rep.e03
            return _ok(flag, rep.witnesses or None)
        raise InputError(f"no evaluator for hypothesis {name!r}")

    def _point_family(self):
        fam = self.p.family
        if not isinstance(fam, PointGaugeFamily):
            raise InputError("this theorem needs a PointGaugeFamily as 'family'")
        return fam

    def _uniform_family(self):
        fam = self.p.family
        if not isinstance(fam, UniformFamily):
            raise InputError("this theorem needs a UniformFamily as 'family'")
        return fam


def _conclusions(space, names):
    hist, lim, conv = _limits(space)
    r = space.order
    n = space.n
    t = np.asarray(space.selfmap)
    fix = np.flatnonzero(t == np.arange(n))
    prog = np.flatnonzero(r[np.arange(n), t])
    out = {}
    picard_c = "fix-leq-singleton" in names
    starts = prog if picard_c or names[0].startswith("iii") else np.arange(n)

    def first(mask, idx):
        hits = idx[mask]
        return None if len(hits) == 0 else int(hits[0])

    for name in names:
        if name == "orbits-converge":
            w = first(~conv[starts], starts)
            out[name] = _ok(w is None, w)
        elif name == "limits-fixed":
            # on a finite carrier the limit of an eventually constant orbit is fixed
            ok = conv[starts] & (t[lim[starts]] == lim[starts])
            w = first(~ok, starts)
            out[name] = _ok(w is None, w)
        elif name == "fix-singleton":
            out[name] = _ok(len(fix) == 1, tuple(int(v) for v in fix))
        elif name == "ascent":
            ok = np.array([conv[s] and r[hist[:, s], lim[s]].all() for s in starts], dtype=bool)
            w = first(~ok, starts) if len(starts) else None
            out[name] = _ok(w is None, w)
        elif name == "fix-leq-singleton":
            sub = r[np.ix_(fix, fix)] & ~np.eye(len(fix), dtype=bool)
            w = None if not sub.any() else tuple(int(fix[v]) for v in np.argwhere(sub)[0])
            out[name] = _ok(w is None, w)
        elif name == "maximality":
            w = next(((int(z), int(u)) for z in fix for u in prog if r[z, u] and not r[u, z]), None)
            out[name] = _ok(w is None, w)
        elif name == "iii-fix-nonempty":
            out[name] = _ok(len(fix) > 0)
        elif name == "iv-converge-in-fix":
            w = first(~conv[prog], prog)
            out[name] = _ok(w is None, w)
        elif name == "v-comparable-same-limit":
            w = next(
                ((int(x), int(y)) for x in prog for y in prog
                 if (r[x, y] or r[y, x]) and not (conv[x] and conv[y] and lim[x] == lim[y])),
                None,
            )
            out[name] = _ok(w is None, w)
        elif name == "vi-a-below-limit":
            w = next((int(x) for x in prog if not (conv[x] and r[x, lim[x]])), None)
            out[name] = _ok(w is None, w)
        elif name == "vi-b-limit-maximal":
            w = next(
                ((int(x), int(y)) for x in prog if conv[x] for y in prog
                 if r[lim[x], y] and lim[x] != y),
                None,
            )
            out[name] = _ok(w is None, w)
        else:
            raise InputError(f"no evaluator for conclusion {name!r}")
    return out


def theorem_suite(space, theorem, params=None, drop=()):
    """Evaluate every hypothesis and conclusion of ``theorem`` on ``space``.

    ``drop`` lists hypotheses that are still evaluated and reported but left
    out of the conjunction, which is how necessity is probed.
    """
    theorem = canonical_theorem(theorem)
    params = params or SuiteParams()
    if not isinstance(space, FiniteSpace) or not space.has_selfmap:
        raise InputError("theorem suites need a finite space with a self-map")
    hyps, trivial, concl = THEOREMS[theorem]
    drop = tuple(drop)
    unknown = [h for h in drop if h not in hyps]
    if unknown:
        raise InputError(f"cannot drop {unknown} from {theorem}; hypotheses are {list(hyps)}")
    ev = _Evaluator(space, params)
    for h in hyps:
        ev.need(h)
    hypotheses = {}
    for h in hyps:
        c = ev.evaluate(h)
        hypotheses[h] = replace(c, dropped=h in drop)
    for h in trivial:
        hypotheses[h] = Check(FINITE)
    conclusions = _conclusions(space, concl)
    return SuiteVerdict(theorem, hypotheses, conclusions, drop)


def matkowski_suite(space, f5, exponents, params=None):
    """The five-argument iterative contraction as the trivial-order case of ``T6``.

    The family is ``F(d(x,T^n x), d(x,y), d(x,T^n y))`` built from ``f5``;
    normality of ``f5`` is added to the verdict as ``e02``/``e03`` checks.
    """
    params = params or SuiteParams()
    trivial = space.with_order(np.ones((space.n, space.n), dtype=bool))
    family = PointGaugeFamily.shared(exponents, VectorGauge.from_matkowski(f5))
    verdict = theorem_suite(trivial, "T6", replace(params, family=family))
    rep = check_normal5(f5, params.plan)
    hyps = dict(verdict.hypotheses)
    hyps["e02"] = _ok(rep.e02 and rep.increasing, rep.witnesses or None)
    hyps["e03"] = _ok(rep.e03, rep.witnesses or None)
    return SuiteVerdict("T6", hyps, verdict.conclusions, ())
