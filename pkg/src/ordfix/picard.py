"""Iteration engines: Picard orbits with gauge certificates, the block
(variable-exponent) scheme, and Picard-operator classification.

On a finite carrier an orbit converges exactly when it reaches a fixed
point; any revisit of an earlier point is reported as a cycle.
"""
from __future__ import annotations

import csv
import io
import sys
from dataclasses import dataclass, field

import numpy as np

from .compfn import DEFAULT_PLAN, compose_family, gamma_beta
from .contract import metric_fn, progressive_sets
from .errors import InputError, PreconditionError
from .spaces import FiniteSpace

__all__ = [
    "OrbitTrace",
    "FixedPointResult",
    "CauchyReport",
    "VariableOrbitTrace",
    "PicardReport",
    "orbit",
    "run_picard",
    "cauchy_certificate",
    "run_variable_exponent",
    "classify_picard",
    "trace_to_csv",
    "MODES",
]

MODES = ("modulo-d", "modulo-C-leq")
ANALYTIC_MAX_STEPS = 4096


def _default_steps(space):
    if isinstance(space, FiniteSpace):
        return space.n + 1
    return ANALYTIC_MAX_STEPS


def _ascending(space, pts):
    if isinstance(space, FiniteSpace):
        idx = np.asarray(pts, dtype=np.int_)
        rel = space.order[np.ix_(idx, idx)]
        return bool(np.all(rel[np.triu_indices(len(idx))]))
    return all(space.leq(a, b) for a, b in zip(pts, pts[1:]))


@dataclass(frozen=True)
class OrbitTrace:
    start: object
    points: tuple
    step_distances: tuple
    ascending: bool
    bounds: tuple | None
    terminated_at: int
    reason: str  # fixed | cycle | max_steps

    @property
    def limit(self):
        return self.points[-1] if self.reason == "fixed" else None

    def to_json(self):
        return {
            "start": self.start,
            "points": list(self.points),
            "step_distances": list(self.step_distances),
            "ascending": self.ascending,
            "bounds": None if self.bounds is None else list(self.bounds),
            "terminated_at": self.terminated_at,
            "reason": self.reason,
        }


def _need_selfmap(space):
    if not space.has_selfmap:
        raise InputError("iteration needs a self-map")


def orbit(space, x, max_steps=None, metric=None, phi=None):
    """Iterate ``T`` from ``x`` until a fixed point, a revisit, or ``max_steps``.

    With ``phi`` the trace carries ``phi^n(e(x_0, x_1))`` for every step.
    """
    _need_selfmap(space)
    if max_steps is None:
        max_steps = _default_steps(space)
    e = metric_fn(space, metric)
    pts = [x]
    seen = {x}
    dists = []
    reason = "max_steps"
    cur = x
    while True:
        nxt = space.T(cur)
        if nxt == cur:
            reason = "fixed"
            break
        if len(dists) >= max_steps:
            break
        dists.append(e(cur, nxt))
        pts.append(nxt)
        if nxt in seen:
            reason = "cycle"
            break
        seen.add(nxt)
        cur = nxt
    bounds = None
    if phi is not None:
        b = dists[0] if dists else 0.0
        bounds = []
        for _ in dists:
            bounds.append(b)
            b = phi(b)
    return OrbitTrace(
        start=x,
        points=tuple(pts),
        step_distances=tuple(dists),
        ascending=_ascending(space, pts),
        bounds=None if bounds is None else tuple(bounds),
        terminated_at=len(dists),
        reason=reason,
    )


@dataclass(frozen=True)
class FixedPointResult:
    start: object
    fixed_point: object
    steps: int
    converged: bool
    final_step_distance: float
    final_bound: float | None
    bound_respected: bool | None
    first_bound_violation: int | None
    trace: OrbitTrace = field(repr=False)
    witness: tuple | None = None  # the revisited cycle when not converged

    def to_json(self):
        return {
            "start": self.start,
            "fixed_point": self.fixed_point,
            "steps": self.steps,
            "converged": self.converged,
            "certificate": {
                "final_step_distance": self.final_step_distance,
                "final_bound": self.final_bound,
                "bound_respected": self.bound_respected,
                "first_bound_violation": self.first_bound_violation,
            },
            "witness": None if self.witness is None else list(self.witness),
            "reason": self.trace.reason,
        }


def run_picard(space, x, phi=None, metric=None, tol=0.0, max_steps=None, slack=None, mode="modulo-d"):
    """Picard iteration from ``x`` with an optional ``phi^n`` certificate.

    ``converged`` means a fixed point was reached (or, on analytic carriers,
    the last step is at most ``tol``). The certificate records whether each
    step distance stays below ``phi^n(e(x_0, x_1)) + slack``; slack defaults
    to the smallest normal float on the base distance (so subnormal underflow
    is not reported) and 1e-12 on a supplied metric.
    """
    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}")
    _need_selfmap(space)
    if mode == "modulo-C-leq" and not space.leq(x, space.T(x)):
        raise PreconditionError("c04", f"start {x} is not in X(T,<=)")
    if slack is None:
        slack = sys.float_info.min if metric is None else 1e-12
    tr = orbit(space, x, max_steps=max_steps, metric=metric, phi=phi)
    last = tr.step_distances[-1] if tr.step_distances else 0.0
    converged = tr.reason == "fixed" or (tol > 0 and tr.reason == "max_steps" and last <= tol)
    violation = None
    if tr.bounds is not None:
        for k, (s, b) in enumerate(zip(tr.step_distances, tr.bounds)):
            if s > b + slack:
                violation = k
                break
    witness = None
    if tr.reason == "cycle":
        back = tr.points.index(tr.points[-1])
        witness = tr.points[back:]
    return FixedPointResult(
        start=x,
        fixed_point=tr.points[-1] if converged else None,
        steps=tr.terminated_at,
        converged=converged,
        final_step_distance=last,
        final_bound=tr.bounds[-1] if tr.bounds else (0.0 if tr.bounds is not None else None),
        bound_respected=None if tr.bounds is None else violation is None,
        first_bound_violation=violation,
        trace=tr,
        witness=witness,
    )


@dataclass(frozen=True)
class CauchyReport:
    gamma: float
    beta: float
    rank: int
    rank_found: bool
    holds: bool
    witness: tuple | None
    largest: float
    pairs_checked: int

    def to_json(self):
        return {
            "gamma": self.gamma,
            "beta": self.beta,
            "rank": self.rank,
            "rank_found": self.rank_found,
            "holds": self.holds,
            "witness": None if self.witness is None else list(self.witness),
            "largest": self.largest,
            "pairs_checked": self.pairs_checked,
        }


def cauchy_certificate(space, trace, phi, gamma, metric=None):
    """Replay the Cauchy induction on a recorded orbit.

    ``beta`` comes from :func:`~ordfix.compfn.gamma_beta`, shrunk to at most
    ``gamma/2``. The rank ``m`` is the first index after which every
    recorded step is below ``beta/2``; then ``e(x_k, x_{k+n}) < gamma +
    beta/2`` is checked for all recorded ``k >= m``. When no such rank
    exists the scan starts at 0 and ``rank_found`` is False.
    """
    beta = gamma_beta(phi, gamma)
    if beta is None:
        raise PreconditionError("gamma-beta", f"no beta found for gamma={gamma}")
    beta = min(beta, gamma / 2)
    e = metric_fn(space, metric)
    steps = trace.step_distances
    rank = None
    for m in range(len(steps) + 1):
        if all(s < beta / 2 for s in steps[m:]):
            rank = m
            break
    found = rank is not None and (rank < len(steps) or trace.reason == "fixed")
    start = rank if found else 0
    pts = trace.points
    bound = gamma + beta / 2
    witness, largest, checked = None, 0.0, 0
    for k in range(start, len(pts)):
        for n in range(len(pts) - k):
            v = e(pts[k], pts[k + n])
            checked += 1
            largest = max(largest, v)
            if witness is None and not v < bound:
                witness = (k, n)
    return CauchyReport(gamma, beta, start, found, witness is None, witness, largest, checked)


@dataclass(frozen=True)
class VariableOrbitTrace:
    start: object
    exponents: tuple  # n_i
    cumulative: tuple  # m_i = n_0 + ... + n_i
    block_points: tuple  # x_0, x_1, ...
    orbit: tuple  # T^m x_0, m = 0..len-1
    alpha0: float
    t0: float | None
    composite_bounds: tuple  # g(x_k) o ... o g(x_0) (t0)
    bounds_respected: bool | None
    first_violation: tuple | None  # (k, m)
    ascending: bool
    cauchy: bool
    tail_step: float
    reason: str
    t_bound_respected: bool | None

    def to_json(self):
        return {
            "start": self.start,
            "exponents": list(self.exponents),
            "cumulative": list(self.cumulative),
            "block_points": list(self.block_points),
            "orbit": list(self.orbit),
            "alpha0": self.alpha0,
            "t0": self.t0,
            "composite_bounds": list(self.composite_bounds),
            "bounds_respected": self.bounds_respected,
            "first_violation": None if self.first_violation is None else list(self.first_violation),
            "ascending": self.ascending,
            "cauchy": self.cauchy,
            "tail_step": self.tail_step,
            "reason": self.reason,
            "t_bound_respected": self.t_bound_respected,
        }


def _t0_search(g, alpha, plan, iterations=80):
    """Least ``beta`` in ``[alpha, 10(alpha+1)]`` such that every sampled
    ``t > beta`` has ``t - g(t) > alpha``; None if the upper end fails."""
    offsets = np.concatenate([plan.samples(), 10.0 ** np.arange(4, 13)])

    def ok(beta):
        return all(t - g(t) > alpha for t in beta + offsets)

    lo, hi = alpha, 10.0 * (alpha + 1.0)
    if not ok(hi):
        return None
    if ok(lo):
        return lo
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def run_variable_exponent(space, x, family, max_blocks=200, max_steps=200, cauchy_tol=1e-6,
                          slack=0.0, plan=DEFAULT_PLAN):
    """Block iteration ``x_{i+1} = T^{n(x_i)} x_i`` with composite bounds.

    ``t0`` bounds every ``d(x_0, T^m x_0)``; it is found from
    ``alpha = max_{k <= n(x_0)} d(x_0, T^k x_0)`` by bisection on the
    property ``t - g(x_0)(t) > alpha`` for all ``t > t0``. The realized
    distances ``d(x_{k+1}, T^m x_0)``, ``m >= m_k``, are checked against
    ``g(x_k) o ... o g(x_0)(t0)``.
    """
    _need_selfmap(space)
    if not space.leq(x, space.T(x)):
        raise PreconditionError("e05", f"start {x} is not in Y = {{x : x <= Tx}}")
    d = space.d
    blocks = [x]
    exps, cum = [], []
    reason = "max_blocks"
    total = 0
    for _ in range(max_blocks):
        cur = blocks[-1]
        if space.T(cur) == cur:
            reason = "fixed"
            break
        k = family.n(cur)
        nxt = cur
        for _ in range(k):
            nxt = space.T(nxt)
        total += k
        exps.append(k)
        cum.append(total)
        blocks.append(nxt)
    # the point orbit, long enough to cover every block and the Cauchy window
    orb = [x]
    while len(orb) - 1 < max(total, max_steps):
        nxt = space.T(orb[-1])
        if nxt == orb[-1] and len(orb) - 1 >= total:
            break
        orb.append(nxt)
    n0 = family.n(x)
    alpha0 = max(d(x, orb[k]) if k < len(orb) else d(x, orb[-1]) for k in range(1, n0 + 1))
    if alpha0 == 0:
        t0 = 0.0
    else:
        t0 = _t0_search(family.g(x), alpha0, plan)
    comp = ()
    respected = t_ok = None
    first = None
    if t0 is not None:
        t_ok = all(d(x, p) <= t0 + slack for p in orb)
        if exps:
            comp = tuple(compose_family([family.g(b) for b in blocks[: len(exps)]], t0))
        respected = True
        for kk, (mk, bound) in enumerate(zip(cum, comp)):
            anchor = blocks[kk + 1]
            for m in range(mk, len(orb)):
                if d(anchor, orb[m]) > bound + slack:
                    respected, first = False, (kk, m)
                    break
            if first is not None:
                break
    steps = [d(a, b) for a, b in zip(orb, orb[1:])]
    window = steps[-1:] if steps else [0.0]
    tail_step = float(window[-1]) if steps else 0.0
    stabilised = space.T(orb[-1]) == orb[-1]
    return VariableOrbitTrace(
        start=x,
        exponents=tuple(exps),
        cumulative=tuple(cum),
        block_points=tuple(blocks),
        orbit=tuple(orb),
        alpha0=float(alpha0),
        t0=t0,
        composite_bounds=comp,
        bounds_respected=respected,
        first_violation=first,
        ascending=_ascending(space, orb),
        cauchy=stabilised or tail_step < cauchy_tol,
        tail_step=tail_step,
        reason=reason,
        t_bound_respected=t_ok,
    )


@dataclass(frozen=True)
class PicardReport:
    mode: str
    fix_set: tuple
    starts: tuple
    limits: dict  # start -> limit or None
    converged: bool
    singleton: bool  # singleton (modulo-d) or <=-singleton (modulo-C-leq)
    ascent: dict  # start -> bool (modulo-C-leq only)
    maximality: dict  # fixed point -> bool
    witnesses: dict

    @property
    def ascent_ok(self):
        return all(self.ascent.values())

    @property
    def maximality_ok(self):
        return all(self.maximality.values())

    @property
    def is_picard(self):
        if self.mode == "modulo-d":
            return self.converged and self.singleton
        return self.converged and self.singleton and self.ascent_ok

    def to_json(self):
        return {
            "mode": self.mode,
            "is_picard": self.is_picard,
            "fix_set": list(self.fix_set),
            "starts": list(self.starts),
            "limits": {str(k): v for k, v in self.limits.items()},
            "converged": self.converged,
            "singleton": self.singleton,
            "ascent": {str(k): v for k, v in self.ascent.items()},
            "maximality": {str(k): v for k, v in self.maximality.items()},
            "witnesses": {k: list(v) if isinstance(v, tuple) else v for k, v in self.witnesses.items()},
        }


def classify_picard(space, mode="modulo-d", metric=None):
    """Decide the Picard property by simulating the orbit of every admissible start.

    ``modulo-d``: every point converges and ``Fix(T)`` is a singleton.
    ``modulo-C-leq``: every start in ``X(T,<=)`` converges with ``T^n x <= z``
    and ``Fix(T)`` is ``<=``-singleton. The maximality of each fixed point
    within ``X(T,<=)`` is reported separately.
    """
    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}; expected one of {MODES}")
    _need_selfmap(space)
    pts = list(space.points)
    fix = tuple(p for p in pts if space.T(p) == p)
    prog = progressive_sets(space).leq
    starts = tuple(pts) if mode == "modulo-d" else tuple(p for p in pts if p in prog)
    limits, ascent, witnesses = {}, {}, {}
    for s in starts:
        tr = orbit(space, s, metric=metric)
        z = tr.limit
        limits[s] = z
        if z is None and "converged" not in witnesses:
            witnesses["converged"] = (s,)
        if mode == "modulo-C-leq":
            ok = z is not None and all(space.leq(p, z) for p in tr.points)
            ascent[s] = ok
            if not ok and "ascent" not in witnesses:
                witnesses["ascent"] = (s,)
    if mode == "modulo-d":
        singleton = len(fix) == 1
        if not singleton:
            witnesses["singleton"] = fix
    else:
        pair = next(((z, w) for z in fix for w in fix if z != w and space.leq(z, w)), None)
        singleton = pair is None
        if pair is not None:
            witnesses["singleton"] = pair
    maximality = {}
    for z in fix:
        bad = next((u for u in prog if space.leq(z, u) and not space.leq(u, z)), None)
        maximality[z] = bad is None
        if bad is not None and "maximality" not in witnesses:
            witnesses["maximality"] = (z, bad)
    return PicardReport(
        mode=mode,
        fix_set=fix,
        starts=starts,
        limits=limits,
        converged=all(v is not None for v in limits.values()),
        singleton=singleton,
        ascent=ascent,
        maximality=maximality,
        witnesses=witnesses,
    )


def trace_to_csv(trace, out=None):
    """Write ``step,point,step_distance,bound`` rows; returns the text when ``out`` is None."""
    buf = io.StringIO() if out is None else None
    handle = buf if out is None else out
    w = csv.writer(handle, lineterminator="\n")
    w.writerow(["step", "point", "step_distance", "bound"])
    bounds = trace.bounds or ()
    for k, p in enumerate(trace.points):
        dist = repr(trace.step_distances[k]) if k < len(trace.step_distances) else ""
        bound = repr(bounds[k]) if k < len(bounds) else ""
        w.writerow([k, p, dist, bound])
    return buf.getvalue() if buf is not None else None
