"""Comparison functions, gauge families and their sampled property checks.

Properties that quantify over the half-line (monotonicity, decay of
iterates, divergence of ``t - g(t)``) are semi-decided on a
:class:`SamplingPlan`. A passing report means no violation was found on the
named plan.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GaugeError, InputError

__all__ = [
    "SamplingPlan",
    "ScalarGauge",
    "GaugeFamily5",
    "VectorGauge",
    "PointGaugeFamily",
    "UniformFamily",
    "NormalityReport",
    "iterate",
    "check_comparison",
    "gamma_beta",
    "beta_is_valid",
    "check_normal",
    "check_normal5",
    "compose_family",
    "check_composite_decay",
    "matkowski_reduce",
]


@dataclass(frozen=True)
class SamplingPlan:
    """Sample points and budgets for the semi-decision procedures.

    Samples are the grid ``10**k`` for ``k`` in ``grid_exponents`` plus
    ``n_random`` log-uniform points on the same range drawn from ``seed``.
    """

    grid_exponents: tuple = tuple(range(-6, 4))
    n_random: int = 64
    seed: int = 0
    decay_tol: float = 1e-9
    budget: int = 10_000
    closed_form_budget: int = 10**12

    @property
    def name(self):
        lo, hi = min(self.grid_exponents), max(self.grid_exponents)
        return (
            f"grid(1e{lo}..1e{hi})+{self.n_random}rand(seed={self.seed});"
            f"decay<={self.decay_tol:g}@{self.budget}"
        )

    def samples(self):
        lo, hi = min(self.grid_exponents), max(self.grid_exponents)
        grid = 10.0 ** np.asarray(self.grid_exponents, dtype=float)
        rng = np.random.default_rng(self.seed)
        rand = 10.0 ** rng.uniform(lo, hi, size=self.n_random)
        return np.unique(np.concatenate([grid, rand]))


DEFAULT_PLAN = SamplingPlan()


def _linear_power(alpha, t, n):
    if alpha < 1 or t == 0 or n == 0:
        return (alpha**n) * t
    return t if alpha == 1 else math.inf


def _checked(value, where):
    v = float(value)
    if not math.isfinite(v) or v < 0:
        raise GaugeError(f"gauge returned {value!r} at {where}")
    return v


class ScalarGauge:
    """A function ``R+ -> R+`` with an optional built-in identity.

    ``tag``/``params`` identify built-in families (and make the gauge
    serialisable); ``closed_iterate(t, n)`` gives the n-th iterate in closed
    form when the family has one. Evaluators must be stateless.
    """

    __slots__ = ("fn", "declared_increasing", "tag", "params", "_closed")

    def __init__(self, fn, declared_increasing=True, tag=None, params=None, closed_iterate=None):
        self.fn = fn
        self.declared_increasing = declared_increasing
        self.tag = tag
        self.params = dict(params or {})
        self._closed = closed_iterate

    def __call__(self, t):
        return _checked(self.fn(t), f"t={t!r}")

    def closed_iterate(self, t, n):
        if self._closed is None:
            return None
        return _checked(self._closed(t, n), f"closed iterate t={t!r}, n={n}")

    @property
    def has_closed_form(self):
        return self._closed is not None

    def _key(self):
        return (self.tag, tuple(sorted(self.params.items())))

    def __eq__(self, other):
        if not isinstance(other, ScalarGauge):
            return NotImplemented
        if self.tag is None or other.tag is None:
            return self is other
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key()) if self.tag is not None else id(self)

    def __repr__(self):
        if self.tag is None:
            return f"ScalarGauge({self.fn!r})"
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"ScalarGauge.{self.tag}({args})"

    # built-in families

    @classmethod
    def linear(cls, alpha):
        alpha = float(alpha)
        if alpha < 0:
            raise InputError("linear gauge needs alpha >= 0")
        return cls(
            lambda t: alpha * t,
            tag="linear",
            params={"alpha": alpha},
            closed_iterate=lambda t, n: _linear_power(alpha, t, n),
        )

    @classmethod
    def rational(cls, c=1.0):
        c = float(c)
        if c <= 0:
            raise InputError("rational gauge needs c > 0")
        return cls(
            lambda t: t / (1.0 + c * t),
            tag="rational",
            params={"c": c},
            closed_iterate=lambda t, n: t / (1.0 + n * c * t),
        )

    @classmethod
    def identity(cls):
        return cls(lambda t: t, tag="identity", closed_iterate=lambda t, n: t)

    @classmethod
    def zero(cls):
        return cls(lambda t: 0.0, tag="zero", closed_iterate=lambda t, n: t if n == 0 else 0.0)

    def to_json(self):
        if self.tag is None:
            raise InputError("custom gauges are not serialisable")
        return {"family": self.tag, **self.params}

    @classmethod
    def from_json(cls, spec):
        if not isinstance(spec, dict) or "family" not in spec:
            raise InputError(f"gauge spec must be an object with a 'family' key, got {spec!r}")
        fam = spec["family"]
        args = {k: v for k, v in spec.items() if k != "family"}
        makers = {
            "linear": cls.linear,
            "rational": cls.rational,
            "identity": cls.identity,
            "zero": cls.zero,
        }
        if fam not in makers:
            raise InputError(f"unknown gauge family {fam!r}")
        try:
            return makers[fam](**args)
        except TypeError as exc:
            raise InputError(f"bad parameters for gauge {fam!r}: {exc}") from None


class GaugeFamily5:
    """A five-argument gauge ``f(t1..t5)``, increasing in each variable."""

    __slots__ = ("fn", "tag", "params")

    def __init__(self, fn, tag=None, params=None):
        self.fn = fn
        self.tag = tag
        self.params = dict(params or {})

    def __call__(self, t1, t2, t3, t4, t5):
        return _checked(self.fn(t1, t2, t3, t4, t5), f"args={(t1, t2, t3, t4, t5)!r}")

    def diagonal(self):
        """``g(t) = f(t, t, t, 2t, 2t)``."""
        if self.tag == "max_linear":
            return ScalarGauge.linear(2.0 * self.params["c"])
        if self.tag == "zero":
            return ScalarGauge.zero()
        return ScalarGauge(lambda t: self(t, t, t, 2 * t, 2 * t))

    @classmethod
    def max_linear(cls, c):
        c = float(c)
        return cls(lambda *ts: c * max(ts), tag="max_linear", params={"c": c})

    @classmethod
    def projection(cls, k=0):
        return cls(lambda *ts: ts[k], tag="projection", params={"k": int(k)})

    @classmethod
    def zero(cls):
        return cls(lambda *ts: 0.0, tag="zero")

    def to_json(self):
        if self.tag is None:
            raise InputError("custom gauges are not serialisable")
        return {"family": self.tag, **self.params}

    @classmethod
    def from_json(cls, spec):
        makers = {"max_linear": cls.max_linear, "projection": cls.projection, "zero": cls.zero}
        fam = spec.get("family") if isinstance(spec, dict) else None
        if fam not in makers:
            raise InputError(f"unknown five-argument family {fam!r}")
        return makers[fam](**{k: v for k, v in spec.items() if k != "family"})


def matkowski_reduce(f):
    """Three-argument form ``F(xi, eta, zeta) = f(xi, eta, zeta, xi+eta, zeta+eta)``."""

    def F(xi, eta, zeta):
        return f(xi, eta, zeta, xi + eta, zeta + eta)

    return F


class VectorGauge:
    """Per-point gauge ``f(x)(a_1..a_n; b_0..b_n)`` on ``R+^(2n+1)``.

    ``alphas`` are the orbit distances ``d(x, T^k x)``, ``k = 1..n``;
    ``betas`` are ``d(x, T^j y)``, ``j = 0..n``.
    """

    __slots__ = ("fn", "tag", "params")

    def __init__(self, fn, tag=None, params=None):
        self.fn = fn
        self.tag = tag
        self.params = dict(params or {})

    def __call__(self, alphas, betas):
        return _checked(self.fn(tuple(alphas), tuple(betas)), f"alphas={alphas!r}, betas={betas!r}")

    def diagonal(self, n):
        """``g(t) = f(t,...,t; t,...,t)`` for exponent ``n``."""
        if self.tag in ("max_all", "max_tail"):
            return ScalarGauge.linear(self.params["c"])
        if self.tag == "zero":
            return ScalarGauge.zero()
        return ScalarGauge(lambda t: self((t,) * n, (t,) * (n + 1)))

    @classmethod
    def max_all(cls, c):
        c = float(c)
        return cls(lambda a, b: c * max(a + b), tag="max_all", params={"c": c})

    @classmethod
    def max_tail(cls, c):
        c = float(c)
        return cls(lambda a, b: c * max(b), tag="max_tail", params={"c": c})

    @classmethod
    def zero(cls):
        return cls(lambda a, b: 0.0, tag="zero")

    @classmethod
    def from_matkowski(cls, f5):
        """Bound through ``F(d(x,T^n x), d(x,y), d(x,T^n y))`` with ``F`` from :func:`matkowski_reduce`."""
        F = matkowski_reduce(f5)
        return cls(lambda a, b: F(a[-1], b[0], b[-1]), tag=None)

    def to_json(self):
        if self.tag is None:
            raise InputError("custom gauges are not serialisable")
        return {"family": self.tag, **self.params}

    @classmethod
    def from_json(cls, spec):
        makers = {"max_all": cls.max_all, "max_tail": cls.max_tail, "zero": cls.zero}
        fam = spec.get("family") if isinstance(spec, dict) else None
        if fam not in makers:
            raise InputError(f"unknown vector gauge family {fam!r}")
        return makers[fam](**{k: v for k, v in spec.items() if k != "family"})

    def __eq__(self, other):
        if not isinstance(other, VectorGauge):
            return NotImplemented
        if self.tag is None or other.tag is None:
            return self is other
        return (self.tag, self.params) == (other.tag, other.params)

    def __hash__(self):
        return hash((self.tag, tuple(sorted(self.params.items())))) if self.tag else id(self)


def _exponents(exponents):
    ex = tuple(int(k) for k in exponents)
    if any(k < 1 for k in ex):
        raise InputError("every exponent n(x) must be >= 1")
    return ex


@dataclass(frozen=True)
class PointGaugeFamily:
    """Per-point pairs ``(n(x), f(x))``; ``g(x)`` is the diagonal of ``f(x)``."""

    exponents: tuple
    gauges: tuple

    def __post_init__(self):
        object.__setattr__(self, "exponents", _exponents(self.exponents))
        gauges = tuple(self.gauges)
        if len(gauges) != len(self.exponents):
            raise InputError("one gauge per point is required")
        object.__setattr__(self, "gauges", gauges)

    @classmethod
    def shared(cls, exponents, gauge):
        exponents = _exponents(exponents)
        return cls(exponents, (gauge,) * len(exponents))

    def n(self, x):
        return self.exponents[x]

    def f(self, x):
        return self.gauges[x]

    def g(self, x):
        return self.gauges[x].diagonal(self.exponents[x])

    def to_json(self):
        return {"exponents": list(self.exponents), "gauges": [g.to_json() for g in self.gauges]}

    @classmethod
    def from_json(cls, spec):
        ex = spec["exponents"]
        if "gauge" in spec:
            return cls.shared(ex, VectorGauge.from_json(spec["gauge"]))
        return cls(ex, tuple(VectorGauge.from_json(g) for g in spec["gauges"]))


@dataclass(frozen=True)
class UniformFamily:
    """One increasing gauge ``f`` shared by all points, with per-point exponents."""

    exponents: tuple
    gauge: ScalarGauge

    def __post_init__(self):
        object.__setattr__(self, "exponents", _exponents(self.exponents))

    def n(self, x):
        return self.exponents[x]

    def to_json(self):
        return {"exponents": list(self.exponents), "gauge": self.gauge.to_json()}

    @classmethod
    def from_json(cls, spec):
        return cls(spec["exponents"], ScalarGauge.from_json(spec["gauge"]))


@dataclass(frozen=True)
class NormalityReport:
    increasing: bool
    f1: bool
    decay: bool
    divergence: bool | None
    plan: str
    samples_used: int
    witnesses: dict = field(default_factory=dict)
    inconclusive: tuple = ()

    @property
    def passed(self):
        return self.increasing and self.f1 and self.decay and self.divergence is not False

    @property
    def e02(self):
        return self.f1 and bool(self.divergence)

    @property
    def e03(self):
        return self.decay


def iterate(phi, t, n):
    """``phi^n(t)`` by direct iteration; ``phi^0(t) = t``."""
    if n < 0:
        raise InputError("iteration count must be >= 0")
    if t < 0:
        raise InputError("gauges act on nonnegative reals")
    v = float(t)
    for _ in range(n):
        v = phi(v)
    return v


def _decay_at(step, t, plan, closed=None):
    """Returns ``(ok, how)`` where ``how`` is 'closed', 'direct' or 'inconclusive'."""
    if closed is not None:
        try:
            return closed(t, plan.closed_form_budget) <= plan.decay_tol, "closed"
        except GaugeError:
            return False, "closed"
    v = t
    for _ in range(plan.budget):
        if v <= plan.decay_tol:
            return True, "direct"
        nv = step(v)
        if not nv < v:
            return False, "direct"
        v = nv
    if v <= plan.decay_tol:
        return True, "direct"
    return True, "inconclusive"


def _increasing_on(phi, pts):
    vals = [phi(t) for t in pts]
    for (s, fs), (t, ft) in zip(zip(pts, vals), zip(pts[1:], vals[1:])):
        if fs > ft:
            return False, (s, t)
    return True, None


def _divergence(g):
    ladder = [10.0**k for k in range(13)]
    gaps = [t - g(t) for t in ladder]
    for t, a, b in zip(ladder[1:], gaps, gaps[1:]):
        if not b > a:
            return False, t
    if gaps[-1] < 1e6:
        return False, ladder[-1]
    return True, None


def _scalar_report(phi, plan, with_divergence):
    pts = [0.0] + [float(t) for t in plan.samples()]
    witnesses = {}
    increasing, w = _increasing_on(phi, pts)
    if not increasing:
        witnesses["increasing"] = w
    f1 = True
    if phi(0.0) != 0.0:
        f1, witnesses["f1"] = False, 0.0
    else:
        for t in pts[1:]:
            if not phi(t) < t:
                f1, witnesses["f1"] = False, t
                break
    decay, inconclusive = True, []
    closed = phi.closed_iterate if getattr(phi, "has_closed_form", False) else None
    for t in pts[1:]:
        ok, how = _decay_at(phi, t, plan, closed)
        if not ok:
            decay, witnesses["decay"] = False, t
            break
        if how == "inconclusive":
            inconclusive.append(t)
    divergence = None
    if with_divergence:
        divergence, w = _divergence(phi)
        if not divergence:
            witnesses["divergence"] = w
    return NormalityReport(
        increasing=increasing,
        f1=f1,
        decay=decay,
        divergence=divergence,
        plan=plan.name,
        samples_used=len(pts),
        witnesses=witnesses,
        inconclusive=tuple(inconclusive),
    )


def check_comparison(phi, plan=DEFAULT_PLAN):
    """Sampled check that ``phi`` is a comparison function.

    Covers monotonicity, ``phi(0) = 0`` with ``phi(t) < t``, and decay of
    the iterates (closed form when the family has one, otherwise direct
    iteration where a stall or growth is a violation).
    """
    return _scalar_report(phi, plan, with_divergence=False)


def check_normal(phi, plan=DEFAULT_PLAN):
    """Normality of a one-argument gauge: comparison-function checks plus divergence of ``t - phi(t)``."""
    return _scalar_report(phi, plan, with_divergence=True)


def check_normal5(f, plan=DEFAULT_PLAN):
    """Normality of a five-argument gauge through its diagonal ``g``.

    Both the ``F_1``/divergence condition and the decay of ``g^n`` are
    checked, independently.
    """
    g = f.diagonal()
    report = _scalar_report(g, plan, with_divergence=True)
    rng = np.random.default_rng(plan.seed + 1)
    lo, hi = min(plan.grid_exponents), max(plan.grid_exponents)
    coordinatewise = True
    witnesses = dict(report.witnesses)
    for _ in range(32):
        base = 10.0 ** rng.uniform(lo, hi, size=5)
        here = f(*base)
        for i in range(5):
            bumped = base.copy()
            bumped[i] *= 1.0 + rng.uniform(0.01, 1.0)
            if f(*bumped) < here:
                coordinatewise = False
                witnesses["increasing"] = (tuple(base), i)
                break
        if not coordinatewise:
            break
    return NormalityReport(
        increasing=report.increasing and coordinatewise,
        f1=report.f1,
        decay=report.decay,
        divergence=report.divergence,
        plan=report.plan,
        samples_used=report.samples_used,
        witnesses=witnesses,
        inconclusive=report.inconclusive,
    )


BETA_FLOOR = 1e-9


def beta_is_valid(phi, gamma, beta, n_check=256, atol=1e-12):
    """Re-check ``0 <= t < gamma + beta  =>  phi(t) <= gamma`` on samples.

    Three quarters of the samples are uniform on ``[0, gamma+beta)``; the rest
    crowd geometrically toward the open right end, where violations live.
    """
    top = gamma + beta
    n_uniform = n_check * 3 // 4
    uniform = np.arange(n_uniform) * (top / n_uniform)
    near = top - beta * 0.5 ** np.arange(1, n_check - n_uniform + 1)
    pts = np.concatenate([uniform, near[near < top]])
    return all(phi(float(t)) <= gamma + atol for t in pts)


def gamma_beta(phi, gamma, iterations=80, n_check=256):
    """Find ``beta > 0`` with ``t < gamma + beta  =>  phi(t) <= gamma``, or None.

    Bisection on ``(0, 10*gamma]``; None when no candidate above
    ``BETA_FLOOR * gamma`` survives the sampled validity check (smaller ones
    only reflect the float tolerance of the check).
    """
    if gamma <= 0:
        raise InputError("gamma must be > 0")
    hi = 10.0 * gamma
    if beta_is_valid(phi, gamma, hi, n_check):
        return hi
    lo = 0.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if beta_is_valid(phi, gamma, mid, n_check):
            lo = mid
        else:
            hi = mid
    return lo if lo > BETA_FLOOR * gamma else None


def compose_family(gauges, t):
    """Prefix compositions ``g0(t), g1(g0(t)), ...``."""
    gauges = list(gauges)
    if not gauges:
        raise InputError("compose_family needs at least one gauge")
    out, v = [], float(t)
    for g in gauges:
        v = g(v)
        out.append(v)
    return out


def check_composite_decay(gauge_at, plan=DEFAULT_PLAN):
    """Sampled decay of ``g_k o ... o g_0 (t)`` where ``gauge_at(k)`` gives ``g_k``.

    Returns ``(ok, witness, inconclusive_samples)``.
    """
    inconclusive = []
    for t in plan.samples():
        v = float(t)
        for k in range(plan.budget):
            if v <= plan.decay_tol:
                break
            nv = gauge_at(k)(v)
            if not nv < v:
                return False, (float(t), k), tuple(inconclusive)
            v = nv
        else:
            if v > plan.decay_tol:
                inconclusive.append(float(t))
    return True, None, tuple(inconclusive)
