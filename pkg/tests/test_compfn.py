import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordfix import (
    GaugeError,
    GaugeFamily5,
    InputError,
    ScalarGauge,
    check_comparison,
    check_normal5,
    compose_family,
    gamma_beta,
    iterate,
    matkowski_reduce,
)
from ordfix.compfn import PointGaugeFamily, VectorGauge, beta_is_valid

half = ScalarGauge.linear(0.5)
rational = ScalarGauge.rational(1.0)


def test_iterate_examples():
    assert iterate(half, 1.0, 10) == 2.0**-10
    assert iterate(rational, 3.7, 0) == 3.7
    assert iterate(rational, 1.0, 4) == pytest.approx(1 / 5, rel=1e-15)


def test_iterate_rejects_bad_evaluator():
    bad = ScalarGauge(lambda t: -1.0)
    with pytest.raises(GaugeError):
        iterate(bad, 1.0, 1)
    with pytest.raises(GaugeError):
        iterate(ScalarGauge(lambda t: math.inf), 1.0, 1)
    with pytest.raises(InputError):
        iterate(half, 1.0, -1)


def test_comparison_examples():
    assert check_comparison(half).passed
    rep = check_comparison(ScalarGauge.identity())
    assert not rep.passed and not rep.f1
    assert rep.witnesses
    assert check_comparison(rational).passed


def test_gamma_beta_examples():
    beta = gamma_beta(half, 1.0)
    assert beta is not None and beta > 0 and beta_is_valid(half, 1.0, beta)
    beta = gamma_beta(rational, 0.5)
    assert beta is not None and beta_is_valid(rational, 0.5, beta)
    assert beta_is_valid(rational, 0.5, 0.5)
    assert gamma_beta(ScalarGauge.identity(), 1.0) is None


def test_normal5_examples():
    f = GaugeFamily5.max_linear(0.1)
    assert f.diagonal()(3.0) == pytest.approx(0.6)
    assert check_normal5(f).passed
    assert check_normal5(GaugeFamily5.zero()).passed
    rep = check_normal5(GaugeFamily5.max_linear(1.0))
    assert not rep.e02 and not rep.e03


def test_compose_examples():
    assert compose_family([half] * 3, 1.0) == [0.5, 0.25, 0.125]
    nine = ScalarGauge.linear(0.9)
    out = compose_family([half, nine, half, nine], 1.0)
    assert out == pytest.approx([0.5, 0.45, 0.225, 0.2025], rel=1e-15)
    assert compose_family([half], 2.0) == [1.0]
    with pytest.raises(InputError):
        compose_family([], 1.0)


def test_matkowski_examples():
    F = matkowski_reduce(GaugeFamily5.max_linear(1.0))
    assert F(1, 2, 3) == 5
    assert matkowski_reduce(GaugeFamily5.zero())(1, 2, 3) == 0
    assert matkowski_reduce(GaugeFamily5.projection(0))(1, 2, 3) == 1


def test_gauge_json_round_trip():
    for g in (half, rational, ScalarGauge.zero(), ScalarGauge.identity()):
        assert ScalarGauge.from_json(g.to_json()) == g
    assert ScalarGauge.from_json({"family": "linear", "alpha": 0.5}) == half
    with pytest.raises(InputError):
        ScalarGauge.from_json({"family": "cubic"})
    for f in (GaugeFamily5.max_linear(0.2), GaugeFamily5.zero()):
        assert GaugeFamily5.from_json(f.to_json()).to_json() == f.to_json()
    v = VectorGauge.max_tail(0.75)
    assert VectorGauge.from_json(v.to_json()) == v


def test_point_family_shared():
    fam = PointGaugeFamily.shared((1, 2), VectorGauge.max_all(0.5))
    assert fam.n(1) == 2
    assert fam.g(1)(2.0) == pytest.approx(1.0)


ts = st.floats(0, 1e3, allow_nan=False)
counts = st.integers(0, 30)


@settings(max_examples=200, deadline=None)
@given(ts, counts, counts, st.sampled_from([half, rational, ScalarGauge.linear(0.9)]))
def test_iterate_semigroup(t, m, n, phi):
    assert iterate(phi, t, m + n) == pytest.approx(iterate(phi, iterate(phi, t, m), n), rel=1e-12, abs=1e-300)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 0.99), ts, st.integers(0, 40))
def test_linear_closed_form(alpha, t, n):
    phi = ScalarGauge.linear(alpha)
    assert phi.closed_iterate(t, n) == pytest.approx(alpha**n * t, rel=1e-12, abs=1e-300)
    v = t
    for _ in range(n):
        v = alpha * v
    assert iterate(phi, t, n) == v


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 0.95))
def test_linear_gauge_is_comparison(alpha):
    assert check_comparison(ScalarGauge.linear(alpha)).passed


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 5.0), st.sampled_from([half, rational, ScalarGauge.linear(0.9)]))
def test_gamma_beta_validity(gamma, phi):
    beta = gamma_beta(phi, gamma)
    assert beta is not None
    assert beta_is_valid(phi, gamma, beta)


@settings(max_examples=100, deadline=None)
@given(ts, st.integers(1, 12), st.sampled_from([half, rational]))
def test_compose_identical_matches_iterate(t, k, phi):
    out = compose_family([phi] * k, t)
    for i, v in enumerate(out, start=1):
        assert v == iterate(phi, t, i)
