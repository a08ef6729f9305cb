import numpy as np
import pytest
from hypothesis import given, settings

from ordfix import (
    FiniteSpace,
    InputError,
    chain_components,
    check_axioms,
    check_bounds_and_directedness,
    comparable,
    find_chain,
    order_from_pairs,
)
from ordfix.spaces import recheck_witness

from strategies import spaces

MODES = ("metric", "almost-metric", "quasi-order", "order")


def _space(dist, pairs=(), selfmap=None):
    d = np.asarray(dist, dtype=float)
    return FiniteSpace(d, order_from_pairs(len(d), pairs), selfmap)


def test_singleton_passes_every_mode():
    s = _space([[0]])
    assert all(check_axioms(s, m).ok for m in MODES)


def test_asymmetric_pair():
    s = _space([[0, 1], [2, 0]])
    rep = check_axioms(s, "metric")
    assert rep.failed() == ["symmetric"]
    assert rep.witnesses["symmetric"] == (0, 1)
    assert check_axioms(s, "almost-metric").ok
    assert not s.symmetric


def test_triangle_witness():
    s = _space([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    rep = check_axioms(s, "metric")
    assert rep.failed() == ["triangular"]
    assert rep.witnesses["triangular"] == (0, 1, 2)


def test_order_mode_adds_antisymmetry():
    rel = np.ones((2, 2), dtype=bool)
    s = FiniteSpace(np.array([[0, 1], [1, 0.0]]), rel)
    assert check_axioms(s, "quasi-order").ok
    assert check_axioms(s, "order").failed() == ["antisymmetric"]


def test_shape_mismatch_is_input_error():
    with pytest.raises(InputError):
        FiniteSpace(np.zeros((2, 2)), np.eye(3, dtype=bool))
    with pytest.raises(InputError):
        check_axioms(_space([[0]]), "nonsense")


def test_comparable_examples():
    total = _space(np.ones((3, 3)) - np.eye(3), [(0, 1), (1, 2)])
    assert all(comparable(total, i, j) for i in range(3) for j in range(3))
    disc = _space([[0, 1], [1, 0]])
    assert comparable(disc, 0, 0)
    assert not comparable(disc, 0, 1)


def test_find_chain_examples():
    # 0 <= 2 and 1 <= 2
    s = _space(np.ones((3, 3)) - np.eye(3), [(0, 2), (1, 2)])
    assert find_chain(s, 0, 1) == [0, 2, 1]
    assert find_chain(s, 1, 1) == [1]
    assert find_chain(_space([[0, 1], [1, 0]]), 0, 1) is None


def test_chain_components_examples():
    lin = _space(np.ones((4, 4)) - np.eye(4), [(0, 1), (1, 2), (2, 3)])
    assert chain_components(lin) == [[0, 1, 2, 3]]
    assert chain_components(_space([[0, 1], [1, 0]])) == [[0], [1]]
    five = _space(np.ones((5, 5)) - np.eye(5), [(0, 2), (1, 2), (3, 4)])
    assert chain_components(five) == [[0, 1, 2], [3, 4]]


def test_bounds_examples():
    # bottom 0, atoms 1 and 2, top 3
    lattice = _space(np.ones((4, 4)) - np.eye(4), [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert check_bounds_and_directedness(lattice).a05
    total = _space(np.ones((3, 3)) - np.eye(3), [(0, 1), (1, 2)])
    rep = check_bounds_and_directedness(total)
    assert rep.d03 and rep.d04 and rep.linear
    vee = _space(np.ones((3, 3)) - np.eye(3), [(0, 2), (1, 2)])
    rep = check_bounds_and_directedness(vee)
    assert rep.d04 and not rep.d03 and not rep.linear


def test_space_is_read_only():
    s = _space([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        s.dist[0, 1] = 7


@settings(max_examples=120, deadline=None)
@given(spaces(closed=False, symmetric=False))
def test_witnesses_recheck(space):
    for mode in MODES:
        rep = check_axioms(space, mode)
        for name in rep.failed():
            assert recheck_witness(space, mode, name, rep.witnesses[name])


@settings(max_examples=120, deadline=None)
@given(spaces())
def test_closed_order_is_quasi_order(space):
    assert check_axioms(space, "quasi-order").ok
    assert check_axioms(space, "metric").ok


@settings(max_examples=120, deadline=None)
@given(spaces())
def test_components_partition_matches_chains(space):
    blocks = chain_components(space)
    assert sorted(p for b in blocks for p in b) == list(range(space.n))
    where = {p: k for k, b in enumerate(blocks) for p in b}
    for x in range(space.n):
        for y in range(space.n):
            chain = find_chain(space, x, y)
            assert (chain is not None) == (where[x] == where[y])
            if chain is not None:
                assert chain[0] == x and chain[-1] == y
                assert all(comparable(space, a, b) for a, b in zip(chain, chain[1:]))


@settings(max_examples=120, deadline=None)
@given(spaces())
def test_bounds_imply_connectivity_and_linearity(space):
    rep = check_bounds_and_directedness(space)
    if rep.a05:
        assert len(chain_components(space)) == 1
    if rep.d03 and rep.d04:
        assert rep.linear
