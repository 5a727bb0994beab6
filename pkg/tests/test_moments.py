import math
from fractions import Fraction as F

import pytest

from regspec.moments import (
    DomainError,
    MomentSequence,
    PolyInD,
    deviation_table,
    eigenmoments,
    eighth_moment_closed_form,
    kesten_moment_exact,
    moment_expansion,
    moment_expansion_symbolic,
    multiplicity_breakdown,
    semicircle_moment,
    semicircle_moments,
)

from oracles import eigenmoments_by_walks, walk_moment

# A generic weight law: distinct, unrelated rationals so no identity holds by accident.
GENERIC = {k: F(k * k + 1, k + 3) for k in range(1, 13)}


def generic(k):
    return GENERIC[k]


def test_semicircle_moments():
    assert semicircle_moment(2) == F(1, 4)
    assert semicircle_moment(8) == F(7, 128)
    assert semicircle_moment(3) == 0
    assert semicircle_moment(0) == 1


def test_second_moment_is_d_times_weight_variance():
    for d in range(1, 8):
        assert moment_expansion(2, d, generic) == d * GENERIC[2]


def test_fourth_moment_all_ones():
    assert moment_expansion(4, 4, lambda k: 1) == 28


def test_odd_orders_vanish():
    for d in (1, 3, 6):
        assert moment_expansion(5, d, generic) == 0
        assert kesten_moment_exact(d, 7) == 0


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("order", [4, 6, 8])
def test_expansion_matches_tree_walk_oracle(d, order):
    assert moment_expansion(order, d, generic) == walk_moment(d, order, generic)


def test_accepts_sequences_and_mappings():
    seq = MomentSequence.from_function(generic, 8)
    assert moment_expansion(8, 5, seq) == moment_expansion(8, 5, GENERIC) == moment_expansion(8, 5, generic)
    with pytest.raises(DomainError):
        moment_expansion(10, 3, seq)


def test_top_coefficient_is_d():
    for order in (4, 6, 8, 10):
        table = moment_expansion_symbolic(order)
        assert table[(order,)] == PolyInD([0, 1])


def test_linearity_in_each_weight_moment():
    base = dict(GENERIC)
    bumped = dict(GENERIC)
    bumped[4] += 1
    bumped2 = dict(GENERIC)
    bumped2[4] += 2
    a, b, c = (moment_expansion(8, 5, m) for m in (base, bumped, bumped2))
    # mu(4) appears squared in the (4,4) term, so the second difference is 2 * 6d(d-1)
    assert (c - b) - (b - a) == 2 * 6 * 5 * 4


@pytest.mark.parametrize("order", [2, 4, 6, 8, 10, 12])
def test_symbolic_consistent_with_numeric(order):
    poly = moment_expansion_symbolic(order, generic)
    for d in range(1, 11):
        assert poly(d) == moment_expansion(order, d, generic)


def test_polyind_arithmetic():
    p = PolyInD.from_roots([0, 1, 1])
    assert p == PolyInD([0, 1, -2, 1])
    assert (p + PolyInD([1])) (2) == 3
    assert (p * 2)(3) == 24
    assert PolyInD([1, 0, 0]).degree == 0
    assert PolyInD([]).degree == -1


def test_multiplicity_breakdown_eighth():
    table = multiplicity_breakdown(8)
    assert table[(4, 2, 2)] == {(0, 1, 1): 16, (0, 1, 2): 12}
    assert table[(2, 2, 2, 2)] == {(0, 1, 1, 1): 4, (0, 1, 1, 2): 8, (0, 1, 2, 3): 2}
    assert table[(6, 2)] == {(0, 1): 8}
    assert table[(4, 4)] == {(0, 1): 6}


@pytest.mark.parametrize("d", range(2, 11))
def test_eigenmoments_small(d):
    t = eigenmoments(d, 8)
    assert (t(2), t(4), t(6)) == (F(1, 4), F(1, 8), F(5, 64))
    assert t(8) == eighth_moment_closed_form(d)
    assert t(3) == t(5) == 0


def test_eigenmoment_values_at_three():
    t = eigenmoments(3, 10)
    assert t(8) == F(23, 416)
    # frozen from the tree-walk oracle
    assert t(10) == F(283, 6656)


def test_eigenmoments_match_walk_oracle():
    for d in (3, 4):
        oracle = eigenmoments_by_walks(d, 10)
        t = eigenmoments(d, 10)
        assert all(t(k) == oracle[k] for k in (2, 4, 6, 8, 10))


def test_eigenmoments_reject_small_d():
    with pytest.raises(DomainError):
        eigenmoments(1, 8)
    with pytest.raises(DomainError):
        eighth_moment_closed_form(1)


def test_eighth_closed_form():
    assert eighth_moment_closed_form(3) == F(23, 416)
    assert eighth_moment_closed_form(4) == F(7, 128) + F(1, 2688)
    for d in range(2, 40):
        assert eighth_moment_closed_form(d) > F(7, 128)


@pytest.mark.parametrize("d", range(2, 11))
def test_recursion_identity(d):
    t = eigenmoments(d, 12)
    for k in range(1, 7):
        assert moment_expansion(2 * k, d, t) == d**k * t(2 * k)


def test_sandwich_between_semicircle_and_one():
    for d in range(2, 11):
        t = eigenmoments(d, 14)
        for k in range(2, 15, 2):
            assert semicircle_moment(k) <= t(k) <= 1


@pytest.mark.parametrize("d", range(2, 11))
def test_semicircle_is_not_fixed(d):
    diff = moment_expansion(8, d, semicircle_moment) - d**4 * F(7, 128)
    assert diff == F(d * (d - 1), 128)
    assert diff == walk_moment(d, 8, semicircle_moment) - d**4 * F(7, 128)


def test_deviation_table():
    dev = deviation_table(range(2, 13), [2, 4, 6, 8, 10])
    for d in range(2, 13):
        assert dev[d, 2] == dev[d, 4] == dev[d, 6] == 0
        assert dev[d, 8] == F(d * d, 128 * (d * d + d + 1))
    eights = [dev[d, 8] for d in range(2, 13)]
    assert eights == sorted(eights) and all(e < F(1, 128) for e in eights)
    assert all(0 < dev[d, 10] < 1 for d in range(3, 13))


def test_kesten_exact():
    for d in range(1, 9):
        assert kesten_moment_exact(d, 2) == d
        assert kesten_moment_exact(d, 4) == 2 * d * d - d
    for k in range(1, 7):
        assert kesten_moment_exact(2, 2 * k) == math.comb(2 * k, k)
    assert [kesten_moment_exact(4, k) for k in (6, 8)] == [walk_moment(4, k, lambda n: 1) for k in (6, 8)]


def test_degenerate_one_regular():
    for k in range(1, 7):
        assert moment_expansion(2 * k, 1, generic) == GENERIC[2 * k]


def test_moment_sequence_label_and_bounds():
    s = semicircle_moments(8)
    assert s(8) == F(7, 128) and s(0) == 1 and s.max_order == 8
