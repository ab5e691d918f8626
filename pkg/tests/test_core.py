import pytest
from pydantic import ValidationError

from xfam.core import (
    ElementSet,
    Instance,
    Ordering,
    RankSet,
    SetFamily,
    all_sets,
    binom,
    full_layer,
    is_cross_intersecting,
    is_intersecting,
    l_initial,
    layer,
    lex_compare,
    lex_rank,
    lex_unrank,
)
from xfam.errors import InvalidComparisonError, ParameterError, RangeError
from xfam.extremal import star


def s(n, *members):
    return ElementSet.of(n, members)


def fam(n, *sets):
    return SetFamily.of(n, sets)


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ((1, 2), (1, 3), Ordering.LT),
        ((1, 4), (2, 3), Ordering.LT),
        ((2, 3), (2, 3), Ordering.EQ),
        ((2, 3), (1, 4), Ordering.GT),
    ],
)
def test_lex_compare(a, b, expected):
    assert lex_compare(s(5, *a), s(5, *b)) is expected


def test_lex_compare_rejects_different_sizes():
    with pytest.raises(InvalidComparisonError):
        lex_compare(s(4, 1), s(4, 1, 2))


def test_lex_unrank_examples():
    assert lex_unrank(4, 2, 1) == s(4, 1, 2)
    assert lex_unrank(4, 2, 4) == s(4, 2, 3)
    assert lex_rank(lex_unrank(5, 3, 7)) == 7


def test_lex_rank_inverts_unrank_on_a_whole_layer():
    n, k = 7, 3
    ranks = [lex_rank(lex_unrank(n, k, i)) for i in range(1, binom(n, k) + 1)]
    assert ranks == list(range(1, binom(n, k) + 1))


def test_lex_unrank_is_increasing():
    sets = [lex_unrank(6, 3, i) for i in range(1, binom(6, 3) + 1)]
    assert all(lex_compare(x, y) is Ordering.LT for x, y in zip(sets, sets[1:]))


@pytest.mark.parametrize("i", [0, 7])
def test_lex_unrank_out_of_range(i):
    with pytest.raises(RangeError):
        lex_unrank(4, 2, i)


def test_l_initial_examples():
    assert l_initial(4, 2, 3) == fam(4, {1, 2}, {1, 3}, {1, 4})
    assert l_initial(4, 2, 0) == SetFamily.empty(4)
    assert l_initial(5, 2, 5) == fam(5, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3})


def test_l_initial_out_of_range():
    with pytest.raises(RangeError):
        l_initial(4, 2, 7)


@pytest.mark.parametrize(
    "f, g, t, expected",
    [
        (fam(4, {1, 2}), fam(4, {3, 4}), 1, False),
        (fam(4, {1, 2}, {1, 3}), fam(4, {1, 4}), 1, True),
        (fam(4, {1, 2, 3}), fam(4, {1, 2, 4}), 2, True),
        (fam(4, {1, 2, 3}), fam(4, {1, 4}), 2, False),
        (SetFamily.empty(4), fam(4, {1}), 1, True),
    ],
)
def test_is_cross_intersecting(f, g, t, expected):
    assert is_cross_intersecting(f, g, t) is expected
    assert is_cross_intersecting(g, f, t) is expected


def test_is_cross_intersecting_rejects_universe_mismatch():
    with pytest.raises(ParameterError):
        is_cross_intersecting(fam(3, {1}), fam(4, {1}))


@pytest.mark.parametrize(
    "family, expected",
    [
        (fam(4, {1, 2}, {1, 3}, {2, 3}), True),
        (fam(4, {1, 2}, {3, 4}), False),
        (SetFamily.empty(4), True),
    ],
)
def test_is_intersecting(family, expected):
    assert is_intersecting(family) is expected


def test_layer_examples():
    f = fam(4, {1}, {1, 2})
    assert layer(f, 2) == fam(4, {1, 2})
    assert layer(f, 3) == SetFamily.empty(4)
    assert layer(star(4, RankSet.of(1, 2)), 1) == fam(4, {1})


def test_family_iterates_by_size_then_lex():
    f = fam(4, {2, 3}, {4}, {1, 4}, {1, 2})
    assert [list(x) for x in f] == [[4], [1, 2], [1, 4], [2, 3]]


def test_element_set_rejects_members_outside_universe():
    with pytest.raises(ParameterError):
        s(3, 4)


def test_element_set_shifted():
    assert s(4, 2, 3).shifted(1, 3) == s(4, 1, 2)
    assert s(4, 1, 3).shifted(1, 3) == s(4, 1, 3)


def test_full_layer_and_all_sets_sizes():
    assert len(full_layer(6, 3)) == 20
    assert len(all_sets(5, [1, 2])) == 15


def test_complements_and_relabel():
    f = fam(4, {1, 2}, {1, 3})
    assert f.complements() == fam(4, {3, 4}, {2, 4})
    assert f.relabel({1: 2, 2: 1, 3: 3, 4: 4}) == fam(4, {1, 2}, {2, 3})


def test_rank_set_is_normalized():
    r = RankSet(ranks=(3, 1, 2))
    assert r.ranks == (1, 2, 3)
    assert str(r) == "3,2,1"
    assert r.max == 3 and r.min == 1


@pytest.mark.parametrize("bad", [(1, 1), (0, 2), ()])
def test_rank_set_rejects_bad_values(bad):
    with pytest.raises(ValidationError):
        RankSet(ranks=bad)


def test_instance_properties():
    inst = Instance.of(7, [3, 1], [2], [4])
    assert inst.m == 3
    assert (inst.k1, inst.k2, inst.k3) == (4, 3, 1)
    assert inst.k_min(1) == 2
    assert inst.k_min(3) == 1
    assert inst.is_valid
    assert not inst.singleton_ranks
    assert str(inst) == "n=7 ranks=3,1;2;4"


def test_instance_rejects_rank_above_n():
    with pytest.raises(ValidationError):
        Instance.of(3, [4], [1])


def test_instance_k_min_range():
    with pytest.raises(RangeError):
        Instance.of(6, [3], [2]).k_min(3)
