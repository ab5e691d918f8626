import pytest

from xfam.bounds import (
    BoundKind,
    classic_bound,
    cross_t_conjecture_bound,
    endpoint_check,
    f_gamma,
    f_gamma_table,
    interior_inequalities,
    logconcavity_check,
    size_m1,
    size_m2,
    size_star,
    theorem_bound,
)
from xfam.core import Instance, Ordering, RankSet, binom
from xfam.errors import ParameterError, RangeError
from xfam.extremal import m1, m2, star
from xfam.oracle import exhaustive_oracle, instance_grid


def R(*ranks):
    return RankSet.of(*ranks)


@pytest.mark.parametrize("n, ranks, expected", [(6, R(3), 10), (6, R(3, 2), 15), (5, R(1), 1)])
def test_size_star(n, ranks, expected):
    assert size_star(n, ranks) == expected


def test_size_m1_m2():
    assert size_m1(6, R(3), 2) == 16
    assert size_m2(6, R(3), 2) == 4
    assert size_m1(7, R(2, 4), 1) == size_star(7, R(2, 4))


def test_sizes_match_constructions():
    for n in range(1, 11):
        for k in range(1, min(n, 5) + 1):
            for ranks in ([k], [1, k], list(range(1, k + 1))):
                r = RankSet(ranks=sorted(set(ranks)))
                assert len(star(n, r)) == size_star(n, r)
                assert len(m1(n, r, k)) == size_m1(n, r, k)
                assert len(m2(n, r, k)) == size_m2(n, r, k)


def test_f_gamma_examples():
    ranks = (R(3), R(2))
    assert f_gamma(6, ranks, 1, 1) == 15
    assert f_gamma(6, ranks, 1, 2) == 17
    with pytest.raises(RangeError):
        f_gamma(6, ranks, 1, 3)


def test_theorem_bound_two_families():
    report = theorem_bound(6, [R(3), R(2)])
    assert report.maximum == 17
    assert report.star_total == 15
    assert report.argmax == ["gamma=1"]
    assert report.argmax_gammas == [1]
    assert report.predicted_cases == ["ii"]
    assert report.valid


def test_theorem_bound_star_wins():
    report = theorem_bound(6, [R(3), R(2), R(2, 1)])
    assert report.maximum == 21 == report.star_total
    values = {c.gamma: c.value for c in report.candidates}
    # gamma 1 and 2 have k_min = 1, where the candidate is the star itself
    assert values == {1: 21, 2: 21, 3: 16}
    assert report.predicted_cases == ["i"]


def test_theorem_bound_exact_split_flags_case_iii():
    report = theorem_bound(4, [R(2), R(2)])
    assert report.maximum == 6
    assert "iii" in report.predicted_cases


def test_theorem_bound_invalid_instance_is_flagged():
    report = theorem_bound(5, [R(3), R(3)])
    assert not report.valid


def test_report_serializes():
    text = theorem_bound(6, [R(3), R(2)]).model_dump_json()
    assert '"maximum":17' in text


@pytest.mark.parametrize(
    "kwargs, expected",
    [
        (dict(kind="EKR", n=6, k=3), 10),
        (dict(kind="HM", n=4, k=2), 6),
        (dict(kind="HM", n=6, k=3), 20),
        (dict(kind="SFQ", n=4, k=2, m=3), 9),
        (dict(kind="BF", n=4, r=1, s=2), 5),
        (dict(kind="P15", n=6, ks=[3, 2]), 17),
        (dict(kind="UNIFORM_T", n=6, ks=[3, 2], t=1), 17),
        (dict(kind="UNIFORM_T", n=6, ks=[3, 3], t=2), 11),
    ],
)
def test_classic_bound(kwargs, expected):
    assert classic_bound(**kwargs) == expected


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="EKR", n=5, k=3),
        dict(kind="HM", n=6),
        dict(kind="SFQ", n=4, k=2, m=1),
        dict(kind="BF", n=4, r=3, s=2),
        dict(kind="P15", n=4, ks=[3, 2]),
        dict(kind="P15", n=8, ks=[2, 3]),
        dict(kind="UNIFORM_T", n=6, ks=[3, 3], t=0),
    ],
)
def test_classic_bound_preconditions(kwargs):
    with pytest.raises(ParameterError):
        classic_bound(**kwargs)


def test_multi_family_bound_agrees_with_theorem_on_singleton_ranks():
    for inst in instance_grid(range(4, 10), 3, 4, singleton=True):
        ks = inst.top_ranks
        assert classic_bound(BoundKind.P15, inst.n, ks=ks) == theorem_bound(inst.n, inst.ranks).maximum


def test_sfq_agrees_with_theorem_on_equal_ranks():
    for n in range(4, 10):
        for k in range(1, n // 2 + 1):
            for m in (2, 3, 4):
                ranks = [R(k)] * m
                assert classic_bound("SFQ", n, k=k, m=m) == theorem_bound(n, ranks).maximum


def test_endpoint_check_examples():
    inst = Instance.of(8, [3], [3])
    assert f_gamma_table(inst, 1) == [42, 42, 47]
    assert endpoint_check(8, inst.ranks, 1)
    assert endpoint_check(6, [R(3), R(2)], 1)
    assert endpoint_check(6, [R(3), R(2), R(2, 1)], 1)


def test_endpoint_check_over_grid():
    for m in (2, 3):
        for inst in instance_grid(range(3, 11), m, 4):
            if inst.n <= inst.k1 + inst.k2:
                continue
            for gamma in range(1, m + 1):
                assert endpoint_check(inst.n, inst.ranks, gamma), (str(inst), gamma)


def test_interior_inequalities_are_the_neighbour_differences():
    for inst in instance_grid(range(5, 11), 2, 4):
        for gamma in (1, 2):
            table = f_gamma_table(inst, gamma)
            for l in range(2, len(table)):
                lhs_down, rhs_down, lhs_up, rhs_up = interior_inequalities(inst, gamma, l)
                assert table[l - 1] - table[l] == lhs_down - rhs_down
                assert table[l - 1] - table[l - 2] == lhs_up - rhs_up


def test_logconcavity_examples():
    assert logconcavity_check(6, 2, 2, 3, 2) is Ordering.LT
    assert logconcavity_check(5, 2, 2, 3, 2) is Ordering.EQ
    assert logconcavity_check(6, 2, 4, 3, 2) is Ordering.LT


def test_logconcavity_strict_above_the_split():
    seen_eq = 0
    for a in range(1, 5):
        for b in range(1, 5):
            for n in range(a + b, 11):
                for l in range(3, n + 1):
                    for u in range(2, l):
                        x, y, big = b - (l + 1 - u), a - u, n - l
                        if x < 0 or y < 0 or binom(big, x + 1) * binom(big, y + 1) == 0:
                            continue
                        result = logconcavity_check(n, l, u, a, b)
                        if n > a + b:
                            assert result is Ordering.LT
                        else:
                            assert result is Ordering.EQ
                            seen_eq += 1
    assert seen_eq > 0


def test_cross_t_bound():
    t2 = cross_t_conjecture_bound(6, [R(3), R(3)], 2)
    assert t2.value == 11
    assert [c.value for c in t2.frontier_candidates] == [8, 8]
    assert [c.value for c in t2.gamma_candidates] == [11, 11]
    assert cross_t_conjecture_bound(6, [R(3), R(2)], 1).value == 17


def test_cross_t_bound_preconditions():
    with pytest.raises(ParameterError):
        cross_t_conjecture_bound(6, [R(3), R(1)], 2)
    with pytest.raises(ParameterError):
        cross_t_conjecture_bound(4, [R(3), R(3)], 2)


def test_cross_t_bound_ignores_ranks_below_t():
    mixed = cross_t_conjecture_bound(6, [R(1, 3), R(3)], 2)
    assert mixed.instance == "n=6 ranks=3,1;3 t=2"
    assert mixed.value == 11
    assert [c.value for c in mixed.frontier_candidates] == [8, 8]
    small = cross_t_conjecture_bound(5, [R(2, 1), R(2)], 2)
    assert small.value == 2 == exhaustive_oracle(Instance.of(5, [2, 1], [2], t=2)).maximum
