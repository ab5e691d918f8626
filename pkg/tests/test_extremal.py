import pytest

from xfam.bounds import theorem_bound
from xfam.compress import upset
from xfam.core import Instance, RankSet, SetFamily, binom, full_layer, layer_masks
from xfam.errors import FamilyValidationError, NotMaximalError, ParameterError, PreconditionError
from xfam.extremal import (
    ExtremalKind,
    are_isomorphic,
    case_iii,
    case_iii_from_l_initial,
    case_iv,
    classify,
    complementary_choice,
    construct_extremal,
    gamma_tuple,
    m1,
    m2,
    relabel_tuple,
    star,
    star_tuple,
)
from xfam.genset import FamilyTuple
from xfam.oracle import exhaustive_oracle, instance_grid

from .helpers import random_family

R2, R3 = RankSet.of(2), RankSet.of(3)


def fam(n, *sets):
    return SetFamily.of(n, sets)


def test_construct_examples():
    assert construct_extremal(ExtremalKind.STAR, n=4, ranks=R2) == fam(4, {1, 2}, {1, 3}, {1, 4})
    assert construct_extremal("M2", n=6, ranks=R3, k=2) == fam(
        6, {1, 2, 3}, {1, 2, 4}, {1, 2, 5}, {1, 2, 6}
    )
    t = construct_extremal(ExtremalKind.CASE_III, n=6, k1=3, k2=3, f2=star(6, R3))
    assert t.sizes() == [10, 10]
    assert t.total() == 20


def test_construct_rejects_bad_parameters():
    with pytest.raises(ParameterError):
        construct_extremal(ExtremalKind.M1, n=4, ranks=R2)
    with pytest.raises(ParameterError):
        m1(4, R2, 5)
    with pytest.raises(ParameterError):
        star(3, RankSet.of(4))
    with pytest.raises(ParameterError):
        case_iii(7, 3, 3, star(7, R3))
    with pytest.raises(ParameterError):
        case_iii(6, 3, 3, SetFamily.empty(6))
    with pytest.raises(ParameterError):
        case_iii(6, 3, 3, full_layer(6, 3))


def test_case_iv_validation():
    with pytest.raises(ParameterError):
        case_iv(4, 2, 2, star(4, R2))
    with pytest.raises(FamilyValidationError):
        case_iv(4, 2, 3, fam(4, {1, 2}, {3, 4}, {1, 3}))
    with pytest.raises(FamilyValidationError):
        case_iv(4, 2, 3, fam(4, {1, 2}, {1, 3}))
    assert case_iv(4, 2, 3, complementary_choice(2, [[1, 4]])).sizes() == [3, 3, 3]


def test_complementary_choice():
    assert complementary_choice(2) == star(4, R2)
    assert complementary_choice(2, [[1, 4]]) == fam(4, {1, 2}, {1, 3}, {2, 3})
    assert len(complementary_choice(3, [[1, 2, 3], [1, 5, 6]])) == binom(5, 2)


def test_case_iii_always_cross_intersects():
    for k1, k2 in [(2, 2), (3, 2), (3, 3), (4, 2)]:
        n = k1 + k2
        for s in range(1, binom(n, k2)):
            t = case_iii_from_l_initial(n, k1, k2, s)
            assert t.total() == binom(n, k1)
            assert t.is_cross_intersecting()


def test_gamma_tuples_cross_intersect():
    for inst in instance_grid(range(3, 8), 3, 3):
        for gamma in range(1, 4):
            for k in range(1, inst.k_min(gamma) + 1):
                assert gamma_tuple(inst, gamma, k).is_cross_intersecting(), (str(inst), gamma, k)


def test_are_isomorphic_examples():
    s1 = star(4, R2)
    s2 = SetFamily(4, frozenset(m for m in layer_masks(4, 2) if m & 2))
    ok, perm = are_isomorphic(FamilyTuple((s1, s1), (R2, R2)), FamilyTuple((s2, s2), (R2, R2)))
    assert ok
    assert perm[1] == 2
    ok, perm = are_isomorphic(FamilyTuple((s1,), (R2,)), FamilyTuple((m2(4, R2, 2),), (R2,)))
    assert (ok, perm) == (False, None)
    triangle = fam(4, {1, 2}, {1, 3}, {2, 3})
    assert not are_isomorphic(FamilyTuple((s1,), (R2,)), FamilyTuple((triangle,), (R2,)))[0]


def test_are_isomorphic_shape_mismatch():
    with pytest.raises(ParameterError):
        are_isomorphic(FamilyTuple((star(4, R2),), (R2,)), FamilyTuple((star(5, R2),), (R2,)))
    with pytest.raises(ParameterError):
        are_isomorphic(
            FamilyTuple((star(4, R2),), (R2,)), FamilyTuple((star(4, R3),), (R3,))
        )


def test_are_isomorphic_is_an_equivalence(rng):
    for _ in range(60):
        n = rng.randint(3, 6)
        ranks = (RankSet.of(2), RankSet.of(2, 3))
        a = FamilyTuple(
            (random_family(rng, n, [2]), random_family(rng, n, [2, 3], 0.3)), ranks
        )
        images = list(range(1, n + 1))
        rng.shuffle(images)
        p = dict(zip(range(1, n + 1), images))
        rng.shuffle(images)
        q = dict(zip(range(1, n + 1), images))
        b = relabel_tuple(a, p)
        c = relabel_tuple(b, q)
        assert are_isomorphic(a, a)[0]
        ok, found = are_isomorphic(a, b)
        assert ok and are_isomorphic(b, a)[0]
        assert relabel_tuple(a, found) == b
        assert are_isomorphic(a, c)[0]


def test_classify_examples():
    inst = Instance.of(6, [3], [2], [2, 1])
    assert classify(star_tuple(inst), inst).case == "i"

    inst = Instance.of(6, [3], [2])
    t = FamilyTuple((m1(6, R3, 2), m2(6, R2, 2)), inst.ranks)
    result = classify(t, inst)
    assert result.cases == ["ii"]
    assert result.gamma == 1

    inst = Instance.of(6, [3], [3])
    f1 = upset(fam(6, {1}, {2, 3}), R3, 6)
    f2 = upset(fam(6, {1, 2}, {1, 3}), R3, 6)
    assert classify(FamilyTuple((f1, f2), inst.ranks), inst).cases == ["iii"]


def test_classify_three_equal_families_at_the_split():
    inst = Instance.of(4, [2], [2], [2])
    assert theorem_bound(4, inst.ranks).maximum == 9
    starred = classify(star_tuple(inst), inst)
    assert "i" in starred.cases and "iv" in starred.cases
    triangle = case_iv(4, 2, 3, complementary_choice(2, [[1, 4]]))
    assert classify(triangle, inst).cases == ["iv"]


def test_maximal_mixed_rank_tuple_matches_no_listed_case():
    inst = Instance.of(4, [2, 1], [2, 1])
    r = inst.ranks[0]
    t = FamilyTuple((m1(4, r, 2), m2(4, r, 2)), inst.ranks)
    assert t.sizes() == [7, 1]
    assert t.total() == theorem_bound(4, inst.ranks).maximum == exhaustive_oracle(inst).maximum == 8
    result = classify(t, inst)
    assert result.cases == []
    assert result.case == "none"


def test_classify_serializes_the_case():
    inst = Instance.of(6, [3], [2])
    t = FamilyTuple((m1(6, R3, 2), m2(6, R2, 2)), inst.ranks)
    text = classify(t, inst).model_dump_json()
    assert '"case":"ii"' in text
    assert '"gamma":1' in text


def test_classify_rejects_non_maximal_tuples():
    inst = Instance.of(6, [3], [2])
    with pytest.raises(NotMaximalError) as info:
        classify(star_tuple(inst), inst)
    assert (info.value.total, info.value.maximum) == (15, 17)
    with pytest.raises(PreconditionError):
        classify(FamilyTuple((fam(6, {1, 2, 3}), fam(6, {4, 5})), inst.ranks), inst)


def test_classify_recovers_every_construction():
    for m in (2, 3):
        for inst in instance_grid(range(4, 8), m, 3):
            report = theorem_bound(inst.n, inst.ranks)
            if report.star_total == report.maximum:
                assert "i" in classify(star_tuple(inst), inst).cases, str(inst)
            for c in report.candidates:
                if c.k_min > 1 and c.value == report.maximum:
                    assert "ii" in classify(gamma_tuple(inst, c.gamma), inst).cases, str(inst)
    for k1, k2 in [(2, 2), (3, 2), (3, 3)]:
        n = k1 + k2
        inst = Instance.of(n, [k1], [k2])
        for s in range(1, binom(n, k2)):
            assert "iii" in classify(case_iii_from_l_initial(n, k1, k2, s), inst).cases
