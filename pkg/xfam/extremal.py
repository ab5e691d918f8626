"""
Extremal constructions and the classifier that matches a maximizing tuple
to one of the four equality cases, up to relabeling the ground set.
"""

import logging
from collections import Counter
from enum import Enum
from typing import Iterable, Optional

from .bounds import instance_bound
from .core import (
    Instance,
    RankSet,
    SetFamily,
    all_sets,
    binom,
    full_layer,
    is_intersecting,
    l_initial,
    layer_masks,
    mask_of,
)
from .errors import FamilyValidationError, NotMaximalError, ParameterError, PreconditionError
from .genset import FamilyTuple
from .models import Classification

logger = logging.getLogger(__name__)


class ExtremalKind(str, Enum):
    STAR = "STAR"
    M1 = "M1"
    M2 = "M2"
    CASE_III = "CASE_III"
    CASE_IV = "CASE_IV"


def _check_universe(n: int, ranks: RankSet) -> None:
    if n < 1 or ranks.max > n:
        raise ParameterError(f"ranks {{{ranks}}} do not fit in [{n}]")


def star(n: int, ranks: RankSet) -> SetFamily:
    """All R-sets containing 1."""
    _check_universe(n, ranks)
    return SetFamily(n, frozenset(m for m in all_sets(n, ranks).masks if m & 1))


def m1(n: int, ranks: RankSet, k: int) -> SetFamily:
    """All R-sets meeting [k]."""
    _check_universe(n, ranks)
    if not 1 <= k <= n:
        raise ParameterError(f"k={k} outside [1, {n}]")
    head = (1 << k) - 1
    return SetFamily(n, frozenset(m for m in all_sets(n, ranks).masks if m & head))


def m2(n: int, ranks: RankSet, k: int) -> SetFamily:
    """All R-sets containing [k]."""
    _check_universe(n, ranks)
    if not 1 <= k <= n:
        raise ParameterError(f"k={k} outside [1, {n}]")
    head = (1 << k) - 1
    return SetFamily(n, frozenset(m for m in all_sets(n, ranks).masks if m & head == head))


def case_iii(n: int, k1: int, k2: int, f2: SetFamily) -> FamilyTuple:
    if n != k1 + k2:
        raise ParameterError(f"needs n = k1 + k2, got n={n}, k1={k1}, k2={k2}")
    if f2.n != n or f2.cardinalities not in ((), (k2,)):
        raise ParameterError(f"F2 must consist of {k2}-subsets of [{n}]")
    if not 0 < len(f2) < binom(n, k2):
        raise ParameterError(f"needs 0 < |F2| < {binom(n, k2)}, got {len(f2)}")
    f1 = full_layer(n, k1).difference(f2.complements())
    return FamilyTuple((f1, f2), (RankSet.of(k1), RankSet.of(k2)))


def case_iii_from_l_initial(n: int, k1: int, k2: int, s: int) -> FamilyTuple:
    """Case (iii) tuple whose second family is the first s k2-sets."""
    return case_iii(n, k1, k2, l_initial(n, k2, s))


def case_iv(n: int, k: int, m: int, family: SetFamily) -> FamilyTuple:
    if n != 2 * k:
        raise ParameterError(f"needs n = 2k, got n={n}, k={k}")
    if m < 3:
        raise ParameterError(f"needs m >= 3, got {m}")
    if family.n != n or family.cardinalities not in ((), (k,)):
        raise FamilyValidationError(f"family must consist of {k}-subsets of [{n}]")
    if not is_intersecting(family):
        raise FamilyValidationError("family is not intersecting")
    if len(family) != binom(n - 1, k - 1):
        raise FamilyValidationError(f"family has {len(family)} sets, needs {binom(n - 1, k - 1)}")
    return FamilyTuple((family,) * m, (RankSet.of(k),) * m)


def complementary_choice(k: int, flip: Iterable[Iterable[int]] = ()) -> SetFamily:
    """One k-set from each complementary pair in [2k]: the member holding 1,
    or its complement for the sets listed in flip. Always intersecting with
    C(2k-1, k-1) members; no flips gives the star."""
    n = 2 * k
    full = (1 << n) - 1
    flipped = {mask_of(s) for s in flip}
    masks = set()
    for mask in layer_masks(n, k):
        if not mask & 1:
            continue
        masks.add(full ^ mask if mask in flipped else mask)
    return SetFamily(n, frozenset(masks))


def construct_extremal(kind: ExtremalKind, **params):
    kind = ExtremalKind(kind)
    builders = {
        ExtremalKind.STAR: star,
        ExtremalKind.M1: m1,
        ExtremalKind.M2: m2,
        ExtremalKind.CASE_III: case_iii,
        ExtremalKind.CASE_IV: case_iv,
    }
    try:
        return builders[kind](**params)
    except TypeError as e:
        raise ParameterError(f"{kind.value}: {e}") from e


def star_tuple(instance: Instance) -> FamilyTuple:
    return FamilyTuple(tuple(star(instance.n, r) for r in instance.ranks), instance.ranks)


def gamma_tuple(instance: Instance, gamma: int, k: Optional[int] = None) -> FamilyTuple:
    """M1 over [k] for family gamma, M2 over [k] for the rest; k defaults to k_min(gamma)."""
    k = instance.k_min(gamma) if k is None else k
    families = tuple(
        m1(instance.n, r, k) if j == gamma else m2(instance.n, r, k)
        for j, r in enumerate(instance.ranks, start=1)
    )
    return FamilyTuple(families, instance.ranks)


def _signatures(t: FamilyTuple) -> dict[int, tuple]:
    sig = {}
    for x in range(1, t.n + 1):
        bit = 1 << (x - 1)
        sig[x] = tuple(
            sum(1 for m in f.layer(r).masks if m & bit)
            for f, ranks in zip(t.families, t.ranks)
            for r in ranks
        )
    return sig


def _traces(family: SetFamily, perm: dict[int, int]) -> Counter:
    """Multiset of member traces on the mapped domain, written in image labels."""
    out = Counter()
    for mask in family.masks:
        image = 0
        for x, y in perm.items():
            if mask >> (x - 1) & 1:
                image |= 1 << (y - 1)
        out[image] += 1
    return out


def _image_traces(family: SetFamily, image_mask: int) -> Counter:
    return Counter(m & image_mask for m in family.masks)


def are_isomorphic(a: FamilyTuple, b: FamilyTuple) -> tuple[bool, Optional[dict[int, int]]]:
    """Whether one permutation of [n] maps every family of a onto the matching family of b."""
    if a.n != b.n or a.m != b.m or a.ranks != b.ranks:
        raise ParameterError("tuples differ in n, m or rank sets")
    for fa, fb in zip(a.families, b.families):
        if fa.layer_sizes() != fb.layer_sizes():
            return False, None
    sig_a, sig_b = _signatures(a), _signatures(b)
    if Counter(sig_a.values()) != Counter(sig_b.values()):
        return False, None
    pools = {x: [y for y in sig_b if sig_b[y] == sig_a[x]] for x in sig_a}
    order = sorted(pools, key=lambda x: (len(pools[x]), x))
    perm: dict[int, int] = {}
    used: set[int] = set()

    def consistent() -> bool:
        image_mask = mask_of(perm.values())
        return all(
            _traces(fa, perm) == _image_traces(fb, image_mask)
            for fa, fb in zip(a.families, b.families)
        )

    def assign(pos: int) -> bool:
        if pos == len(order):
            return True
        x = order[pos]
        for y in pools[x]:
            if y in used:
                continue
            perm[x] = y
            used.add(y)
            if consistent() and assign(pos + 1):
                return True
            del perm[x]
            used.discard(y)
        return False

    if assign(0):
        return True, dict(sorted(perm.items()))
    return False, None


def _is_case_iii(t: FamilyTuple, instance: Instance) -> bool:
    n = instance.n
    k = [r.max for r in instance.ranks]
    orders = [(0, 1)] if k[0] > k[1] else [(1, 0)] if k[1] > k[0] else [(0, 1), (1, 0)]
    for big, small in orders:
        f1, f2 = t[big], t[small]
        if not 0 < len(f2) < binom(n, k[small]):
            continue
        if f1 == full_layer(n, k[big]).difference(f2.complements()):
            return True
    return False


def _is_case_iv(t: FamilyTuple, instance: Instance) -> bool:
    k = instance.k1
    first = t[0]
    return (
        all(f == first for f in t.families)
        and is_intersecting(first)
        and len(first) == binom(instance.n - 1, k - 1)
    )


def classify(tuple_: FamilyTuple, instance: Instance) -> Classification:
    if tuple_.n != instance.n or tuple_.ranks != instance.ranks:
        raise ParameterError("tuple does not match the instance")
    if any(not f for f in tuple_.families):
        raise PreconditionError("tuple has an empty family")
    if not tuple_.is_cross_intersecting(instance.t):
        raise PreconditionError("tuple is not cross-intersecting")
    bound = instance_bound(instance)
    total = tuple_.total()
    if total < bound.maximum:
        raise NotMaximalError(total, bound.maximum)
    if total > bound.maximum:
        logger.warning(f"{instance}: tuple sum {total} exceeds the bound {bound.maximum}")

    cases: list[str] = []
    gamma = None
    permutation = None
    matched, perm = are_isomorphic(star_tuple(instance), tuple_)
    if matched:
        cases.append("i")
        permutation = perm
    for c in bound.candidates:
        if c.k_min == 1 or c.value != bound.maximum:
            continue
        matched, perm = are_isomorphic(gamma_tuple(instance, c.gamma), tuple_)
        if matched:
            if "ii" not in cases:
                cases.append("ii")
                gamma = c.gamma
            permutation = permutation or perm
    exact_split = instance.singleton_ranks and instance.n == instance.k1 + instance.k2
    if exact_split and instance.m == 2 and _is_case_iii(tuple_, instance):
        cases.append("iii")
    if exact_split and instance.m >= 3 and len(set(instance.ranks)) == 1:
        if _is_case_iv(tuple_, instance):
            cases.append("iv")
    if not cases:
        logger.warning(f"{instance}: maximal tuple matches no equality case")
    return Classification(cases=cases, gamma=gamma, witness_permutation=permutation)


def classify_cases(tuple_: FamilyTuple, instance: Instance) -> list[str]:
    return classify(tuple_, instance).cases


def relabel_tuple(t: FamilyTuple, perm: dict[int, int]) -> FamilyTuple:
    return FamilyTuple(tuple(f.relabel(perm) for f in t.families), t.ranks)