"""
Shifting operators s_{i,j}, left-compression and up-set closure.
"""

import logging
from itertools import combinations

from .core import ElementSet, RankSet, SetFamily, mask_of, members_of
from .errors import MembershipError, ParameterError, RankError

logger = logging.getLogger(__name__)


def _check_pair(n: int, i: int, j: int) -> None:
    if not 1 <= i < j <= n:
        raise ParameterError(f"shift needs 1 <= i < j <= n, got i={i}, j={j}, n={n}")


def _shift_mask(mask: int, i: int, j: int, masks: frozenset[int]) -> int:
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    if mask & bj and not mask & bi:
        target = mask ^ bj ^ bi
        if target not in masks:
            return target
    return mask


def shift_set(a: ElementSet, i: int, j: int, family: SetFamily) -> ElementSet:
    _check_pair(family.n, i, j)
    if a not in family:
        raise MembershipError(f"{a} is not a member of the family")
    return ElementSet(_shift_mask(a.mask, i, j, family.masks), family.n)


def shift_family(family: SetFamily, i: int, j: int) -> SetFamily:
    _check_pair(family.n, i, j)
    masks = family.masks
    return SetFamily(family.n, frozenset(_shift_mask(m, i, j, masks) for m in masks))


def shift_pair(f: SetFamily, g: SetFamily, i: int, j: int) -> tuple[SetFamily, SetFamily]:
    return shift_family(f, i, j), shift_family(g, i, j)


def left_compress_passes(family: SetFamily) -> tuple[SetFamily, int]:
    """Sweep s_{i,j} (j increasing, then i increasing) until a pass changes nothing."""
    n = family.n
    passes = 0
    while True:
        passes += 1
        before = family
        for j in range(2, n + 1):
            for i in range(1, j):
                family = shift_family(family, i, j)
        if family == before:
            return family, passes


def left_compress(family: SetFamily) -> SetFamily:
    compressed, passes = left_compress_passes(family)
    logger.debug(f"left-compressed {len(family)} sets in {passes} passes")
    return compressed


def is_left_compressed(family: SetFamily) -> bool:
    masks = family.masks
    for mask in masks:
        for j in members_of(mask):
            for i in range(1, j):
                if _shift_mask(mask, i, j, masks) != mask:
                    return False
    return True


def _supersets(mask: int, n: int, r: int):
    size = mask.bit_count()
    if r < size:
        return
    free = [x for x in range(1, n + 1) if not mask >> (x - 1) & 1]
    for extra in combinations(free, r - size):
        yield mask | mask_of(extra)


def upset(generators: SetFamily, ranks: RankSet, n: int) -> SetFamily:
    """All sets with size in R containing some member of the generators."""
    too_big = [s for s in generators if len(s) > ranks.max]
    if too_big:
        raise RankError(f"{too_big[0]} is larger than max rank {ranks.max}")
    out: set[int] = set()
    for mask in generators.masks:
        for r in ranks:
            out.update(_supersets(mask, n, r))
    return SetFamily(n, frozenset(out))


def _check_family_ranks(family: SetFamily, ranks: RankSet) -> None:
    bad = [r for r in family.cardinalities if r not in ranks]
    if bad:
        raise RankError(f"family has members of size {bad} outside R={{{ranks}}}")


def is_monotone(family: SetFamily, ranks: RankSet) -> bool:
    _check_family_ranks(family, ranks)
    masks = family.masks
    for mask in masks:
        for r in ranks:
            if r <= mask.bit_count():
                continue
            if any(sup not in masks for sup in _supersets(mask, family.n, r)):
                return False
    return True


def minimal_sets(family: SetFamily) -> SetFamily:
    """Inclusion-minimal members."""
    masks = sorted(family.masks, key=int.bit_count)
    kept: list[int] = []
    for mask in masks:
        if not any(k & mask == k for k in kept):
            kept.append(mask)
    return SetFamily(family.n, frozenset(kept))
