"""
Generating families of monotone families, the cells D_R(E), boundary
generating families and the two family surgeries used to rule out interior
boundary layers.

A generating set of a monotone F is an inclusion-minimal E with <E>_R inside
F. For left-compressed monotone F the cells over the generating family
partition F.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional

from .compress import is_left_compressed, is_monotone
from .core import (
    ElementSet,
    Instance,
    RankSet,
    SetFamily,
    binom,
    family_respects,
    is_cross_intersecting,
    mask_of,
    members_of,
)
from .errors import (
    FamilyValidationError,
    NotLeftCompressedError,
    NotMonotoneError,
    ParameterError,
    PreconditionError,
    UndefinedExtentError,
)
from .models import DualityCount, DualityReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratingFamily:
    generators: SetFamily
    ranks: RankSet

    def __post_init__(self):
        masks = sorted(self.generators.masks, key=int.bit_count)
        for a, b in combinations(masks, 2):
            if a & b == a:
                raise FamilyValidationError(
                    f"generators {members_of(a)} and {members_of(b)} are nested"
                )
        if masks and masks[-1].bit_count() > self.ranks.max:
            raise FamilyValidationError(f"generator {members_of(masks[-1])} exceeds max rank")

    @classmethod
    def of(cls, n: int, ranks: RankSet, generators) -> "GeneratingFamily":
        return cls(SetFamily.of(n, generators), ranks)

    @property
    def n(self) -> int:
        return self.generators.n

    def __iter__(self) -> Iterator[ElementSet]:
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __contains__(self, item) -> bool:
        return item in self.generators

    def layer(self, u: int) -> SetFamily:
        return self.generators.layer(u)

    def __str__(self) -> str:
        return str(self.generators)


@dataclass(frozen=True)
class FamilyTuple:
    families: tuple[SetFamily, ...]
    ranks: tuple[RankSet, ...]

    def __post_init__(self):
        if len(self.families) != len(self.ranks):
            raise FamilyValidationError("one rank set per family is required")
        if len({f.n for f in self.families}) > 1:
            raise FamilyValidationError("families live in different universes")
        for j, (f, r) in enumerate(zip(self.families, self.ranks), start=1):
            if not family_respects(f, r):
                raise FamilyValidationError(
                    f"family {j} has sizes {f.cardinalities} outside R_{j}={{{r}}}"
                )

    @classmethod
    def of(cls, instance: Instance, families) -> "FamilyTuple":
        return cls(tuple(families), instance.ranks)

    @property
    def n(self) -> int:
        return self.families[0].n

    @property
    def m(self) -> int:
        return len(self.families)

    def __getitem__(self, j: int) -> SetFamily:
        return self.families[j]

    def __iter__(self) -> Iterator[SetFamily]:
        return iter(self.families)

    def sizes(self) -> list[int]:
        return [len(f) for f in self.families]

    def total(self) -> int:
        return sum(self.sizes())

    def is_cross_intersecting(self, t: int = 1) -> bool:
        return all(
            is_cross_intersecting(f, g, t) for f, g in combinations(self.families, 2)
        )

    def instance(self, t: int = 1) -> Instance:
        return Instance(n=self.n, t=t, ranks=self.ranks)


def _up_count(size: int, n: int, ranks: RankSet) -> int:
    return sum(binom(n - size, r - size) for r in ranks if r >= size)


def is_good(e: ElementSet, family: SetFamily, ranks: RankSet) -> bool:
    """<E>_R is contained in the family (members of F all have size in R)."""
    need = _up_count(len(e), family.n, ranks)
    have = sum(1 for mask in family.masks if mask & e.mask == e.mask)
    return have == need


def _require_monotone(family: SetFamily, ranks: RankSet) -> None:
    if not is_monotone(family, ranks):
        raise NotMonotoneError("family is not monotone over its rank set")


def is_generating(e: ElementSet, family: SetFamily, ranks: RankSet) -> bool:
    _require_monotone(family, ranks)
    if len(e) > ranks.max:
        return False
    if not is_good(e, family, ranks):
        return False
    return not any(is_good(e.without(x), family, ranks) for x in e.members)


def generating_family(family: SetFamily, ranks: RankSet) -> GeneratingFamily:
    _require_monotone(family, ranks)
    n = family.n
    good: dict[int, bool] = {}

    def check(mask: int) -> bool:
        if mask not in good:
            good[mask] = is_good(ElementSet(mask, n), family, ranks)
        return good[mask]

    minimal: set[int] = set()
    seen: set[int] = set()
    stack = list(family.masks)
    while stack:
        mask = stack.pop()
        if mask in seen:
            continue
        seen.add(mask)
        shrinkable = False
        for x in members_of(mask):
            child = mask & ~(1 << (x - 1))
            if check(child):
                shrinkable = True
                if child not in seen:
                    stack.append(child)
        if not shrinkable:
            minimal.add(mask)
    logger.debug(f"generating family: {len(minimal)} generators, {len(good)} candidates checked")
    return GeneratingFamily(SetFamily(n, frozenset(minimal)), ranks)


def extent(generating: GeneratingFamily) -> int:
    if not len(generating):
        raise UndefinedExtentError("the empty generating family has no extent")
    return max(e.max for e in generating)


def cell(e: ElementSet, ranks: RankSet, n: int, top: Optional[int] = None) -> SetFamily:
    """Sets A with |A| in R and A cap [top] = E; top defaults to max(E)."""
    if not len(e):
        raise ParameterError("cell of the empty set is undefined")
    top = e.max if top is None else top
    if e.max > top:
        raise ParameterError(f"{e} is not inside [{top}]")
    tail = range(top + 1, n + 1)
    out = set()
    for r in ranks:
        if r < len(e):
            continue
        for extra in combinations(tail, r - len(e)):
            out.add(e.mask | mask_of(extra))
    return SetFamily(n, frozenset(out))


def decompose(family: SetFamily, ranks: RankSet) -> list[tuple[ElementSet, SetFamily]]:
    _require_monotone(family, ranks)
    if not is_left_compressed(family):
        raise NotLeftCompressedError("family is not left-compressed")
    gens = generating_family(family, ranks)
    if gens.generators.masks == {0}:
        return [(ElementSet(0, family.n), family)]
    return [(e, cell(e, ranks, family.n)) for e in sorted(gens, key=lambda s: s.members)]


def boundary_family(generating: GeneratingFamily, l: int) -> GeneratingFamily:
    kept = frozenset(m for m in generating.generators.masks if m >> (l - 1) & 1)
    return GeneratingFamily(SetFamily(generating.n, kept), generating.ranks)


def check_boundary_duality(gi: GeneratingFamily, gj: GeneratingFamily, l: int) -> DualityReport:
    """Generators meeting exactly in {l} must cover [l] with |E| + |F| = l + 1."""
    bit = 1 << (l - 1)
    full = (1 << l) - 1
    violations = []
    for e in gi.generators.masks:
        for f in gj.generators.masks:
            if e & f != bit:
                continue
            if e | f != full or e.bit_count() + f.bit_count() != l + 1:
                violations.append((list(members_of(e)), list(members_of(f))))
    bi, bj = boundary_family(gi, l), boundary_family(gj, l)
    counts = [
        DualityCount(u=u, count_i=len(bi.layer(u)), count_j=len(bj.layer(l + 1 - u)))
        for u in range(1, l + 1)
    ]
    return DualityReport(holds=not violations, violations=violations, layer_counts=counts)


def check_generators_cross_intersect(g1: GeneratingFamily, g2: GeneratingFamily) -> bool:
    return all(a & b for a in g1.generators.masks for b in g2.generators.masks)


def check_shift_closure(generating: GeneratingFamily) -> bool:
    """Every s_{x,y}(E), x < y <= extent, contains some generator."""
    if not len(generating):
        return True
    top = extent(generating)
    masks = generating.generators.masks
    for e in generating:
        for y in range(2, top + 1):
            for x in range(1, y):
                image = e.shifted(x, y).mask
                if not any(g & image == g for g in masks):
                    return False
    return True


@dataclass(frozen=True)
class _Surgery:
    gens: list[GeneratingFamily]
    own: SetFamily
    partners: dict[int, SetFamily]


def _prepare(tuple_: FamilyTuple, gamma: int, u: int, l: int) -> _Surgery:
    if not 1 <= gamma <= tuple_.m:
        raise ParameterError(f"gamma={gamma} outside [1, {tuple_.m}]")
    if not 1 < u < l:
        raise ParameterError(f"u={u} must satisfy 1 < u < l={l}")
    for j, (f, r) in enumerate(zip(tuple_.families, tuple_.ranks), start=1):
        if not is_monotone(f, r):
            raise NotMonotoneError(f"family {j} is not monotone")
        if not is_left_compressed(f):
            raise NotLeftCompressedError(f"family {j} is not left-compressed")
    if not tuple_.is_cross_intersecting():
        raise PreconditionError("tuple is not cross-intersecting")
    gens = [generating_family(f, r) for f, r in zip(tuple_.families, tuple_.ranks)]
    extents = [extent(g) for g in gens if len(g)]
    if not extents or max(extents) != l:
        raise PreconditionError(f"l={l} is not the maximum extent {max(extents, default=None)}")
    own = boundary_family(gens[gamma - 1], l).layer(u)
    if not own:
        raise PreconditionError(f"boundary layer of size {u} of family {gamma} is empty")
    partners = {
        j: boundary_family(g, l).layer(l + 1 - u)
        for j, g in enumerate(gens, start=1)
        if j != gamma
    }
    return _Surgery(gens, own, partners)


def _cells(generators: SetFamily, ranks: RankSet, n: int, drop: Optional[int] = None) -> SetFamily:
    """Union of cells; with drop=l, cells of E minus l taken relative to [l-1]."""
    out: set[int] = set()
    for e in generators:
        if drop is None:
            out |= cell(e, ranks, n).masks
        else:
            out |= cell(e.without(drop), ranks, n, top=drop - 1).masks
    return SetFamily(n, frozenset(out))


def _finish(tuple_: FamilyTuple, families: list[SetFamily], label: str) -> FamilyTuple:
    out = FamilyTuple(tuple(families), tuple_.ranks)
    if not out.is_cross_intersecting():
        logger.warning(f"{label} output is not cross-intersecting; input was not maximal")
    return out


def tilde_transform(tuple_: FamilyTuple, gamma: int, u: int, l: int) -> FamilyTuple:
    """Grow family gamma by the cells of its boundary layer u with l removed,
    shrink every other family by the cells of its boundary layer l + 1 - u."""
    prep = _prepare(tuple_, gamma, u, l)
    n = tuple_.n
    families = []
    for j, (f, r) in enumerate(zip(tuple_.families, tuple_.ranks), start=1):
        if j == gamma:
            families.append(f.union(_cells(prep.own, r, n, drop=l)))
        else:
            families.append(f.difference(_cells(prep.partners[j], r, n)))
    return _finish(tuple_, families, "tilde transform")


def hat_transform(tuple_: FamilyTuple, gamma: int, u: int, l: int) -> FamilyTuple:
    """Mirror of tilde_transform: family gamma loses, the others gain."""
    prep = _prepare(tuple_, gamma, u, l)
    if ElementSet(1, tuple_.n) not in prep.gens[gamma - 1]:
        raise PreconditionError(f"{{1}} is not a generating set of family {gamma}")
    n = tuple_.n
    families = []
    for j, (f, r) in enumerate(zip(tuple_.families, tuple_.ranks), start=1):
        if j == gamma:
            families.append(f.difference(_cells(prep.own, r, n)))
        else:
            families.append(f.union(_cells(prep.partners[j], r, n, drop=l)))
    return _finish(tuple_, families, "hat transform")


def tilde_size_delta(tuple_: FamilyTuple, gamma: int, u: int, l: int) -> int:
    prep = _prepare(tuple_, gamma, u, l)
    n, v = tuple_.n, l + 1 - u
    gain = sum(len(prep.own) * binom(n - l, a - u + 1) for a in tuple_.ranks[gamma - 1])
    loss = sum(
        len(prep.partners[j]) * binom(n - l, b - v)
        for j in prep.partners
        for b in tuple_.ranks[j - 1]
    )
    return gain - loss


def hat_size_delta(tuple_: FamilyTuple, gamma: int, u: int, l: int) -> int:
    prep = _prepare(tuple_, gamma, u, l)
    n, v = tuple_.n, l + 1 - u
    gain = sum(
        len(prep.partners[j]) * binom(n - l, b - v + 1)
        for j in prep.partners
        for b in tuple_.ranks[j - 1]
    )
    loss = sum(len(prep.own) * binom(n - l, a - u) for a in tuple_.ranks[gamma - 1])
    return gain - loss
