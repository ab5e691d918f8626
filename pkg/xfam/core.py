"""
Ground types: element sets, rank sets, set families and problem instances.

Element sets are bitmasks over [n] (bit i-1 holds element i), so n is capped
at 62. Families are immutable; every operation here is a pure function.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations, islice
from math import comb
from typing import Iterable, Iterator, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .config import UNIVERSE_CAP
from .errors import InvalidComparisonError, ParameterError, RangeError

logger = logging.getLogger(__name__)


def members_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


def mask_of(members: Iterable[int]) -> int:
    mask = 0
    for x in members:
        mask |= 1 << (x - 1)
    return mask


def binom(x: int, y: int) -> int:
    """C(x, y), zero outside 0 <= y <= x."""
    if y < 0 or x < 0 or y > x:
        return 0
    return comb(x, y)


@dataclass(frozen=True, slots=True)
class ElementSet:
    mask: int
    n: int

    def __post_init__(self):
        if not 0 <= self.n <= UNIVERSE_CAP:
            raise ParameterError(f"universe size {self.n} outside [0, {UNIVERSE_CAP}]")
        if self.mask < 0 or self.mask >> self.n:
            raise ParameterError(f"set {members_of(self.mask)} not inside [{self.n}]")

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> "ElementSet":
        members = list(members)
        bad = [x for x in members if not 1 <= x <= n]
        if bad:
            raise ParameterError(f"elements {bad} outside [1, {n}]")
        return cls(mask_of(members), n)

    @property
    def members(self) -> tuple[int, ...]:
        return members_of(self.mask)

    @property
    def max(self) -> int:
        return self.mask.bit_length()

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, x: int) -> bool:
        return x >= 1 and bool(self.mask >> (x - 1) & 1)

    def without(self, x: int) -> "ElementSet":
        return ElementSet(self.mask & ~(1 << (x - 1)), self.n)

    def shifted(self, i: int, j: int) -> "ElementSet":
        """Replace j by i when j is a member and i is not; no family involved."""
        if j in self and i not in self:
            return ElementSet(self.mask ^ (1 << (j - 1)) ^ (1 << (i - 1)), self.n)
        return self

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"

    __repr__ = __str__


def as_set(n: int, value: Union[ElementSet, int, Iterable[int]]) -> ElementSet:
    if isinstance(value, ElementSet):
        if value.n != n:
            raise ParameterError(f"set {value} lives in [{value.n}], expected [{n}]")
        return value
    if isinstance(value, int):
        return ElementSet(value, n)
    return ElementSet.of(n, value)


class Ordering(Enum):
    LT = -1
    EQ = 0
    GT = 1


def lex_compare(a: ElementSet, b: ElementSet) -> Ordering:
    """Compare two sets of equal size under the lexicographic order."""
    if a.n != b.n or len(a) != len(b):
        raise InvalidComparisonError(f"cannot compare {a} and {b}: different universe or size")
    diff = a.mask ^ b.mask
    if not diff:
        return Ordering.EQ
    return Ordering.LT if a.mask & diff & -diff else Ordering.GT


def lex_rank(a: ElementSet) -> int:
    """1-based position of a among the |a|-subsets of [n] in lex order."""
    n, k = a.n, len(a)
    rank, prev = 1, 0
    for pos, c in enumerate(a.members, start=1):
        for x in range(prev + 1, c):
            rank += binom(n - x, k - pos)
        prev = c
    return rank


def lex_unrank(n: int, k: int, i: int) -> ElementSet:
    if not 1 <= k <= n:
        raise RangeError(f"k={k} outside [1, {n}]")
    total = binom(n, k)
    if not 1 <= i <= total:
        raise RangeError(f"index {i} outside [1, {total}] for {k}-subsets of [{n}]")
    r = i - 1
    members = []
    x = 1
    for pos in range(k):
        while True:
            block = binom(n - x, k - pos - 1)
            if r < block:
                members.append(x)
                x += 1
                break
            r -= block
            x += 1
    return ElementSet.of(n, members)


def layer_masks(n: int, k: int) -> Iterator[int]:
    """All k-subsets of [n] as masks, in lex order."""
    for combo in combinations(range(1, n + 1), k):
        yield mask_of(combo)


@dataclass(frozen=True)
class SetFamily:
    n: int
    masks: frozenset[int]

    def __post_init__(self):
        if not 0 <= self.n <= UNIVERSE_CAP:
            raise ParameterError(f"universe size {self.n} outside [0, {UNIVERSE_CAP}]")
        limit = 1 << self.n
        for mask in self.masks:
            if not 0 <= mask < limit:
                raise ParameterError(f"set {members_of(mask)} not inside [{self.n}]")

    @classmethod
    def of(cls, n: int, sets: Iterable[Union[ElementSet, int, Iterable[int]]] = ()) -> "SetFamily":
        return cls(n, frozenset(as_set(n, s).mask for s in sets))

    @classmethod
    def empty(cls, n: int) -> "SetFamily":
        return cls(n, frozenset())

    @cached_property
    def _layers(self) -> dict[int, tuple[int, ...]]:
        layers: dict[int, list[int]] = {}
        for mask in self.masks:
            layers.setdefault(mask.bit_count(), []).append(mask)
        return {r: tuple(sorted(ms, key=members_of)) for r, ms in sorted(layers.items())}

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[ElementSet]:
        for ms in self._layers.values():
            for mask in ms:
                yield ElementSet(mask, self.n)

    def __contains__(self, item) -> bool:
        if isinstance(item, ElementSet):
            return item.n == self.n and item.mask in self.masks
        return item in self.masks

    def __bool__(self) -> bool:
        return bool(self.masks)

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return tuple(self._layers)

    def layer_sizes(self) -> dict[int, int]:
        return {r: len(ms) for r, ms in self._layers.items()}

    def layer(self, r: int) -> "SetFamily":
        return SetFamily(self.n, frozenset(self._layers.get(r, ())))

    def union(self, other: "SetFamily") -> "SetFamily":
        _same_universe(self, other)
        return SetFamily(self.n, self.masks | other.masks)

    def difference(self, other: "SetFamily") -> "SetFamily":
        _same_universe(self, other)
        return SetFamily(self.n, self.masks - other.masks)

    def complements(self) -> "SetFamily":
        full = (1 << self.n) - 1
        return SetFamily(self.n, frozenset(full ^ mask for mask in self.masks))

    def relabel(self, perm: dict[int, int]) -> "SetFamily":
        """Image under an element permutation given as {x: image of x}."""
        return SetFamily.of(self.n, ([perm[x] for x in s.members] for s in self))

    def to_lists(self) -> list[list[int]]:
        return [list(s.members) for s in self]

    def __str__(self) -> str:
        return "{" + ",".join(str(s) for s in self) + "}"

    __repr__ = __str__


def _same_universe(f: SetFamily, g: SetFamily) -> None:
    if f.n != g.n:
        raise ParameterError(f"families live in different universes: [{f.n}] vs [{g.n}]")


def layer(family: SetFamily, r: int) -> SetFamily:
    return family.layer(r)


def l_initial(n: int, k: int, s: int) -> SetFamily:
    """The first s k-subsets of [n] in lex order."""
    total = binom(n, k)
    if not 0 <= s <= total:
        raise RangeError(f"size {s} outside [0, {total}] for {k}-subsets of [{n}]")
    return SetFamily(n, frozenset(islice(layer_masks(n, k), s)))


def full_layer(n: int, k: int) -> SetFamily:
    return SetFamily(n, frozenset(layer_masks(n, k)))


def all_sets(n: int, ranks: Iterable[int]) -> SetFamily:
    masks: set[int] = set()
    for k in ranks:
        masks.update(layer_masks(n, k))
    return SetFamily(n, frozenset(masks))


def is_cross_intersecting(f: SetFamily, g: SetFamily, t: int = 1) -> bool:
    _same_universe(f, g)
    for a in f.masks:
        for b in g.masks:
            if (a & b).bit_count() < t:
                return False
    return True


def is_intersecting(family: SetFamily, t: int = 1) -> bool:
    for a, b in combinations(family.masks, 2):
        if (a & b).bit_count() < t:
            return False
    return True


def is_cross_intersecting_tuple(families: Iterable[SetFamily], t: int = 1) -> bool:
    return all(is_cross_intersecting(f, g, t) for f, g in combinations(list(families), 2))


class RankSet(BaseModel):
    """A set of allowed cardinalities, kept in increasing order."""

    model_config = ConfigDict(frozen=True)

    ranks: tuple[int, ...] = Field(..., min_length=1)

    @field_validator("ranks", mode="before")
    @classmethod
    def _normalize(cls, value):
        values = [int(v) for v in value]
        if len(set(values)) != len(values):
            raise ValueError(f"duplicate ranks in {values}")
        if any(v < 1 for v in values):
            raise ValueError(f"ranks must be positive, got {values}")
        return tuple(sorted(values))

    @classmethod
    def of(cls, *ranks: int) -> "RankSet":
        return cls(ranks=ranks)

    @property
    def max(self) -> int:
        return self.ranks[-1]

    @property
    def min(self) -> int:
        return self.ranks[0]

    def __iter__(self):
        return iter(self.ranks)

    def __len__(self) -> int:
        return len(self.ranks)

    def __contains__(self, r: int) -> bool:
        return r in self.ranks

    def descending(self) -> tuple[int, ...]:
        return tuple(reversed(self.ranks))

    def __str__(self) -> str:
        return ",".join(map(str, self.descending()))


class Instance(BaseModel):
    """Universe size, intersection depth and the rank sets of m >= 2 families."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, le=UNIVERSE_CAP)
    t: int = Field(1, ge=1)
    ranks: tuple[RankSet, ...] = Field(..., min_length=2)

    @model_validator(mode="after")
    def _ranks_within_universe(self):
        for j, r in enumerate(self.ranks, start=1):
            if r.max > self.n:
                raise ValueError(f"family {j}: rank {r.max} exceeds n={self.n}")
        return self

    @classmethod
    def of(cls, n: int, *ranks: Iterable[int], t: int = 1) -> "Instance":
        return cls(n=n, t=t, ranks=tuple(RankSet(ranks=tuple(r)) for r in ranks))

    @property
    def m(self) -> int:
        return len(self.ranks)

    @property
    def top_ranks(self) -> list[int]:
        return sorted((r.max for r in self.ranks), reverse=True)

    @property
    def k1(self) -> int:
        return self.top_ranks[0]

    @property
    def k2(self) -> int:
        return self.top_ranks[1]

    @property
    def k3(self) -> int:
        return min(r.min for r in self.ranks)

    def k_min(self, gamma: int) -> int:
        """Smallest rank allowed in any family other than gamma (1-based)."""
        if not 1 <= gamma <= self.m:
            raise RangeError(f"gamma={gamma} outside [1, {self.m}]")
        return min(r.min for j, r in enumerate(self.ranks, start=1) if j != gamma)

    @property
    def is_valid(self) -> bool:
        return self.n >= self.k1 + self.k2

    @property
    def singleton_ranks(self) -> bool:
        return all(len(r) == 1 for r in self.ranks)

    def key(self) -> tuple:
        return (self.n, self.m, self.t, tuple(r.ranks for r in self.ranks))

    def __str__(self) -> str:
        ranks = ";".join(str(r) for r in self.ranks)
        suffix = f" t={self.t}" if self.t != 1 else ""
        return f"n={self.n} ranks={ranks}{suffix}"


def family_respects(family: SetFamily, ranks: RankSet) -> bool:
    return all(r in ranks for r in family.cardinalities)
