"""
Closed-form bounds for non-empty cross-intersecting families.

All arithmetic is exact; binom(x, y) is zero outside 0 <= y <= x, which is
also the empty-cell convention used when a rank is too small for a cell.
"""

import logging
from enum import Enum
from typing import Iterable, Optional, Sequence

from .core import Instance, Ordering, RankSet, binom
from .errors import ParameterError, RangeError
from .models import BoundReport, CrossTBound, FrontierCandidate, GammaCandidate

logger = logging.getLogger(__name__)


class BoundKind(str, Enum):
    EKR = "EKR"
    HM = "HM"
    BF = "BF"
    SFQ = "SFQ"
    P15 = "P15"
    UNIFORM_T = "UNIFORM_T"


def size_star(n: int, ranks: RankSet) -> int:
    return sum(binom(n - 1, a - 1) for a in ranks)


def size_m1(n: int, ranks: RankSet, k: int) -> int:
    """Sets with size in R meeting [k]."""
    return sum(binom(n, a) - binom(n - k, a) for a in ranks)


def size_m2(n: int, ranks: RankSet, k: int) -> int:
    """Sets with size in R containing [k]."""
    return sum(binom(n - k, b - k) for b in ranks)


def star_total(instance: Instance) -> int:
    return sum(size_star(instance.n, r) for r in instance.ranks)


def f_gamma(n: int, ranks: Sequence[RankSet], gamma: int, l: int) -> int:
    instance = Instance(n=n, ranks=tuple(ranks))
    k_min = instance.k_min(gamma)
    if not 1 <= l <= k_min:
        raise RangeError(f"l={l} outside [1, k_min={k_min}]")
    own = size_m1(n, ranks[gamma - 1], l)
    others = sum(size_m2(n, r, l) for j, r in enumerate(ranks, start=1) if j != gamma)
    return own + others


def f_gamma_table(instance: Instance, gamma: int) -> list[int]:
    """F_gamma(l) for l = 1 .. k_min(gamma)."""
    return [
        f_gamma(instance.n, instance.ranks, gamma, l)
        for l in range(1, instance.k_min(gamma) + 1)
    ]


def predicted_cases(instance: Instance, star: int, candidates: list[GammaCandidate]) -> list[str]:
    cases = []
    if all(star >= c.value for c in candidates):
        cases.append("i")
    # k_min = 1 makes the gamma tuple the star tuple itself
    if any(c.k_min > 1 and star <= c.value for c in candidates):
        cases.append("ii")
    if instance.n == instance.k1 + instance.k2 and instance.singleton_ranks:
        if instance.m == 2:
            cases.append("iii")
        elif len({r.ranks for r in instance.ranks}) == 1:
            cases.append("iv")
    return cases


def theorem_bound(n: int, ranks: Sequence[RankSet]) -> BoundReport:
    """Max of the star total and F_gamma(k_min(gamma)) over gamma.

    Exact for singleton rank sets. With mixed rank sets the value is always
    attained but can be beaten: n=5, ranks ({2,1},{3,2,1}) gives 16 while
    {{1,2}} with every set meeting {1,2} sums to 19.
    """
    instance = Instance(n=n, ranks=tuple(ranks))
    star = star_total(instance)
    candidates = [
        GammaCandidate(
            gamma=g,
            k_min=instance.k_min(g),
            value=f_gamma(n, instance.ranks, g, instance.k_min(g)),
        )
        for g in range(1, instance.m + 1)
    ]
    maximum = max([star] + [c.value for c in candidates])
    argmax = (["star"] if star == maximum else []) + [
        f"gamma={c.gamma}" for c in candidates if c.value == maximum
    ]
    if not instance.is_valid:
        logger.info(f"{instance}: n < k1 + k2, bound not asserted")
    return BoundReport(
        instance=str(instance),
        star_total=star,
        candidates=candidates,
        maximum=maximum,
        argmax=argmax,
        valid=instance.is_valid,
        predicted_cases=predicted_cases(instance, star, candidates),
    )


def instance_bound(instance: Instance) -> BoundReport:
    return theorem_bound(instance.n, instance.ranks)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParameterError(message)


def classic_bound(
    kind: BoundKind,
    n: int,
    k: Optional[int] = None,
    r: Optional[int] = None,
    s: Optional[int] = None,
    m: Optional[int] = None,
    ks: Optional[Iterable[int]] = None,
    t: int = 1,
) -> int:
    """Bounds from the earlier literature that the main theorem generalizes.

    EKR(n, k), HM(n, k), BF(n, r, s), SFQ(n, k, m), P15(n, ks) and the
    uniform cross-t conjecture UNIFORM_T(n, ks, t).
    """
    kind = BoundKind(kind)
    if kind in (BoundKind.EKR, BoundKind.HM, BoundKind.SFQ):
        _require(k is not None and k >= 1, f"{kind.value} needs k >= 1")
        _require(n >= 2 * k, f"{kind.value} needs n >= 2k, got n={n}, k={k}")
    if kind is BoundKind.EKR:
        return binom(n - 1, k - 1)
    if kind is BoundKind.HM:
        return 1 + binom(n, k) - binom(n - k, k)
    if kind is BoundKind.SFQ:
        _require(m is not None and m >= 2, "SFQ needs m >= 2")
        return max(m * binom(n - 1, k - 1), binom(n, k) - binom(n - k, k) + m - 1)
    if kind is BoundKind.BF:
        _require(r is not None and s is not None and 1 <= r <= s, "BF needs 1 <= r <= s")
        _require(n >= 1, "BF needs n >= 1")
        return 1 + sum(binom(n, i) - binom(n - r, i) for i in range(1, s + 1))

    ks = list(ks or [])
    _require(len(ks) >= 2, f"{kind.value} needs at least two ranks")
    _require(ks == sorted(ks, reverse=True), f"{kind.value} needs k_1 >= ... >= k_m, got {ks}")
    _require(ks[-1] >= 1, f"{kind.value} needs positive ranks")
    k1, km = ks[0], ks[-1]
    if kind is BoundKind.P15:
        _require(n >= ks[0] + ks[1], f"P15 needs n >= k1 + k2, got n={n}, ks={ks}")
        return max(
            sum(binom(n - 1, kj - 1) for kj in ks),
            binom(n, k1) - binom(n - km, k1) + sum(binom(n - km, ki - km) for ki in ks[1:]),
        )
    _require(t >= 1, "UNIFORM_T needs t >= 1")
    _require(n >= ks[0] + ks[1] - t + 1, f"UNIFORM_T needs n >= k1 + k2 - t + 1, got n={n}")
    return max(
        sum(binom(n - t, kj - t) for kj in ks),
        binom(n, k1)
        - sum(binom(km, i) * binom(n - km, k1 - i) for i in range(t))
        + sum(binom(n - km, ki - km) for ki in ks[1:]),
    )


def endpoint_check(n: int, ranks: Sequence[RankSet], gamma: int) -> bool:
    """F_gamma(l) never exceeds the larger of its two endpoint values."""
    instance = Instance(n=n, ranks=tuple(ranks))
    values = f_gamma_table(instance, gamma)
    return max(values) <= max(values[0], values[-1])


def interior_inequalities(instance: Instance, gamma: int, l: int) -> tuple[int, int, int, int]:
    """Both sides of the two inequalities an interior maximum at l would need:
    (lhs_down, rhs_down) from F(l) >= F(l+1) and (lhs_up, rhs_up) from F(l) >= F(l-1)."""
    n = instance.n
    own = instance.ranks[gamma - 1]
    others = [r for j, r in enumerate(instance.ranks, start=1) if j != gamma]
    lhs_down = sum(binom(n - l - 1, b - l) for r in others for b in r)
    rhs_down = sum(binom(n - l - 1, a - 1) for a in own)
    lhs_up = sum(binom(n - l, a - 1) for a in own)
    rhs_up = sum(binom(n - l, b - l + 1) for r in others for b in r)
    return lhs_down, rhs_down, lhs_up, rhs_up


def logconcavity_check(n: int, l: int, u: int, a: int, b: int) -> Ordering:
    """Compare C(n-l, b-(l+1-u)) C(n-l, a-u) with C(n-l, b-(l+1-u)+1) C(n-l, a-u+1)."""
    v = l + 1 - u
    left = binom(n - l, b - v) * binom(n - l, a - u)
    right = binom(n - l, b - v + 1) * binom(n - l, a - u + 1)
    if left < right:
        return Ordering.LT
    return Ordering.EQ if left == right else Ordering.GT


def cross_t_conjecture_bound(n: int, ranks: Sequence[RankSet], t: int) -> CrossTBound:
    _require(t >= 1, f"t must be >= 1, got {t}")
    instance = Instance(n=n, t=t, ranks=tuple(ranks))
    _require(
        n >= instance.k1 + instance.k2 - t + 1,
        f"needs n >= k1 + k2 - t + 1, got n={n}, k1={instance.k1}, k2={instance.k2}",
    )
    # sets smaller than t meet nothing in t elements, so those layers stay empty
    usable = []
    for j, rs in enumerate(instance.ranks, start=1):
        kept = [a for a in rs if a >= t]
        _require(bool(kept), f"family {j} has no rank >= t={t}: no non-empty cross-{t}-intersecting tuple")
        usable.append(RankSet(ranks=kept))
    if any(len(u) != len(r) for u, r in zip(usable, instance.ranks)):
        logger.info(f"{instance}: ranks below t={t} dropped")
    full = instance
    instance = Instance(n=n, t=t, ranks=tuple(usable))
    k3 = instance.k3
    frontier = []
    for r in range(0, k3 - t + 1):
        value = sum(
            binom(t + 2 * r, t + i) * binom(n - t - 2 * r, a - t - i)
            for rs in instance.ranks
            for a in rs
            for i in range(r, 2 * r + 1)
        )
        frontier.append(FrontierCandidate(r=r, value=value))
    gammas = []
    for g in range(1, instance.m + 1):
        k = instance.k_min(g)
        own = sum(
            binom(k, c) * binom(n - k, a - c)
            for a in instance.ranks[g - 1]
            for c in range(t, a + 1)
        )
        others = sum(
            binom(n - k, b - k)
            for j, rs in enumerate(instance.ranks, start=1)
            if j != g
            for b in rs
        )
        gammas.append(GammaCandidate(gamma=g, k_min=k, value=own + others))
    value = max([c.value for c in frontier] + [c.value for c in gammas])
    return CrossTBound(
        instance=str(full),
        value=value,
        frontier_candidates=frontier,
        gamma_candidates=gammas,
    )
