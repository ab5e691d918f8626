"""
Independent maximization of the total size of non-empty cross-t-intersecting
family tuples.

Two searches:
  * linitial_oracle - t = 1 only. Every layer of every family may be taken
    L-initial, so a tuple is a profile of layer sizes and two layers are
    compatible iff the second size is within the frontier of the first.
  * exhaustive_oracle - any t, arbitrary families, micro scale only.

verify_sweep runs the L-initial oracle against the closed-form bound over a
grid of instances.
"""

import logging
import time
from bisect import bisect_left
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Optional, Sequence

import numpy as np

from . import config
from .bounds import instance_bound
from .core import Instance, RankSet, SetFamily, binom, l_initial, layer_masks
from .errors import (
    PreconditionError,
    RangeError,
    ScaleGuardError,
    UnsupportedDepthError,
    XfamError,
)
from .extremal import classify_cases
from .genset import FamilyTuple
from .models import OracleResult, SearchStats, SweepReport, SweepRow

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _membership(n: int, k: int) -> np.ndarray:
    count = binom(n, k)
    matrix = np.zeros((count, n), dtype=np.int32)
    for row, combo in enumerate(combinations(range(n), k)):
        matrix[row, list(combo)] = 1
    matrix.setflags(write=False)
    return matrix


@lru_cache(maxsize=None)
def frontier_table(n: int, a: int, b: int, t: int = 1) -> np.ndarray:
    """frontier[s] for s = 0 .. C(n, a): how many lex-first b-sets meet every
    one of the first s a-sets in at least t elements."""
    total_b = binom(n, b)
    meets = _membership(n, a) @ _membership(n, b).T
    bad = meets < t
    first_bad = np.where(bad.any(axis=1), bad.argmax(axis=1), total_b)
    table = np.concatenate(([total_b], np.minimum.accumulate(first_bad))).astype(np.int64)
    table.setflags(write=False)
    return table


def transversal_frontier(n: int, a: int, s: int, b: int, t: int = 1) -> int:
    if t < 1:
        raise RangeError(f"t={t} must be >= 1")
    total = binom(n, a)
    if not 0 <= s <= total:
        raise RangeError(f"s={s} outside [0, {total}]")
    return int(frontier_table(n, a, b, t)[s])


@dataclass(frozen=True)
class _Layer:
    family: int
    rank: int
    size: int


def _layers(instance: Instance) -> list[_Layer]:
    return [
        _Layer(j, a, binom(instance.n, a))
        for j, ranks in enumerate(instance.ranks)
        for a in ranks.descending()
    ]


def _representatives(instance: Instance, layers: list[_Layer], p: int) -> list[int]:
    """Largest size in each class of sizes that impose identical frontiers on
    the layers of later families."""
    here = layers[p]
    later = sorted({q.rank for q in layers if q.family > here.family})
    if not later:
        return [here.size]
    vectors = np.stack([frontier_table(instance.n, here.rank, b) for b in later], axis=1)
    changes = np.any(vectors[:-1] != vectors[1:], axis=1)
    return [int(s) for s in np.nonzero(changes)[0]] + [here.size]


def _profile_dicts(instance: Instance, layers: list[_Layer], sizes: Sequence[int]) -> list[dict[int, int]]:
    out: list[dict[int, int]] = [{} for _ in instance.ranks]
    for layer, s in zip(layers, sizes):
        out[layer.family][layer.rank] = int(s)
    return out


def profile_families(instance: Instance, profile: Sequence[dict[int, int]]) -> list[SetFamily]:
    families = []
    for sizes in profile:
        family = SetFamily.empty(instance.n)
        for a, s in sizes.items():
            family = family.union(l_initial(instance.n, a, s))
        families.append(family)
    return families


def profile_feasible(instance: Instance, profile: Sequence[dict[int, int]]) -> bool:
    """Every family non-empty and every pair of layers across families within frontier."""
    if any(sum(p.values()) == 0 for p in profile):
        return False
    for j, pj in enumerate(profile):
        for jj, pjj in enumerate(profile):
            if j == jj:
                continue
            for a, s in pj.items():
                if s == 0:
                    continue
                for b, ss in pjj.items():
                    if ss > frontier_table(instance.n, a, b, instance.t)[s]:
                        return False
    return True


def _witness(families: Iterable[SetFamily]) -> list[list[list[int]]]:
    return [f.to_lists() for f in families]


def linitial_oracle(instance: Instance, max_n: Optional[int] = None) -> OracleResult:
    if instance.t != 1:
        raise UnsupportedDepthError(
            "the L-initial reduction is only known for t = 1; use the exhaustive oracle"
        )
    max_n = config.MAX_N if max_n is None else max_n
    if instance.n > max_n:
        raise ScaleGuardError(f"n={instance.n} exceeds the L-initial guard {max_n}", instance.n)
    if max_n > config.DEFAULT_MAX_N:
        logger.warning(f"L-initial guard raised to n <= {max_n}: untested territory")

    start = time.perf_counter()
    layers = _layers(instance)
    count = len(layers)
    n = instance.n
    reps = [_representatives(instance, layers, p) for p in range(count)]
    family_start: dict[int, int] = {}
    family_end: dict[int, int] = {}
    for p, layer in enumerate(layers):
        family_start.setdefault(layer.family, p)
        family_end[layer.family] = p

    # Star profile is always feasible for t = 1; strict improvements only
    # from here keeps the first maximizer found the least one in search order.
    seed = [binom(n - 1, layer.rank - 1) for layer in layers]
    best_total = sum(seed) - 1
    best_sizes: list[int] = []
    nodes = 0

    def descend(p: int, sizes: list[int], ub: list[int], total: int) -> None:
        nonlocal best_total, best_sizes, nodes
        nodes += 1
        if total + sum(ub[p:]) <= best_total:
            return
        if p == count:
            best_total, best_sizes = total, list(sizes)
            return
        layer = layers[p]
        cap = ub[p]
        options = reps[p][: bisect_left(reps[p], cap)] + [cap]
        for s in dict.fromkeys(options):
            if s == 0 and p == family_end[layer.family]:
                if not any(sizes[family_start[layer.family]:p]):
                    continue
            child = list(ub)
            if s:
                for q in range(p + 1, count):
                    other = layers[q]
                    if other.family != layer.family:
                        limit = int(frontier_table(n, layer.rank, other.rank)[s])
                        if limit < child[q]:
                            child[q] = limit
                if any(
                    not any(child[q] for q in range(p + 1, count) if layers[q].family == f)
                    for f in {layers[q].family for q in range(p + 1, count)}
                ):
                    continue
            sizes.append(s)
            descend(p + 1, sizes, child, total + s)
            sizes.pop()

    descend(0, [], [layer.size for layer in layers], 0)
    elapsed = (time.perf_counter() - start) * 1000
    profile = _profile_dicts(instance, layers, best_sizes)
    families = profile_families(instance, profile)
    logger.info(f"L-initial oracle {instance}: max {best_total}, {nodes} nodes, {elapsed:.1f} ms")
    return OracleResult(
        instance=str(instance),
        method="L_INITIAL",
        maximum=best_total,
        witness_profile=profile,
        witness=_witness(families),
        stats=SearchStats(nodes=nodes, elapsed_ms=elapsed),
    )


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def exhaustive_oracle(instance: Instance, max_layer: Optional[int] = None) -> OracleResult:
    """Maximum over all non-empty cross-t-intersecting tuples, no structure assumed."""
    max_layer = config.MAX_LAYER if max_layer is None else max_layer
    n, t = instance.n, instance.t
    sizes = [binom(n, a) for r in instance.ranks for a in r]
    if max(sizes) > max_layer:
        total = sum(sizes)
        raise ScaleGuardError(
            f"layer of {max(sizes)} sets exceeds the exhaustive guard {max_layer}; "
            f"search space 2^{total}",
            2 ** total,
        )
    if max_layer > config.DEFAULT_MAX_LAYER:
        logger.warning(f"exhaustive guard raised to {max_layer} sets per layer: untested territory")

    start = time.perf_counter()
    items: list[tuple[int, int]] = []
    for j, ranks in enumerate(instance.ranks):
        for a in ranks.descending():
            items.extend((j, mask) for mask in layer_masks(n, a))
    family_items = [0] * instance.m
    for idx, (j, _) in enumerate(items):
        family_items[j] |= 1 << idx
    nbr = [0] * len(items)
    for x, y in combinations(range(len(items)), 2):
        (jx, mx), (jy, my) = items[x], items[y]
        if jx != jy and (mx & my).bit_count() < t:
            nbr[x] |= 1 << y
            nbr[y] |= 1 << x

    best_total = -1
    best_chosen = 0
    nodes = 0

    def matching(cand: int) -> int:
        matched = 0
        pairs = 0
        for v in _bits(cand):
            if matched >> v & 1:
                continue
            free = nbr[v] & cand & ~matched
            if free:
                w = free & -free
                matched |= w | (1 << v)
                pairs += 1
        return pairs

    def grow(cand: int, chosen: int, size: int) -> None:
        nonlocal best_total, best_chosen, nodes
        nodes += 1
        isolated = 0
        for v in _bits(cand):
            if not nbr[v] & cand:
                isolated |= 1 << v
        if isolated:
            chosen |= isolated
            size += isolated.bit_count()
            cand &= ~isolated
        if not cand:
            if size > best_total:
                best_total, best_chosen = size, chosen
            return
        if size + cand.bit_count() - matching(cand) <= best_total:
            return
        v = max(_bits(cand), key=lambda x: ((nbr[x] & cand).bit_count(), -x))
        grow(cand & ~nbr[v] & ~(1 << v), chosen | (1 << v), size + 1)
        grow(cand & ~(1 << v), chosen, size)

    def anchor(j: int, cand: int, chosen: int) -> None:
        """Fix the first chosen set of each family, which enforces non-emptiness."""
        nonlocal nodes
        nodes += 1
        if j == instance.m:
            grow(cand, chosen, chosen.bit_count())
            return
        for v in _bits(cand & family_items[j]):
            below = family_items[j] & ((1 << (v + 1)) - 1)
            rest = cand & ~below & ~nbr[v]
            if chosen.bit_count() + 1 + rest.bit_count() <= best_total:
                continue
            anchor(j + 1, rest, chosen | (1 << v))

    anchor(0, (1 << len(items)) - 1, 0)
    if best_total < 0:
        raise PreconditionError(f"{instance}: no non-empty cross-{t}-intersecting tuple exists")
    elapsed = (time.perf_counter() - start) * 1000
    families = [
        SetFamily(n, frozenset(items[v][1] for v in _bits(best_chosen & family_items[j])))
        for j in range(instance.m)
    ]
    profile = [
        {a: len(f.layer(a)) for a in ranks.descending()}
        for f, ranks in zip(families, instance.ranks)
    ]
    logger.info(f"exhaustive oracle {instance}: max {best_total}, {nodes} nodes, {elapsed:.1f} ms")
    return OracleResult(
        instance=str(instance),
        method="EXHAUSTIVE",
        maximum=best_total,
        witness_profile=profile,
        witness=_witness(families),
        stats=SearchStats(nodes=nodes, elapsed_ms=elapsed),
    )


def witness_tuple(instance: Instance, result: OracleResult) -> FamilyTuple:
    families = [SetFamily.of(instance.n, f) for f in result.witness]
    return FamilyTuple.of(instance, families)


def instance_grid(
    n_values: Iterable[int],
    m: int,
    max_k: int,
    singleton: bool = False,
    valid_only: bool = True,
) -> list[Instance]:
    """All instances with m families whose rank sets are non-empty subsets of
    {1..max_k}, up to reordering the families."""
    if singleton:
        shapes = [(k,) for k in range(1, max_k + 1)]
    else:
        shapes = [
            combo
            for size in range(1, max_k + 1)
            for combo in combinations(range(1, max_k + 1), size)
        ]
    grid = []
    for n in n_values:
        for choice in combinations_with_replacement(shapes, m):
            if max(max(c) for c in choice) > n:
                continue
            instance = Instance(n=n, ranks=tuple(RankSet(ranks=c) for c in choice))
            if valid_only and not instance.is_valid:
                continue
            grid.append(instance)
    return sorted(grid, key=Instance.key)


class SweepRunner:
    """Checks oracle maximum against the closed-form bound, one instance at a time."""

    def __init__(self, max_n: Optional[int] = None):
        self.max_n = max_n
        self.start_time = time.time()
        self.metrics = {
            "total_instances": 0,
            "equal": 0,
            "mismatches": 0,
            "skipped": 0,
            "errors": 0,
        }

    def process_instance(self, instance: Instance) -> SweepRow:
        start_time = time.time()
        self.metrics["total_instances"] += 1
        if instance.t != 1 or not instance.is_valid:
            self.metrics["skipped"] += 1
            reason = "t != 1" if instance.t != 1 else "n < k1 + k2"
            logger.info(f"skipping {instance}: {reason}")
            return SweepRow(instance=str(instance), skipped=reason)
        try:
            result = linitial_oracle(instance, max_n=self.max_n)
            bound = instance_bound(instance)
            equal = result.maximum == bound.maximum
            cases = classify_cases(witness_tuple(instance, result), instance) if equal else []
        except XfamError as e:
            self.metrics["errors"] += 1
            logger.error(f"error on {instance}: {e}")
            return SweepRow(instance=str(instance), skipped=f"error: {e}")

        if equal:
            self.metrics["equal"] += 1
        else:
            self.metrics["mismatches"] += 1
            logger.warning(f"mismatch on {instance}: oracle {result.maximum}, bound {bound.maximum}")
        return SweepRow(
            instance=str(instance),
            oracle_max=result.maximum,
            bound_max=bound.maximum,
            equal=equal,
            witness_profile=result.witness_profile,
            classified_case=(cases or ["none"]) if equal else [],
            processing_time_ms=int((time.time() - start_time) * 1000),
        )

    def get_metrics(self) -> dict:
        return {**self.metrics, "uptime_seconds": time.time() - self.start_time}


def _verify_one(args: tuple[Instance, Optional[int]]) -> SweepRow:
    instance, max_n = args
    return SweepRunner(max_n).process_instance(instance)


def verify_sweep(
    grid: Sequence[Instance],
    workers: Optional[int] = None,
    max_n: Optional[int] = None,
) -> SweepReport:
    workers = config.WORKERS if workers is None else workers
    start = time.time()
    ordered = sorted(grid, key=Instance.key)
    if workers > 1 and len(ordered) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_verify_one, [(i, max_n) for i in ordered]))
    else:
        runner = SweepRunner(max_n)
        rows = [runner.process_instance(i) for i in ordered]
    report = SweepReport(
        rows=rows,
        mismatches=sum(1 for r in rows if r.skipped is None and not r.equal),
        skipped=sum(1 for r in rows if r.skipped is not None and not r.skipped.startswith("error")),
        errors=sum(1 for r in rows if r.skipped is not None and r.skipped.startswith("error")),
        uptime_seconds=time.time() - start,
    )
    logger.info(f"sweep of {len(rows)} instances: {report.mismatches} mismatches")
    return report
