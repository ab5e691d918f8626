import random

from xfam.compress import upset
from xfam.core import RankSet, SetFamily, layer_masks


def random_family(rng: random.Random, n: int, ranks, density: float = 0.4) -> SetFamily:
    masks = [m for k in ranks for m in layer_masks(n, k) if rng.random() < density]
    return SetFamily(n, frozenset(masks))


def random_upset(rng: random.Random, n: int, ranks: RankSet, seeds: int = 2) -> SetFamily:
    """Up-set of a few random sets no larger than the top rank."""
    gens = []
    for _ in range(seeds):
        size = rng.randint(1, ranks.max)
        gens.append(rng.sample(range(1, n + 1), size))
    return upset(SetFamily.of(n, gens), ranks, n)
