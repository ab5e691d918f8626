"""
xfam: cross-intersecting set families.

Closed-form bounds for non-empty cross-intersecting tuples with arbitrary
rank sets, the compression and generating-family machinery behind them,
extremal constructions, and search oracles that check the bounds at small n.
"""

from .bounds import classic_bound, theorem_bound
from .core import ElementSet, Instance, RankSet, SetFamily
from .errors import XfamError
from .extremal import are_isomorphic, classify, construct_extremal
from .genset import FamilyTuple, GeneratingFamily
from .oracle import exhaustive_oracle, linitial_oracle, verify_sweep

__all__ = [
    "ElementSet",
    "FamilyTuple",
    "GeneratingFamily",
    "Instance",
    "RankSet",
    "SetFamily",
    "XfamError",
    "are_isomorphic",
    "classic_bound",
    "classify",
    "construct_extremal",
    "exhaustive_oracle",
    "linitial_oracle",
    "theorem_bound",
    "verify_sweep",
]
