"""
Report models. Every report serializes with model_dump_json().
"""

from typing import Literal, Optional

from pydantic import BaseModel, Field, computed_field, model_validator


class GammaCandidate(BaseModel):
    gamma: int = Field(..., ge=1)
    k_min: int = Field(..., ge=1)
    value: int


class BoundReport(BaseModel):
    instance: str
    star_total: int
    candidates: list[GammaCandidate]
    maximum: int
    argmax: list[str] = Field(..., min_length=1)
    valid: bool
    predicted_cases: list[str]

    @model_validator(mode="after")
    def _maximum_is_max(self):
        best = max([self.star_total] + [c.value for c in self.candidates])
        if best != self.maximum:
            raise ValueError(f"maximum {self.maximum} differs from best candidate {best}")
        return self

    @property
    def argmax_gammas(self) -> list[int]:
        return [int(a.split("=")[1]) for a in self.argmax if a.startswith("gamma=")]


class FrontierCandidate(BaseModel):
    r: int = Field(..., ge=0)
    value: int


class CrossTBound(BaseModel):
    instance: str
    value: int
    frontier_candidates: list[FrontierCandidate]
    gamma_candidates: list[GammaCandidate]


class SearchStats(BaseModel):
    nodes: int = 0
    elapsed_ms: float = 0.0


class OracleResult(BaseModel):
    instance: str
    method: Literal["L_INITIAL", "EXHAUSTIVE"]
    maximum: int
    witness_profile: list[dict[int, int]]
    witness: list[list[list[int]]]
    stats: SearchStats

    @model_validator(mode="after")
    def _witness_adds_up(self):
        if sum(len(f) for f in self.witness) != self.maximum:
            raise ValueError("witness size differs from maximum")
        if any(not f for f in self.witness):
            raise ValueError("witness has an empty family")
        return self


class Classification(BaseModel):
    cases: list[str]
    gamma: Optional[int] = None
    witness_permutation: Optional[dict[int, int]] = None

    @computed_field
    @property
    def case(self) -> str:
        return self.cases[0] if self.cases else "none"


class DualityCount(BaseModel):
    u: int
    count_i: int
    count_j: int


class DualityReport(BaseModel):
    holds: bool
    violations: list[tuple[list[int], list[int]]] = Field(default_factory=list)
    layer_counts: list[DualityCount] = Field(default_factory=list)

    def __bool__(self) -> bool:
        return self.holds


class SweepRow(BaseModel):
    instance: str
    oracle_max: Optional[int] = None
    bound_max: Optional[int] = None
    equal: bool = False
    witness_profile: list[dict[int, int]] = Field(default_factory=list)
    classified_case: list[str] = Field(default_factory=list)
    skipped: Optional[str] = None
    processing_time_ms: int = 0


class SweepReport(BaseModel):
    rows: list[SweepRow] = Field(default_factory=list)
    mismatches: int = 0
    skipped: int = 0
    errors: int = 0
    uptime_seconds: float = 0.0
