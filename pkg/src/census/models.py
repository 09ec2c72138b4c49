"""
Pydantic models for census records and summaries.
"""

from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, model_validator


class Verdict(str, Enum):
    EQUAL = "EQUAL"
    PROPER_SUPERGROUP = "PROPER_SUPERGROUP"


class CensusMode(str, Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"


class CensusRecord(BaseModel):
    """One classified connection set"""
    group: str
    set_index: Optional[int] = None
    seed: Optional[int] = None
    draw: Optional[int] = None
    set_hex: str
    directed: bool
    aut_order: int
    b_order: int
    verdict: Verdict
    elapsed: float  # seconds

    @model_validator(mode="after")
    def _verdict_matches_orders(self) -> "CensusRecord":
        expected = Verdict.EQUAL if self.aut_order == self.b_order else Verdict.PROPER_SUPERGROUP
        if self.verdict != expected:
            raise ValueError(
                f"verdict {self.verdict.value} inconsistent with aut_order={self.aut_order}, "
                f"b_order={self.b_order}"
            )
        return self

    def fingerprint(self) -> Dict[str, Any]:
        """Everything except timing; equal across replays of the same run."""
        return self.model_dump(exclude={"elapsed"})


class EpsilonBound(BaseModel):
    """Exceptional-set bound on the log2 scale"""
    group: str
    n: int
    m: int
    kind: str
    exponent: float      # log2 of epsilon
    total_log2: float    # log2 of the number of inverse-closed sets
    bound_log2: float    # total_log2 + exponent
    vacuous: bool        # bound >= total


class CensusSummary(BaseModel):
    """Model for the outcome of a census run"""
    group: str
    n: int
    m: int
    mode: CensusMode
    directed: bool
    total: int
    exceptional: int
    proportion: float
    confidence: float = 0.95
    ci_halfwidth: float = 0.0
    ci_low: float = 0.0
    ci_high: float = 0.0
    seed: Optional[int] = None
    epsilon: Optional[EpsilonBound] = None
    bound_satisfied: Optional[bool] = None

    @model_validator(mode="after")
    def _counts_consistent(self) -> "CensusSummary":
        if not 0 <= self.exceptional <= self.total:
            raise ValueError(f"exceptional count {self.exceptional} outside [0, {self.total}]")
        if self.total and abs(self.proportion - self.exceptional / self.total) > 1e-12:
            raise ValueError("proportion must equal exceptional / total")
        return self

    def csv_row(self) -> Dict[str, Any]:
        return {
            "group": self.group,
            "n": self.n,
            "m": self.m,
            "total": self.total,
            "exceptional": self.exceptional,
            "proportion": self.proportion,
            "ci_halfwidth": self.ci_halfwidth,
            "bound_log2": self.epsilon.bound_log2 if self.epsilon else None,
            "vacuous": self.epsilon.vacuous if self.epsilon else None,
            "satisfied": self.bound_satisfied,
        }
