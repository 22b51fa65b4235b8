"""
Schema definitions for posterior summaries, diagnostic gates and run manifests.
"""

from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

import pandas as pd
from pydantic import BaseModel, Field

from app.models.enums import ScaleKind
from app.schemas.dataset import StandardizationInfo


class ParameterSummary(BaseModel):
    name: str
    mean: float
    sd: float
    q2_5: float
    q97_5: float
    ess: float
    ess_raw: float
    rhat: float
    ess_tail: Optional[float] = None
    kind: ScaleKind = ScaleKind.NONE


class PosteriorSummary(BaseModel):
    """Per-parameter posterior summary, on the standardized or original scale."""

    parameters: List[ParameterSummary]
    back_transformed: bool = False
    standardization: Optional[StandardizationInfo] = None

    def get(self, name: str) -> ParameterSummary:
        for p in self.parameters:
            if p.name == name:
                return p
        raise KeyError(name)

    def names(self) -> List[str]:
        return [p.name for p in self.parameters]

    def block(self, base: str) -> List[ParameterSummary]:
        """All components of a vector parameter, e.g. block("beta") -> beta[0..K-1]."""
        return [p for p in self.parameters if p.name == base or p.name.startswith(base + "[")]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([p.model_dump(mode="json") for p in self.parameters])

    @classmethod
    def from_frame(
        cls,
        frame: pd.DataFrame,
        back_transformed: bool = False,
        standardization: Optional[StandardizationInfo] = None,
    ) -> "PosteriorSummary":
        rows = frame.to_dict(orient="records")
        return cls(
            parameters=[ParameterSummary(**row) for row in rows],
            back_transformed=back_transformed,
            standardization=standardization,
        )


class GateReport(BaseModel):
    """Outcome of the convergence gates for one run."""

    max_rhat: float
    min_ess: float
    divergences: int
    rhat_threshold: float
    ess_threshold: float
    passed: bool
    failures: List[str] = Field(default_factory=list)
    undefined: List[str] = Field(default_factory=list)


class ChainTiming(BaseModel):
    chain: int
    warmup_seconds: float
    sampling_seconds: float
    step_size: float
    divergences: int
    mean_tree_depth: float


class RunManifest(BaseModel):
    """Everything needed to identify and audit a run."""

    run_kind: str
    scenario: Optional[str] = None
    config: Dict[str, Any]
    seeds: List[int]
    timings: List[ChainTiming]
    gates: GateReport
    standardization: StandardizationInfo
    software_version: str
    notes: Dict[str, Any] = Field(default_factory=dict)
    created_at: str = Field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )
