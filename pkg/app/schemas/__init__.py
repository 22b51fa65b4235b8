"""
Schemas for datasets, configuration and results.
Uses Pydantic models for data validation and serialization.
"""

from app.schemas.config import FlatFitConfig, InitSettings, ModelConfig, SamplerSettings
from app.schemas.dataset import DomainSpec, GroupedDataset, GroupRecord, StandardizationInfo
from app.schemas.results import (
    ChainTiming,
    GateReport,
    ParameterSummary,
    PosteriorSummary,
    RunManifest,
)
from app.schemas.scenario import BaselineSpec, GroundTruth, ScenarioSpec

__all__ = [
    "BaselineSpec",
    "ChainTiming",
    "DomainSpec",
    "FlatFitConfig",
    "GateReport",
    "GroundTruth",
    "GroupRecord",
    "GroupedDataset",
    "InitSettings",
    "ModelConfig",
    "ParameterSummary",
    "PosteriorSummary",
    "RunManifest",
    "SamplerSettings",
    "ScenarioSpec",
    "StandardizationInfo",
]
