"""
Run orchestration: standardization, binning, sampling, summaries and reports.
"""

from app.services.pipeline.standardize import (
    affine_map,
    back_transform,
    forward_transform,
    standardization_info,
    standardize,
)
from app.services.pipeline.binning import bin_covariates, bin_indices
from app.services.pipeline.fitting import ModelFit, sample_model
from app.services.pipeline.runner import (
    BaselineRun,
    FrodoRun,
    fit_frodo,
    resolve_config,
    run_baseline,
)
from app.services.pipeline.report import RunRecord, render_digest, sampler_table, sigma_y_table

__all__ = [
    "affine_map",
    "back_transform",
    "forward_transform",
    "standardization_info",
    "standardize",
    "bin_covariates",
    "bin_indices",
    "ModelFit",
    "sample_model",
    "BaselineRun",
    "FrodoRun",
    "fit_frodo",
    "resolve_config",
    "run_baseline",
    "RunRecord",
    "render_digest",
    "sampler_table",
    "sigma_y_table",
]
