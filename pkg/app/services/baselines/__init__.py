"""
Scalar comparison models: naive regressions on group summaries and the
hierarchical latent-variable models.
"""

from app.services.baselines.bspline import bspline_basis, pspline_knots
from app.services.baselines.common import BaselineModel
from app.services.baselines.naive import NaiveRegression, derived_covariate
from app.services.baselines.hierarchical import GroupStatistics, HierarchicalRegression
from app.services.baselines.factory import build_baseline

__all__ = [
    "bspline_basis",
    "pspline_knots",
    "BaselineModel",
    "NaiveRegression",
    "derived_covariate",
    "GroupStatistics",
    "HierarchicalRegression",
    "build_baseline",
]
