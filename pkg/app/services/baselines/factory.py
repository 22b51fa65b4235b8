"""
Builds the baseline model a BaselineSpec asks for from a (Y-standardized) dataset.
"""

import numpy as np
import structlog

from app.models.enums import BaselineKind
from app.schemas.dataset import GroupedDataset
from app.schemas.scenario import BaselineSpec
from app.services.baselines.common import BaselineModel
from app.services.baselines.hierarchical import HierarchicalRegression
from app.services.baselines.naive import NaiveRegression, derived_covariate

logger = structlog.get_logger(__name__)


def build_baseline(spec: BaselineSpec, dataset: GroupedDataset) -> BaselineModel:
    samples = [np.asarray(x, dtype=float) for x in dataset.covariates()]
    y = dataset.y
    z = dataset.z
    if spec.kind == BaselineKind.HIERARCHICAL:
        model: BaselineModel = HierarchicalRegression(spec.scenario, samples, y, z)
    else:
        model = NaiveRegression(spec.kind, derived_covariate(spec.kind, samples), y, z)
    logger.info(
        "Baseline model built",
        kind=spec.kind.value,
        scenario=spec.scenario.value,
        covariate=spec.derived_covariate,
        dimension=model.dimension,
    )
    return model
