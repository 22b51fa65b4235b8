"""
File storage for grouped datasets and their ground truth.
Datasets live in a directory as two CSV files with a schema-version header.
"""

import json
from pathlib import Path
from typing import Optional, Union

import pandas as pd
import structlog

from app.core.errors import DataError
from app.schemas.dataset import GroupedDataset, GroupRecord
from app.schemas.scenario import GroundTruth

logger = structlog.get_logger(__name__)

SCHEMA_VERSION = 1
COVARIATES_FILE = "covariates.csv"
RESPONSES_FILE = "responses.csv"
GROUND_TRUTH_FILE = "ground_truth.json"
FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


def write_table(frame: pd.DataFrame, path: Path) -> None:
    """Write a CSV table preceded by the schema-version comment line."""
    with open(path, "w", newline="") as handle:
        handle.write(f"# schema_version: {SCHEMA_VERSION}\n")
        frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT)


def read_table(path: Path) -> pd.DataFrame:
    """
    Read a table written by write_table.

    Raises:
        DataError: missing file or unsupported schema version
    """
    if not path.exists():
        raise DataError(f"Missing data file {path}")
    with open(path) as handle:
        header = handle.readline().strip()
    if header != f"# schema_version: {SCHEMA_VERSION}":
        raise DataError(f"{path.name}: expected schema version {SCHEMA_VERSION}, got {header!r}")
    return pd.read_csv(path, comment="#", float_precision="round_trip")


def write_dataset(dataset: GroupedDataset, directory: PathLike) -> Path:
    """
    Write covariates.csv (group, x) and responses.csv (group, y[, z]).

    Args:
        dataset: Dataset to store
        directory: Target directory, created if needed

    Returns:
        The directory path
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    covariates = pd.DataFrame(
        {
            "group": [i for i, g in enumerate(dataset.groups) for _ in g.x],
            "x": [v for g in dataset.groups for v in g.x],
        }
    )
    responses = pd.DataFrame({"group": range(dataset.n_groups), "y": dataset.y})
    if dataset.has_scalar_covariate:
        responses["z"] = dataset.z
    write_table(covariates, directory / COVARIATES_FILE)
    write_table(responses, directory / RESPONSES_FILE)
    logger.info("Dataset written", path=str(directory), groups=dataset.n_groups)
    return directory


def read_dataset(directory: PathLike) -> GroupedDataset:
    """
    Read a dataset directory.

    Raises:
        DataError: malformed files, or groups without covariates
    """
    directory = Path(directory)
    covariates = read_table(directory / COVARIATES_FILE)
    responses = read_table(directory / RESPONSES_FILE)
    for frame, columns, name in (
        (covariates, {"group", "x"}, COVARIATES_FILE),
        (responses, {"group", "y"}, RESPONSES_FILE),
    ):
        if not columns <= set(frame.columns):
            raise DataError(f"{name} must have columns {sorted(columns)}")

    samples = {group: frame["x"].tolist() for group, frame in covariates.groupby("group")}
    has_z = "z" in responses.columns
    groups = []
    for row in responses.sort_values("group").itertuples(index=False):
        if row.group not in samples:
            raise DataError(f"Group {row.group} has a response but no covariate measurements")
        groups.append(
            GroupRecord(y=row.y, x=samples[row.group], z=float(row.z) if has_z else None)
        )
    dataset = GroupedDataset(groups=groups)
    logger.info("Dataset read", path=str(directory), groups=dataset.n_groups)
    return dataset


def write_ground_truth(truth: GroundTruth, directory: PathLike) -> Path:
    path = Path(directory) / GROUND_TRUTH_FILE
    path.write_text(truth.model_dump_json(indent=2))
    return path


def read_ground_truth(directory: PathLike) -> Optional[GroundTruth]:
    """The ground truth of a simulated dataset, or None for real data."""
    path = Path(directory) / GROUND_TRUTH_FILE
    if not path.exists():
        return None
    return GroundTruth.model_validate(json.loads(path.read_text()))
