"""
File storage for finished runs: draws, summaries, manifest and plot tables.
"""

import json
from pathlib import Path
from typing import Union

import numpy as np
import structlog

from app.core.errors import DataError
from app.crud.dataset import read_table, write_table
from app.schemas.results import PosteriorSummary, RunManifest
from app.services.pipeline.fitting import ModelFit
from app.services.pipeline.report import RunRecord
from app.services.pipeline.runner import BaselineRun, FrodoRun

logger = structlog.get_logger(__name__)

DRAWS_FILE = "draws.npz"
SUMMARY_FILE = "summary.csv"
MANIFEST_FILE = "manifest.json"
BETA_BAND_FILE = "beta_band.csv"
PREDICTIONS_FILE = "predictions.csv"

PathLike = Union[str, Path]


def density_band_file(group: int) -> str:
    return f"density_band_{group}.csv"


def write_draws(fit: ModelFit, path: Path) -> None:
    """Unconstrained C x S x D draws, decoded quantities and per-iteration sampler stats."""
    arrays = {"draws": fit.draws}
    arrays.update({f"decoded_{name}": values for name, values in fit.decoded.items()})
    for stat in ("logp", "accept_stat", "divergent", "tree_depth", "n_leapfrog"):
        arrays[stat] = np.stack([getattr(o, stat) for o in fit.outputs])
    arrays["inv_mass"] = np.stack([o.inv_mass for o in fit.outputs])
    arrays["step_size"] = np.array([o.step_size for o in fit.outputs])
    np.savez_compressed(path, **arrays)


def read_draws(directory: PathLike) -> dict:
    with np.load(Path(directory) / DRAWS_FILE) as data:
        return {name: data[name] for name in data.files}


def _write_common(fit: ModelFit, manifest: RunManifest, directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    write_draws(fit, directory / DRAWS_FILE)
    write_table(fit.summary.to_frame(), directory / SUMMARY_FILE)
    (directory / MANIFEST_FILE).write_text(manifest.model_dump_json(indent=2))


def write_frodo_run(run: FrodoRun, directory: PathLike) -> Path:
    """
    Write every output of a FRODO fit.

    Args:
        run: Finished fit
        directory: Run directory, created if needed

    Returns:
        The directory path
    """
    directory = Path(directory)
    _write_common(run.fit, run.manifest, directory)
    write_table(run.beta_band, directory / BETA_BAND_FILE)
    for group, table in run.density_bands.items():
        write_table(table, directory / density_band_file(group))
    write_table(run.predictions, directory / PREDICTIONS_FILE)
    logger.info("Run written", path=str(directory), kind=run.manifest.run_kind)
    return directory


def write_baseline_run(run: BaselineRun, directory: PathLike) -> Path:
    directory = Path(directory)
    _write_common(run.fit, run.manifest, directory)
    write_table(run.predictions, directory / PREDICTIONS_FILE)
    for name, table in run.extras.items():
        write_table(table, directory / f"{name}.csv")
    logger.info("Run written", path=str(directory), kind=run.manifest.run_kind)
    return directory


def read_manifest(directory: PathLike) -> RunManifest:
    path = Path(directory) / MANIFEST_FILE
    if not path.exists():
        raise DataError(f"{directory} is not a run directory (no {MANIFEST_FILE})")
    return RunManifest.model_validate(json.loads(path.read_text()))


def read_run(directory: PathLike) -> RunRecord:
    """Manifest and back-transformed summary of a run directory."""
    directory = Path(directory)
    manifest = read_manifest(directory)
    summary = PosteriorSummary.from_frame(
        read_table(directory / SUMMARY_FILE),
        back_transformed=True,
        standardization=manifest.standardization,
    )
    return RunRecord(name=directory.name, manifest=manifest, summary=summary)
