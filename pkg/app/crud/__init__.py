"""
Persistence layer: datasets, fit configurations and run outputs on disk.
"""

from app.crud.dataset import (
    read_dataset,
    read_ground_truth,
    read_table,
    write_dataset,
    write_ground_truth,
    write_table,
)
from app.crud.config_file import read_fit_config, write_fit_config
from app.crud.run import (
    read_draws,
    read_manifest,
    read_run,
    write_baseline_run,
    write_frodo_run,
)

__all__ = [
    "read_dataset",
    "read_ground_truth",
    "read_table",
    "write_dataset",
    "write_ground_truth",
    "write_table",
    "read_fit_config",
    "write_fit_config",
    "read_draws",
    "read_manifest",
    "read_run",
    "write_baseline_run",
    "write_frodo_run",
]
