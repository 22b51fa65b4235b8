"""
`fit`: run FRODO on a dataset directory and write the run outputs.
"""

import argparse
from pathlib import Path

import structlog

from app.core.config import settings
from app.crud.config_file import read_fit_config
from app.crud.dataset import read_dataset, read_ground_truth
from app.crud.run import write_frodo_run
from app.services.diagnostics import enforce_gates
from app.services.pipeline import fit_frodo

logger = structlog.get_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("fit", help="Fit the functional regression model")
    parser.add_argument("--data", type=Path, required=True, help="Dataset directory")
    parser.add_argument("--config", type=Path, default=None, help="Flat TOML fit config")
    parser.add_argument("--out", type=Path, default=None, help="Run directory")
    parser.add_argument("--workers", type=int, default=None, help="Chain worker processes")
    parser.add_argument("--no-gate", action="store_true", help="Exit 0 even if gates fail")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    dataset = read_dataset(args.data)
    truth = read_ground_truth(args.data)
    overrides = read_fit_config(args.config) if args.config else None
    result = fit_frodo(dataset, truth=truth, overrides=overrides, workers=args.workers)
    out = args.out or settings.OUTPUT_DIR / f"{args.data.name}_frodo"
    write_frodo_run(result, out)
    print(out)
    enforce_gates(result.fit.gates, enabled=not args.no_gate)
    return 0
