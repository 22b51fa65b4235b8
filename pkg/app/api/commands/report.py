"""
`report`: compare finished runs in sigma_Y and sampler-behaviour tables.
"""

import argparse
from pathlib import Path

import structlog

from app.core.config import settings
from app.crud.dataset import write_table
from app.crud.run import read_run
from app.services.pipeline import render_digest, sampler_table, sigma_y_table

logger = structlog.get_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("report", help="Tabulate finished runs")
    parser.add_argument("--runs", type=Path, nargs="+", required=True, help="Run directories")
    parser.add_argument("--out", type=Path, default=None, help="Report directory")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    records = [read_run(path) for path in args.runs]
    out = args.out or settings.OUTPUT_DIR / "report"
    out.mkdir(parents=True, exist_ok=True)
    write_table(sigma_y_table(records), out / "sigma_y_table.csv")
    write_table(sampler_table(records), out / "sampler_table.csv")
    digest = render_digest(records)
    (out / "report.txt").write_text(digest)
    logger.info("Report written", path=str(out), runs=len(records))
    print(digest, end="")
    return 0
