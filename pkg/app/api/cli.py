"""
Command-line router.
Builds the argument parser and registers every command module.
"""

import argparse

from app.api.commands import baseline, fit, report, simulate
from app.core.config import settings


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frodo",
        description="Bayesian scalar-on-function regression with random densities",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")
    parser.add_argument("--log-level", default=None, help="Overrides LOG_LEVEL")
    parser.add_argument("--log-json", action="store_true", help="JSON log lines")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (simulate, fit, baseline, report):
        command.register(subparsers)
    return parser
