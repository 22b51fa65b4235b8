"""
Main application entry point.
Configures logging, dispatches the command and maps errors to exit codes.
"""

import sys
from typing import Optional, Sequence

import structlog

from app.api.cli import build_parser
from app.core.errors import FrodoError, GateFailure
from app.core.logging import configure_logging

logger = structlog.get_logger(__name__)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one CLI command.

    Returns:
        0 on success, 2 on gate failure, 3 on configuration errors,
        4 on data errors and 1 otherwise
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level, True if args.log_json else None)
    try:
        return args.handler(args)
    except GateFailure as exc:
        logger.error("Diagnostic gates failed", failures=exc.failures)
        for failure in exc.failures:
            print(f"gate failed: {failure}", file=sys.stderr)
        return exc.exit_code
    except FrodoError as exc:
        logger.error(exc.message, error=type(exc).__name__, **exc.details)
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
