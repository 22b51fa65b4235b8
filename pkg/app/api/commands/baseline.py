"""
`baseline`: fit a naive or hierarchical scalar model to a dataset directory.
"""

import argparse
from pathlib import Path

import structlog

from app.core.config import settings
from app.core.errors import ConfigurationError
from app.crud.config_file import read_fit_config
from app.crud.dataset import read_dataset, read_ground_truth
from app.crud.run import write_baseline_run
from app.models.enums import BaselineKind, ScenarioId
from app.schemas.config import SamplerSettings
from app.schemas.scenario import BaselineSpec
from app.services.diagnostics import enforce_gates
from app.services.pipeline import run_baseline
from app.services.simulators import DEFAULTS

logger = structlog.get_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("baseline", help="Fit a scalar comparison model")
    parser.add_argument("--kind", required=True, choices=[k.value for k in BaselineKind])
    parser.add_argument("--data", type=Path, required=True, help="Dataset directory")
    parser.add_argument(
        "--scenario",
        choices=[s.value for s in ScenarioId],
        default=None,
        help="Scenario family; read from the ground truth when omitted",
    )
    parser.add_argument("--config", type=Path, default=None, help="Sampler keys of a fit config")
    parser.add_argument("--out", type=Path, default=None, help="Run directory")
    parser.add_argument("--workers", type=int, default=None, help="Chain worker processes")
    parser.add_argument("--no-gate", action="store_true", help="Exit 0 even if gates fail")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    dataset = read_dataset(args.data)
    truth = read_ground_truth(args.data)
    if args.scenario is not None:
        scenario = ScenarioId(args.scenario)
    elif truth is not None:
        scenario = truth.scenario
    else:
        raise ConfigurationError("--scenario is required for data without ground truth")
    spec = BaselineSpec(kind=BaselineKind(args.kind), scenario=scenario)

    sampler = SamplerSettings(target_accept=DEFAULTS[scenario].target_accept)
    if args.config:
        overrides = read_fit_config(args.config).sampler_overrides()
        sampler = SamplerSettings(**{**sampler.model_dump(), **overrides})
    result = run_baseline(dataset, spec, sampler=sampler, workers=args.workers)
    out = args.out or settings.OUTPUT_DIR / f"{args.data.name}_{args.kind}"
    write_baseline_run(result, out)
    print(out)
    enforce_gates(result.fit.gates, enabled=not args.no_gate)
    return 0
