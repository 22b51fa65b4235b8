"""
`simulate`: draw a dataset from a scenario and store it with its ground truth.
"""

import argparse
from pathlib import Path

import structlog

from app.core.config import settings
from app.crud.dataset import write_dataset, write_ground_truth
from app.models.enums import ScenarioId
from app.services.simulators import scenario_spec, simulate

logger = structlog.get_logger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("simulate", help="Simulate a dataset from a scenario")
    parser.add_argument("--scenario", required=True, choices=[s.value for s in ScenarioId])
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--out", type=Path, default=None, help="Dataset directory")
    parser.add_argument("--n-groups", type=int, default=None)
    parser.add_argument("--group-size", type=int, default=None)
    parser.add_argument(
        "--noise-free",
        action="store_true",
        help="Covariates at their group means and no response noise",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    spec = scenario_spec(
        ScenarioId(args.scenario),
        seed=args.seed,
        n_groups=args.n_groups,
        group_size=args.group_size,
        noise_free=args.noise_free,
    )
    out = args.out or settings.OUTPUT_DIR / "data" / f"{args.scenario}_seed{args.seed}"
    dataset, truth = simulate(spec)
    write_dataset(dataset, out)
    write_ground_truth(truth, out)
    logger.info("Simulation stored", path=str(out))
    print(out)
    return 0
