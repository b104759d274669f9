"""
simulate - run the factorial design through the protocol and write the dataset
"""

import argparse

import pandas as pd
from loguru import logger

from app.commands.options import add_format, resolve_preset
from app.controllers.dataset_io import export_dataset
from app.controllers.experiment_controller import ExperimentController
from app.core.exceptions import LabError, UsageError
from app.models.experiment import DesignSpec, ExecutionMode
from app.models.risk import RESPONSES
from app.services.fixtures import recorded_fingerprint, recorded_names
from app.stats.formatting import render


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "simulate",
        help="Simulate the manipulation experiment",
        description="Execute every design cell through the interceptor and the 3DS flow and write the coded dataset.",
    )
    parser.add_argument("--preset", default="published", help="Risk-model preset (default: published)")
    parser.add_argument("--seed", type=int, default=0, help="Experiment seed (default: 0)")
    parser.add_argument("--replicates", type=int, default=1, help="Transactions per design cell (default: 1)")
    parser.add_argument(
        "--mode",
        choices=[mode.value for mode in ExecutionMode],
        default=ExecutionMode.STATELESS.value,
        help="stateless (cards never stay blocked) or stateful (default: stateless)",
    )
    parser.add_argument("--fingerprint", choices=recorded_names(), default=None, help="Recorded fingerprint to inject")
    parser.add_argument("--workers", type=int, default=None, help="Worker threads in stateless mode")
    parser.add_argument("--out", required=True, help="Output CSV path")
    add_format(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> str:
    if args.replicates < 1:
        raise UsageError(f"--replicates must be >= 1, got {args.replicates}", replicates=args.replicates)
    models = resolve_preset(args.preset)
    design = ExperimentController.enumerate_design(DesignSpec(replicates=args.replicates))
    data = ExperimentController.execute(
        design,
        models,
        seed=args.seed,
        mode=ExecutionMode(args.mode),
        replacement=recorded_fingerprint(args.fingerprint),
        workers=args.workers,
    )

    try:
        export_dataset(data, args.out)
    except OSError as e:
        logger.error(f"❌ Could not write {args.out}: {e}")
        raise LabError(f"cannot write dataset: {e}", path=args.out) from e

    summary = {"preset": models.name, "seed": args.seed, "mode": args.mode, "rows": data.n, "skipped": data.skipped}
    for response in RESPONSES:
        summary[response] = int(data.for_response(response).response().sum()) if data.n else 0
    summary["digest"] = data.digest()

    frame = pd.DataFrame([{"field": key, "value": value} for key, value in summary.items()])
    if args.format == "csv":
        return render(frame, "csv")
    return "".join(f"{key}: {value}\n" for key, value in summary.items())
