"""
calibrate - simulate from a preset model, refit, report the coefficient error
"""

import argparse

from app.commands.options import add_response, resolve_preset
from app.controllers.experiment_controller import ExperimentController
from app.core.exceptions import UsageError


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "calibrate",
        help="Check that fitting recovers a preset's coefficients",
        description="Draw n rows from one decision model on a uniform random design and refit it.",
    )
    parser.add_argument("--preset", default="published", help="Risk-model preset (default: published)")
    add_response(parser, required=False)
    parser.add_argument("--n", type=int, default=64000, help="Simulated rows (default: 64000)")
    parser.add_argument("--seed", type=int, default=0, help="Simulation seed (default: 0)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> str:
    if args.n < 1:
        raise UsageError(f"--n must be positive, got {args.n}", n=args.n)
    model = resolve_preset(args.preset).for_response(args.response)
    error = ExperimentController.calibration_roundtrip(model, args.n, args.seed)
    return f"{args.response}: max |estimate - true| = {error:.6f} (n={args.n}, seed={args.seed})\n"
