"""
curves - probability curves, overlays and surfaces from a risk-model preset
"""

import argparse

import pandas as pd

from app.commands.options import add_format, add_response, fixed_setting, number_list, resolve_preset
from app.core.exceptions import UsageError
from app.models.risk import PREDICTORS
from app.services.risk_engine import scenario_curve, scenario_overlay, scenario_surface
from app.stats.formatting import render


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "curves",
        help="Emit scenario probability curves",
        description=(
            "Evaluate one decision model along a predictor grid with the other predictors fixed "
            "(unnamed predictors sit at 0). Output is figure data, not an image."
        ),
    )
    parser.add_argument("--preset", default="published", help="Risk-model preset (default: published)")
    add_response(parser, required=False)
    parser.add_argument("--vary", required=True, choices=list(PREDICTORS), help="Predictor on the x axis")
    parser.add_argument("--by", default="none", help="Overlay predictor, one curve per level (default: none)")
    parser.add_argument("--surface", default=None, choices=list(PREDICTORS), help="Second predictor for a 2-D surface")
    parser.add_argument("--fixed", default=None, help="Held values as name=value,...")
    parser.add_argument("--grid", default=None, help="Comma-separated x values (default: 0,1 or 1..4 for card)")
    add_format(parser, default="csv")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> str:
    model = resolve_preset(args.preset).for_response(args.response)
    fixed = fixed_setting(args.fixed)
    grid = number_list(args.grid)
    by = None if args.by == "none" else args.by
    if by is not None and by not in PREDICTORS:
        raise UsageError(f"unknown predictor '{by}'", predictor=by, allowed=list(PREDICTORS))
    if by is not None and args.surface is not None:
        raise UsageError("--by and --surface are mutually exclusive")

    if args.surface is not None:
        rows = scenario_surface(model, args.vary, args.surface, fixed, x_grid=grid)
        frame = pd.DataFrame(rows, columns=["x", "y", "probability"])
    elif by is not None:
        rows = scenario_overlay(model, args.vary, by, fixed, grid)
        frame = pd.DataFrame(rows, columns=["x", "probability", "group"])
    else:
        rows = scenario_curve(model, args.vary, fixed, grid)
        frame = pd.DataFrame(rows, columns=["x", "probability"])
    return render(frame, args.format)
