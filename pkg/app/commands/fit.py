"""
fit - maximum-likelihood logistic regression on a dataset CSV
"""

import argparse

from app.commands.options import add_format, add_response, predictor_list
from app.controllers.dataset_io import import_dataset
from app.models.risk import PREDICTORS
from app.stats.formatting import coefficient_frame, model_note, odds_ratio_frame, render
from app.stats.goodness import goodness_of_fit
from app.stats.inference import odds_ratio_table, overall_model_test, wald_inference
from app.stats.irls import fit_logistic


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "fit",
        help="Fit a logistic regression",
        description="Fit one response on the dataset and print the regression table with its model note.",
    )
    parser.add_argument("--data", required=True, help="Dataset CSV")
    add_response(parser)
    parser.add_argument(
        "--predictors",
        default=None,
        help=f"Comma-separated terms (default: {','.join(PREDICTORS)})",
    )
    parser.add_argument("--odds-ratios", action="store_true", help="Also print odds ratios with profile CIs")
    add_format(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> str:
    predictors = predictor_list(args.predictors) or list(PREDICTORS)
    data = import_dataset(args.data).for_response(args.response)
    fit = fit_logistic(data, predictors)

    output = render(coefficient_frame(wald_inference(fit)), args.format)
    if args.format == "text":
        output += "\n".join(model_note(overall_model_test(fit), goodness_of_fit(fit))) + "\n"
    if args.odds_ratios:
        output += "\n" + render(odds_ratio_frame(odds_ratio_table(fit)), args.format)
    return output
