"""
cv - repeated stratified k-fold cross-validation of a logistic model
"""

import argparse

import pandas as pd

from app.commands.options import add_format, add_response, predictor_list
from app.controllers.dataset_io import import_dataset
from app.core.config import settings
from app.models.risk import PREDICTORS
from app.stats.formatting import cv_lines, render
from app.stats.validation import repeated_kfold_cv


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "cv",
        help="Cross-validate a logistic model",
        description="Repeated stratified k-fold cross-validation with accuracy, exact CI, Cohen's kappa and NIR test.",
    )
    parser.add_argument("--data", required=True, help="Dataset CSV")
    add_response(parser)
    parser.add_argument("--predictors", default=None, help="Comma-separated terms (default: all five)")
    parser.add_argument("--k", type=int, default=settings.CV_FOLDS, help=f"Folds (default: {settings.CV_FOLDS})")
    parser.add_argument("--repeats", type=int, default=settings.CV_REPEATS, help=f"Repetitions (default: {settings.CV_REPEATS})")
    parser.add_argument("--seed", type=int, default=0, help="Fold seed (default: 0)")
    add_format(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> str:
    predictors = predictor_list(args.predictors) or list(PREDICTORS)
    data = import_dataset(args.data).for_response(args.response)
    report = repeated_kfold_cv(data, predictors, k=args.k, repeats=args.repeats, seed=args.seed)

    if args.format == "csv":
        low, high = report.accuracy_ci_95
        frame = pd.DataFrame(
            [
                {
                    "response": args.response,
                    "k": report.k,
                    "repeats": report.repeats,
                    "accuracy": report.accuracy,
                    "ci_lower": low,
                    "ci_upper": high,
                    "kappa": report.kappa,
                    "nir": report.nir,
                    "nir_p": report.nir_p,
                    "correct": report.correct,
                    "total": report.total,
                }
            ]
        )
        return render(frame, "csv")
    return "\n".join(cv_lines(report, args.response)) + "\n"
