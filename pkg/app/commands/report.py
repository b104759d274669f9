"""
report - the full replication report for all three responses
"""

import argparse
from pathlib import Path
from typing import Dict, List

from loguru import logger

from app.commands.options import add_format, predictor_list, resolve_preset
from app.controllers.dataset_io import import_dataset
from app.controllers.experiment_controller import ExperimentController
from app.core.config import settings
from app.core.exceptions import LabError
from app.models.experiment import DesignSpec, ReplicationReport, ResponseSection, SelectedModel
from app.models.reports import CoefficientRow, HosmerLemeshowResult
from app.models.risk import display_name
from app.services.risk_engine import PUBLISHED_TABLES
from app.stats.formatting import (
    coefficient_frame,
    cv_lines,
    diagnostics_lines,
    format_decimal,
    format_p,
    ledger_frame,
    model_note,
    odds_ratio_frame,
    render,
)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "report",
        help="Replicate every analysis table",
        description=(
            "Fit, test, cross-validate, diagnose and select models for challenged, declined and blocked. "
            "Reads --data, or simulates the design from --preset when no data is given."
        ),
    )
    parser.add_argument("--data", default=None, help="Dataset CSV (default: simulate)")
    parser.add_argument("--preset", default="published", help="Preset used when simulating (default: published)")
    parser.add_argument("--replicates", type=int, default=1, help="Replicates per cell when simulating")
    parser.add_argument("--seed", type=int, default=0, help="Simulation and fold seed (default: 0)")
    parser.add_argument("--predictors", default=None, help="Comma-separated terms (default: all five)")
    parser.add_argument("--k", type=int, default=settings.CV_FOLDS, help="Cross-validation folds")
    parser.add_argument("--repeats", type=int, default=settings.CV_REPEATS, help="Cross-validation repetitions")
    parser.add_argument("--compare", action="store_true", help="Add the published estimates as a column")
    parser.add_argument("--summary", default=None, help="Also write the full report as JSON to this path")
    add_format(parser)
    parser.set_defaults(handler=run)


def _coefficients(rows: List[CoefficientRow], published: Dict[str, Dict[str, float]], fmt: str, compare: bool) -> str:
    frame = coefficient_frame(rows)
    if compare:
        frame["Published"] = [
            f"{published[row.term]['estimate']:.3f}" if row.term in published else "" for row in rows
        ]
    return render(frame, fmt)


def _hosmer_lemeshow_line(hl: HosmerLemeshowResult) -> str:
    return (
        f"Hosmer-Lemeshow C χ²({hl.df}) = {hl.chi2:.2f}, {format_p(hl.p, with_stars=False)}"
        + (f" ({hl.groups_used} of {hl.groups_requested} groups)" if hl.collapsed else "")
    )


def _selected_text(response: str, selected: SelectedModel, fmt: str, compare: bool) -> List[str]:
    names = ", ".join(display_name(name) for name in selected.predictors)
    lines = ["", f"Selected model: {names}"]
    lines.append(_coefficients(selected.coefficients, PUBLISHED_TABLES.get(response, {}), fmt, compare).rstrip("\n"))
    lines += model_note(selected.overall, selected.gof)
    lines.append(_hosmer_lemeshow_line(selected.hosmer_lemeshow))
    lines.append(f"AICc = {selected.aicc:.2f}, accuracy = {selected.gof.accuracy:.1%}")
    lines += ["Odds ratios (profile-likelihood CI)", render(odds_ratio_frame(selected.odds_ratios), fmt).rstrip("\n")]
    return lines


def _section_text(section: ResponseSection, fmt: str, compare: bool) -> List[str]:
    title = f"Logistic Regression: {section.response}"
    if section.error:
        return [title, f"not estimable: {section.error}", ""]

    # the published table for a full fit that selection later reduced carries a _full suffix
    published = PUBLISHED_TABLES.get(f"{section.response}_full", PUBLISHED_TABLES.get(section.response, {}))
    lines = [title, _coefficients(section.coefficients, published, fmt, compare).rstrip("\n")]
    lines += model_note(section.overall, section.gof)
    lines.append(_hosmer_lemeshow_line(section.hosmer_lemeshow))
    lines.append(
        f"AICc = {section.aicc:.2f}, McFadden R² = {format_decimal(section.gof.r2_mcfadden)}, "
        f"accuracy = {section.gof.accuracy:.1%}, AUC = {format_decimal(section.gof.auc, 3)}"
    )
    lines += ["", "Odds ratios (profile-likelihood CI)", render(odds_ratio_frame(section.odds_ratios), fmt).rstrip("\n")]
    lines += [""] + cv_lines(section.cv)
    lines += [""] + diagnostics_lines(section.diagnostics)

    selection = section.selection
    lines += ["", f"Model selection: {selection.rule}", render(ledger_frame(selection.ledger), fmt).rstrip("\n")]
    if selection.lr_vs_minimum is not None:
        test = selection.lr_vs_minimum
        lines.append(f"Selected vs minimum AICc: LR χ²({test.df}) = {test.chi2:.3f}, {format_p(test.p, with_stars=False)}")
    for interaction in section.interactions:
        lines.append(
            f"Interaction {display_name(interaction.term)}: LR χ²({interaction.df}) = {interaction.chi2:.3f}, "
            f"{format_p(interaction.p)}"
        )
    if section.selected_model is not None:
        lines += _selected_text(section.response, section.selected_model, fmt, compare)
    return lines + [""]


def render_report(report: ReplicationReport, fmt: str = "text", compare: bool = False) -> str:
    lines = [f"Dataset: {report.n} rows, digest {report.digest}", ""]
    for section in report.sections.values():
        lines += _section_text(section, fmt, compare)
    if report.holm_adjusted:
        lines.append(
            "Overall-model p-values, Holm-adjusted: "
            + ", ".join(f"{response} {format_p(p)}" for response, p in report.holm_adjusted.items())
        )
    return "\n".join(lines) + "\n"


def run(args: argparse.Namespace) -> str:
    if args.data:
        data = import_dataset(args.data)
    else:
        models = resolve_preset(args.preset)
        design = ExperimentController.enumerate_design(DesignSpec(replicates=args.replicates))
        data = ExperimentController.execute(design, models, seed=args.seed)

    report = ExperimentController.replicate_analysis(
        data,
        predictors=predictor_list(args.predictors),
        cv_seed=args.seed,
        k=args.k,
        repeats=args.repeats,
    )
    if args.summary:
        path = Path(args.summary)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
        except OSError as e:
            raise LabError(f"cannot write summary: {e}", path=str(path)) from e
        logger.info(f"✓ Wrote report summary to {path}")
    return render_report(report, args.format, args.compare)
