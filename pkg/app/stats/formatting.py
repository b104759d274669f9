"""
Table rendering in the layout of published regression tables
"""

import math
from typing import Iterable, List, Optional

import pandas as pd

from app.models.reports import (
    ChiSquareTest,
    CoefficientRow,
    CvReport,
    DiagnosticsReport,
    GofReport,
    LedgerEntry,
    OddsRatioRow,
    OverallModelTest,
)
from app.models.risk import display_name


def stars(p: float) -> str:
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""


def format_decimal(value: float, digits: int = 2) -> str:
    """Fixed decimals without the leading zero, as in `.28` or `-.07`"""
    text = f"{value:.{digits}f}"
    if text.startswith("0."):
        return text[1:]
    if text.startswith("-0."):
        return "-" + text[2:]
    return text


def format_p(p: float, with_stars: bool = True) -> str:
    """Three decimals, `<.001` floor, significance stars"""
    if math.isnan(p):
        return "NA"
    text = "<.001" if p < 0.001 else format_decimal(p, 3)
    return text + stars(p) if with_stars else text


def coefficient_frame(rows: Iterable[CoefficientRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "": display_name(row.term),
                "Estimate": f"{row.estimate:.3f}",
                "SE": f"{row.se:.3f}",
                "z-value": f"{row.z:.3f}",
                "p-Value": format_p(row.p),
            }
            for row in rows
        ]
    )


def _test_text(test: ChiSquareTest) -> str:
    p_text = "p < .001" if test.p < 0.001 else f"p = {format_decimal(test.p, 3)}"
    return f"{test.label} χ²({test.df}) = {test.chi2:.3f}, {p_text}"


def model_note(overall: OverallModelTest, gof: GofReport) -> List[str]:
    """The two note lines under a regression table; the LR form follows the Wald one"""
    return [
        f"Overall Model: {_test_text(overall.wald)} ({_test_text(overall.lr)})",
        f"R²= {format_decimal(gof.r2_hosmer_lemeshow)} (Hosmer & Lemeshow), "
        f"{format_decimal(gof.r2_cox_snell)} (Cox & Snell), {format_decimal(gof.r2_nagelkerke)} (Nagelkerke)",
    ]


def odds_ratio_frame(rows: Iterable[OddsRatioRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "": display_name(row.term),
                "OR": f"{row.odds_ratio:.3f}",
                "LL": f"{row.lower:.3f}" if row.lower is not None else "",
                "UL": f"{row.upper:.3f}" if row.upper is not None else row.note or "",
            }
            for row in rows
        ]
    )


def ledger_frame(ledger: Iterable[LedgerEntry]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "model": " + ".join(display_name(p) for p in entry.predictors) or "(Intercept only)",
                "k": entry.k,
                "AICc": f"{entry.aicc:.2f}",
                "delta": f"{entry.delta:.2f}",
                "exp(-delta/2)": f"{entry.relative_likelihood:.3f}",
                "weight": f"{entry.akaike_weight:.3f}",
                "support": entry.support,
            }
            for entry in ledger
        ]
    )


def cv_lines(report: CvReport, response: Optional[str] = None) -> List[str]:
    low, high = report.accuracy_ci_95
    prefix = f"{response}: " if response else ""
    return [
        f"{prefix}{report.k}-fold cross-validation, {report.repeats} repetitions",
        f"Accuracy = {report.accuracy:.1%}, 95% CI [{low:.1%}, {high:.1%}]",
        f"Cohen's κ = {format_decimal(report.kappa)}",
        f"No-information rate = {report.nir:.1%}, p(Accuracy > NIR) = {format_p(report.nir_p, with_stars=False)}",
    ]


def diagnostics_lines(report: DiagnosticsReport) -> List[str]:
    vif = ", ".join(f"{display_name(name)} {value:.2f}" for name, value in report.vif.items())
    return [
        f"Mean VIF = {report.mean_vif:.2f} ({vif})" if vif else "Mean VIF = n/a",
        f"max |DFbetas| = {report.max_abs_dfbetas:.3f}, max Cook's distance = {report.max_cooks_distance:.3f}",
        f"|standardized residual| > 2: {report.large_residuals} cases, high leverage: {report.high_leverage} cases",
    ]


def render(frame: pd.DataFrame, fmt: str = "text") -> str:
    if fmt == "csv":
        return frame.to_csv(index=False, lineterminator="\n")
    return frame.to_string(index=False) + "\n"
