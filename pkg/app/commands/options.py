"""
Shared flag parsing for the subcommands
"""

import argparse
from typing import Dict, List, Optional

from app.core.exceptions import ConfigurationError, UsageError
from app.models.risk import PREDICTORS, RESPONSES, RiskModels
from app.services.presets import get_preset, list_presets, load_preset


def add_format(parser: argparse.ArgumentParser, default: str = "text") -> None:
    parser.add_argument(
        "--format",
        choices=["text", "csv"],
        default=default,
        help=f"Output rendering (default: {default})",
    )


def add_response(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument(
        "--response",
        choices=list(RESPONSES),
        required=required,
        default=None if required else "challenged",
        help="Dependent variable",
    )


def predictor_list(text: Optional[str]) -> Optional[List[str]]:
    """Comma-separated predictor names; terms may be products such as machine_data:region"""
    if text is None:
        return None
    names = [name.strip() for name in text.split(",") if name.strip()]
    for name in names:
        for part in name.split(":"):
            if part not in PREDICTORS:
                raise UsageError(f"unknown predictor '{part}'", predictor=part, allowed=list(PREDICTORS))
    return names


def number_list(text: Optional[str]) -> Optional[List[float]]:
    if text is None:
        return None
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise UsageError(f"invalid grid '{text}'", grid=text) from e


def fixed_setting(text: Optional[str]) -> Dict[str, float]:
    """`k=v,...` assignments of predictor values"""
    setting: Dict[str, float] = {}
    if not text:
        return setting
    for item in text.split(","):
        name, sep, raw = item.partition("=")
        name = name.strip()
        if not sep:
            raise UsageError(f"expected name=value, got '{item}'", fixed=text)
        if name not in PREDICTORS:
            raise UsageError(f"unknown predictor '{name}'", predictor=name, allowed=list(PREDICTORS))
        try:
            setting[name] = float(raw)
        except ValueError as e:
            raise UsageError(f"invalid value for {name}: '{raw}'", predictor=name) from e
    return setting


def resolve_preset(name: str) -> RiskModels:
    """Preset by name, or a preset document when given a path ending in .env"""
    try:
        if name.endswith(".env"):
            return load_preset(name)
        return get_preset(name)
    except ConfigurationError as e:
        raise UsageError(e.message, **{**e.detail, "available": list_presets()}) from e
