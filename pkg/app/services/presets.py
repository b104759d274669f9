"""
Coefficient presets for the three decision models.

Built-in bundles come from the published regression tables. Extra bundles are
flat key-value documents (`<name>.env`) read from PRESET_DIR:

    name=published
    challenged.intercept=-2.981
    challenged.machine_data=1.893
    challenged.source=preset_published
"""

from pathlib import Path
from typing import Dict, List, Union

from dotenv import dotenv_values
from loguru import logger

from app.core.config import settings
from app.core.exceptions import ConfigurationError, ModelMismatchError
from app.models.risk import PREDICTORS, RESPONSES, LogisticModel, ModelSource, RiskModels


def _model(name: str, intercept: float, source: ModelSource = ModelSource.PRESET_PUBLISHED, **coefficients: float) -> LogisticModel:
    return LogisticModel(name=name, intercept=intercept, coefficients=coefficients, source=source)


CHALLENGED = _model(
    "challenged", -2.981,
    machine_data=1.893, value=1.498, region=1.893, website=-0.219, card=-0.563,
)
DECLINED = _model(
    "declined", -6.333,
    machine_data=2.944, value=3.397, region=3.397, website=0.285, card=0.975,
)
# selected model; the full five-predictor table lives in BLOCKED_FULL
BLOCKED = _model(
    "blocked", -22.798,
    value=20.194, region=2.327, machine_data=1.096,
)
BLOCKED_FULL = _model(
    "blocked", -22.621,
    machine_data=1.144, value=20.291, region=2.428, website=0.388, card=-0.386,
)

BUILTIN_PRESETS: Dict[str, RiskModels] = {
    "published": RiskModels(name="published", challenged=CHALLENGED, declined=DECLINED, blocked=BLOCKED),
    "published_full": RiskModels(name="published_full", challenged=CHALLENGED, declined=DECLINED, blocked=BLOCKED_FULL),
    "zero": RiskModels(
        name="zero",
        challenged=_model("challenged", 0.0, ModelSource.CUSTOM, **{p: 0.0 for p in PREDICTORS}),
        declined=_model("declined", 0.0, ModelSource.CUSTOM, **{p: 0.0 for p in PREDICTORS}),
        blocked=_model("blocked", 0.0, ModelSource.CUSTOM, **{p: 0.0 for p in PREDICTORS}),
    ),
}

# alternate names accepted by get_preset; not listed separately
PRESET_ALIASES: Dict[str, str] = {
    "paper": "published",
    "paper_full": "published_full",
}


def preset_path(name: str) -> Path:
    if not settings.PRESET_DIR:
        raise ConfigurationError(f"unknown preset '{name}'", preset=name, available=list_presets())
    return Path(settings.PRESET_DIR) / f"{name}.env"


def list_presets() -> List[str]:
    names = list(BUILTIN_PRESETS)
    if settings.PRESET_DIR and Path(settings.PRESET_DIR).is_dir():
        names.extend(sorted(p.stem for p in Path(settings.PRESET_DIR).glob("*.env") if p.stem not in BUILTIN_PRESETS))
    return names


def get_preset(name: str) -> RiskModels:
    """Built-in bundle by name or alias, else `<PRESET_DIR>/<name>.env`"""
    name = PRESET_ALIASES.get(name, name)
    if name in BUILTIN_PRESETS:
        return BUILTIN_PRESETS[name].model_copy(deep=True)

    path = preset_path(name)
    if not path.is_file():
        raise ConfigurationError(f"unknown preset '{name}'", preset=name, available=list_presets())
    return load_preset(path)


def dump_preset(models: RiskModels) -> str:
    """Flat key-value rendering; floats use repr so parsing restores them bit-exactly"""
    lines = [f"name={models.name}"]
    for response in RESPONSES:
        model = models.for_response(response)
        lines.append(f"{response}.source={model.source.value}")
        lines.append(f"{response}.intercept={model.intercept!r}")
        for predictor, beta in model.coefficients.items():
            lines.append(f"{response}.{predictor}={beta!r}")
    return "\n".join(lines) + "\n"


def save_preset(models: RiskModels, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_preset(models), encoding="utf-8")
    logger.info(f"✓ Saved preset '{models.name}' to {path}")
    return path


def parse_preset(values: Dict[str, str], default_name: str = "custom") -> RiskModels:
    grouped: Dict[str, Dict[str, str]] = {response: {} for response in RESPONSES}
    for key, raw in values.items():
        if key == "name":
            continue
        response, sep, field = key.partition(".")
        if not sep or response not in RESPONSES:
            raise ConfigurationError(f"unexpected preset key '{key}'", key=key)
        if raw is None:
            raise ConfigurationError(f"preset key '{key}' has no value", key=key)
        grouped[response][field] = raw

    models = {}
    for response, fields in grouped.items():
        if "intercept" not in fields:
            raise ConfigurationError(f"preset lacks {response}.intercept", response=response)
        try:
            source = ModelSource(fields.pop("source", ModelSource.CUSTOM.value))
            intercept = float(fields.pop("intercept"))
            coefficients = {predictor: float(raw) for predictor, raw in fields.items()}
        except ValueError as e:
            raise ConfigurationError(f"invalid preset value for {response}: {e}", response=response) from e
        try:
            models[response] = LogisticModel(
                name=response, intercept=intercept, coefficients=coefficients, source=source
            )
        except ModelMismatchError:
            raise
        except ValueError as e:
            raise ConfigurationError(f"invalid {response} model: {e}", response=response) from e

    return RiskModels(name=values.get("name") or default_name, **models)


def load_preset(path: Union[str, Path]) -> RiskModels:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"preset file not found: {path}", path=str(path))
    models = parse_preset(dotenv_values(path), default_name=path.stem)
    logger.info(f"✓ Loaded preset '{models.name}' from {path}")
    return models
