# app/core/config.py
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import field_validator
from typing import List, Optional
from functools import lru_cache


class Settings(BaseSettings):
    # App Configuration
    APP_NAME: str = "3DS Fraud Lab"
    LOG_LEVEL: str = "INFO"
    LOG_TO_FILE: bool = False
    LOG_DIR: str = "logs"

    # Preset / fixture locations
    PRESET_DIR: Optional[str] = None
    FINGERPRINT_DIR: Optional[str] = None
    REFERENCE_DATASET: Optional[str] = None  # published CSV, enables the golden tests

    # Experiment coding
    HOME_REGION: str = "UK"
    FOREIGN_REGION: str = "DE"
    LOW_VALUE_USD: float = 13.0
    HIGH_VALUE_USD: float = 406.0
    HIGH_VALUE_THRESHOLD_USD: float = 100.0  # sandbox mode only

    # Challenge loop
    OTP_DIGITS: int = 6
    OTP_MAX_ATTEMPTS: int = 3

    # Logistic fitting
    IRLS_MAX_ITER: int = 25
    IRLS_TOL: float = 1e-8
    IRLS_MAX_HALVINGS: int = 30
    SEPARATION_COEF_LIMIT: float = 10.0
    SEPARATION_SE_LIMIT: float = 100.0

    # Analysis defaults
    HL_GROUPS: int = 10
    CV_FOLDS: int = 10
    CV_REPEATS: int = 10
    PROFILE_TOL: float = 1e-6
    CONFIDENCE_LEVEL: float = 0.95

    # Model selection
    SELECTION_FULL_MAX_DELTA: float = 4.0
    SELECTION_SUBSTANTIAL_DELTA: float = 2.0
    CORE_PREDICTORS: str = "machine_data,value,region"

    # Experiment execution
    CALIBRATION_MAX_RETRIES: int = 5
    EXECUTION_WORKERS: int = 1

    @field_validator(
        "OTP_DIGITS",
        "OTP_MAX_ATTEMPTS",
        "IRLS_MAX_ITER",
        "HL_GROUPS",
        "CV_FOLDS",
        "CV_REPEATS",
        "CALIBRATION_MAX_RETRIES",
        "EXECUTION_WORKERS",
    )
    @classmethod
    def validate_positive_count(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"must be a positive integer, got {v}")
        return v

    @field_validator("IRLS_TOL", "PROFILE_TOL")
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        if not 0 < v < 1:
            raise ValueError(f"tolerance must lie in (0, 1), got {v}")
        return v

    @field_validator("CONFIDENCE_LEVEL")
    @classmethod
    def validate_level(cls, v: float) -> float:
        if not 0 < v < 1:
            raise ValueError(f"confidence level must lie in (0, 1), got {v}")
        return v

    @property
    def core_predictors(self) -> List[str]:
        """Core predictor list parsed from the comma separated setting"""
        return [item.strip() for item in self.CORE_PREDICTORS.split(",") if item.strip()]

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )


@lru_cache()
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
