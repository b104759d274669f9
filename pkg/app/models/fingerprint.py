"""
Device fingerprint models collected by the ACS fingerprint script
"""

from enum import Enum
from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Platform(str, Enum):
    WIN32 = "Win32"
    WIN64 = "Win64"
    OTHER = "other"


class Plugin(BaseModel):
    """Browser plugin as reported by the software collector"""

    model_config = ConfigDict(frozen=True)

    name: str
    type: str


class MachineProfile(BaseModel):
    """Browser, display and software attributes of the payer's machine"""

    model_config = ConfigDict(frozen=True)

    # browser collector
    browser_name: str
    browser_major: int
    browser_minor: int
    languages_supported: List[str]
    languages_installed: List[str]
    os_name: str
    os_version: str
    platform: Platform

    # display collector
    color_depth: int
    screen_width: int = Field(gt=0)
    screen_height: int
    avail_height: int
    buffer_depth: int
    pixel_depth: int

    # software collector
    plugins: List[Plugin] = Field(default_factory=list)
    do_not_track: bool = False
    adblock: bool = False

    # java / cookies collectors
    java_enabled: bool = False
    cookies_enabled: bool = True

    # captured by the issuer outside the script
    ip_region: str

    @model_validator(mode="after")
    def check_display(self) -> "MachineProfile":
        if self.avail_height > self.screen_height:
            raise ValueError(
                f"avail_height {self.avail_height} exceeds screen_height {self.screen_height}"
            )
        return self


class FingerprintPayload(BaseModel):
    """Base-64 fingerprint as posted to the ACS (step 7)"""

    model_config = ConfigDict(frozen=True)

    server_transaction_id: str
    encoded: str
