"""
Shipped fixtures - the card holder's reference machine and recorded fingerprints
of other machines, replayed at the fingerprint breakpoint.

Recorded fingerprint file format (`*.fp`):

    # <source label>
    Header-Name: value
    ...
    <blank line>
    <base-64 payload>
"""

from pathlib import Path
from typing import Dict, List, Optional, Union

from loguru import logger

from app.core.config import settings
from app.core.exceptions import ConfigurationError, MalformedPayloadError
from app.models.fingerprint import FingerprintPayload, MachineProfile, Platform, Plugin
from app.models.interception import RecordedFingerprint
from app.services.fingerprint import decode_fingerprint

RECORDED_TRANSACTION_ID = "recorded"

HOLDER_PROFILE = MachineProfile(
    browser_name="Chrome",
    browser_major=70,
    browser_minor=0,
    languages_supported=["en-GB", "en-US", "en"],
    languages_installed=["en-GB"],
    os_name="Windows",
    os_version="10",
    platform=Platform.WIN32,
    color_depth=24,
    screen_width=1920,
    screen_height=1080,
    avail_height=1040,
    buffer_depth=0,
    pixel_depth=24,
    plugins=[
        Plugin(name="Chrome PDF Plugin", type="application/x-google-chrome-pdf"),
        Plugin(name="Chrome PDF Viewer", type="application/pdf"),
        Plugin(name="Native Client", type="application/x-nacl"),
    ],
    do_not_track=False,
    adblock=False,
    java_enabled=False,
    cookies_enabled=True,
    ip_region="UK",
)

HOLDER_HEADERS = [
    ("User-Agent", "Mozilla/5.0 (Windows NT 10.0; Win32) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/70.0.3538.77 Safari/537.36"),
    ("Accept-Language", "en-GB,en-US;q=0.9,en;q=0.8"),
]


def holder_profile(ip_region: Optional[str] = None) -> MachineProfile:
    """Reference profile of the card holder's machine, seen from `ip_region`"""
    if ip_region is None:
        return HOLDER_PROFILE
    return HOLDER_PROFILE.model_copy(update={"ip_region": ip_region})


def fingerprint_dir() -> Path:
    if settings.FINGERPRINT_DIR:
        return Path(settings.FINGERPRINT_DIR)
    return Path(__file__).resolve().parent.parent / "data" / "fingerprints"


def parse_recorded_fingerprint(text: str, default_label: str = "recorded") -> RecordedFingerprint:
    lines = text.splitlines()
    label = default_label
    if lines and lines[0].startswith("#"):
        label = lines[0][1:].strip() or default_label
        lines = lines[1:]

    headers = []
    index = 0
    while index < len(lines) and lines[index].strip():
        name, sep, value = lines[index].partition(":")
        if not sep:
            raise MalformedPayloadError(f"invalid header line in fingerprint '{label}'", line=lines[index])
        headers.append((name.strip(), value.strip()))
        index += 1

    payload_lines = [line.strip() for line in lines[index:] if line.strip()]
    if len(payload_lines) != 1:
        raise MalformedPayloadError(
            f"fingerprint '{label}' must carry exactly one payload line, found {len(payload_lines)}",
            label=label,
        )

    payload = FingerprintPayload(server_transaction_id=RECORDED_TRANSACTION_ID, encoded=payload_lines[0])
    decode_fingerprint(payload)
    return RecordedFingerprint(source_label=label, payload=payload, headers=headers)


def load_recorded_fingerprint(path: Union[str, Path]) -> RecordedFingerprint:
    path = Path(path)
    return parse_recorded_fingerprint(path.read_text(encoding="utf-8"), default_label=path.stem)


def load_recorded_fingerprints(directory: Optional[Path] = None) -> Dict[str, RecordedFingerprint]:
    directory = directory or fingerprint_dir()
    recorded = {}
    for path in sorted(directory.glob("*.fp")):
        fingerprint = load_recorded_fingerprint(path)
        recorded[path.stem] = fingerprint
    logger.debug(f"Loaded {len(recorded)} recorded fingerprints from {directory}")
    return recorded


def recorded_fingerprint(name: Optional[str] = None) -> RecordedFingerprint:
    """Recorded fingerprint by file stem, first in name order by default"""
    recorded = load_recorded_fingerprints()
    if not recorded:
        raise ConfigurationError(f"no recorded fingerprints in {fingerprint_dir()}")
    if name is None:
        return next(iter(recorded.values()))
    if name not in recorded:
        raise ConfigurationError(f"unknown recorded fingerprint '{name}'", name=name, available=list(recorded))
    return recorded[name]


def recorded_names() -> List[str]:
    return list(load_recorded_fingerprints())
