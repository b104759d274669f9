"""
Device fingerprint canonicalization and base-64 payload encoding
"""

import base64
import binascii
from typing import Dict, List, Tuple
from urllib.parse import quote, unquote

from loguru import logger

from app.core.exceptions import MalformedPayloadError
from app.models.fingerprint import FingerprintPayload, MachineProfile, Plugin

# Token order: browser, display, software, java, cookies, ip region.
CANONICAL_KEYS: Tuple[str, ...] = (
    "browser",
    "browser_major",
    "browser_minor",
    "languages_supported",
    "languages_installed",
    "os",
    "os_version",
    "platform",
    "color_depth",
    "screen_width",
    "screen_height",
    "avail_height",
    "buffer_depth",
    "pixel_depth",
    "plugins",
    "do_not_track",
    "adblock",
    "java",
    "cookies",
    "ip_region",
)

# '|', '=', ',', ':' and '%' are always escaped so the layout stays injective
_SAFE = " ./-_~()+;"
# never produced by _escape, so an empty list stays distinct from [""]
EMPTY_LIST = "[]"


def _escape(value: str) -> str:
    return quote(value, safe=_SAFE)


def _flag(value: bool) -> str:
    return "1" if value else "0"


def _tag_list(tags: List[str]) -> str:
    return ",".join(_escape(tag) for tag in tags) if tags else EMPTY_LIST


def _tokens(profile: MachineProfile) -> List[Tuple[str, str]]:
    plugins = ",".join(f"{_escape(p.name)}:{_escape(p.type)}" for p in profile.plugins)
    return [
        ("browser", _escape(profile.browser_name)),
        ("browser_major", str(profile.browser_major)),
        ("browser_minor", str(profile.browser_minor)),
        ("languages_supported", _tag_list(profile.languages_supported)),
        ("languages_installed", _tag_list(profile.languages_installed)),
        ("os", _escape(profile.os_name)),
        ("os_version", _escape(profile.os_version)),
        ("platform", profile.platform.value),
        ("color_depth", str(profile.color_depth)),
        ("screen_width", str(profile.screen_width)),
        ("screen_height", str(profile.screen_height)),
        ("avail_height", str(profile.avail_height)),
        ("buffer_depth", str(profile.buffer_depth)),
        ("pixel_depth", str(profile.pixel_depth)),
        ("plugins", plugins),
        ("do_not_track", _flag(profile.do_not_track)),
        ("adblock", _flag(profile.adblock)),
        ("java", _flag(profile.java_enabled)),
        ("cookies", _flag(profile.cookies_enabled)),
        ("ip_region", _escape(profile.ip_region)),
    ]


def canonical_fingerprint_string(profile: MachineProfile) -> str:
    """
    Combine every collected attribute into the single string the ACS script posts.

    Tokens are `key=value` joined by `|` in a fixed key order; lists keep
    their order and are joined by `,`; booleans render as 0/1.
    """
    return "|".join(f"{key}={value}" for key, value in _tokens(profile))


def _split_list(raw: str) -> List[str]:
    if raw == EMPTY_LIST:
        return []
    return [unquote(item) for item in raw.split(",")]


def parse_canonical(text: str) -> MachineProfile:
    """Inverse of canonical_fingerprint_string"""
    parts = text.split("|")
    if len(parts) != len(CANONICAL_KEYS):
        raise MalformedPayloadError(
            f"expected {len(CANONICAL_KEYS)} fingerprint tokens, got {len(parts)}",
            tokens=len(parts),
        )

    fields: Dict[str, str] = {}
    for expected, part in zip(CANONICAL_KEYS, parts):
        key, sep, value = part.partition("=")
        if not sep or key != expected:
            raise MalformedPayloadError(
                f"fingerprint token '{key}' found where '{expected}' was expected",
                expected=expected,
                found=key,
            )
        fields[key] = value

    plugins = []
    for raw in fields["plugins"].split(",") if fields["plugins"] else []:
        name, sep, kind = raw.partition(":")
        if not sep:
            raise MalformedPayloadError(f"plugin token '{raw}' lacks a type", plugin=raw)
        plugins.append(Plugin(name=unquote(name), type=unquote(kind)))

    try:
        return MachineProfile(
            browser_name=unquote(fields["browser"]),
            browser_major=int(fields["browser_major"]),
            browser_minor=int(fields["browser_minor"]),
            languages_supported=_split_list(fields["languages_supported"]),
            languages_installed=_split_list(fields["languages_installed"]),
            os_name=unquote(fields["os"]),
            os_version=unquote(fields["os_version"]),
            platform=fields["platform"],
            color_depth=int(fields["color_depth"]),
            screen_width=int(fields["screen_width"]),
            screen_height=int(fields["screen_height"]),
            avail_height=int(fields["avail_height"]),
            buffer_depth=int(fields["buffer_depth"]),
            pixel_depth=int(fields["pixel_depth"]),
            plugins=plugins,
            do_not_track=fields["do_not_track"] == "1",
            adblock=fields["adblock"] == "1",
            java_enabled=fields["java"] == "1",
            cookies_enabled=fields["cookies"] == "1",
            ip_region=unquote(fields["ip_region"]),
        )
    except ValueError as e:
        raise MalformedPayloadError(f"invalid fingerprint field: {e}") from e


def encode_fingerprint(canonical: str, server_transaction_id: str) -> FingerprintPayload:
    """Standard base-64 (with padding) of the UTF-8 canonical string"""
    encoded = base64.standard_b64encode(canonical.encode("utf-8")).decode("ascii")
    return FingerprintPayload(server_transaction_id=server_transaction_id, encoded=encoded)


def decode_fingerprint(payload: FingerprintPayload) -> str:
    try:
        return base64.b64decode(payload.encoded, validate=True).decode("utf-8")
    except (binascii.Error, UnicodeDecodeError, ValueError) as e:
        logger.error(f"❌ Failed to decode fingerprint payload: {e}")
        raise MalformedPayloadError(
            f"invalid fingerprint payload: {e}",
            server_transaction_id=payload.server_transaction_id,
        ) from e


def fingerprint_diff(original: str, replacement: str) -> Dict[str, Tuple[str, str]]:
    """Tokens whose values differ between two canonical strings"""
    left = dict(part.partition("=")[::2] for part in original.split("|")) if original else {}
    right = dict(part.partition("=")[::2] for part in replacement.split("|")) if replacement else {}
    diff = {}
    for key in list(left) + [k for k in right if k not in left]:
        a, b = left.get(key, ""), right.get(key, "")
        if a != b:
            diff[key] = (unquote(a), unquote(b))
    return diff
