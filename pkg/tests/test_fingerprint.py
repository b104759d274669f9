import pytest

from app.core.exceptions import MalformedPayloadError
from app.models.fingerprint import FingerprintPayload, MachineProfile, Plugin
from app.services.fingerprint import (
    CANONICAL_KEYS,
    canonical_fingerprint_string,
    decode_fingerprint,
    encode_fingerprint,
    fingerprint_diff,
    parse_canonical,
)
from app.services.fixtures import holder_profile


def test_equal_profiles_give_identical_strings():
    a = holder_profile()
    b = MachineProfile(**a.model_dump())
    assert canonical_fingerprint_string(a) == canonical_fingerprint_string(b)


def test_cookies_disabled_token():
    profile = holder_profile().model_copy(update={"cookies_enabled": False})
    assert "cookies=0" in canonical_fingerprint_string(profile).split("|")


def test_plugin_order_participates_in_identity():
    profile = holder_profile()
    swapped = profile.model_copy(update={"plugins": list(reversed(profile.plugins))})
    assert canonical_fingerprint_string(profile) != canonical_fingerprint_string(swapped)


@pytest.mark.parametrize(
    "update",
    [
        {"browser_minor": 1},
        {"languages_installed": ["de-DE"]},
        {"screen_width": 1366},
        {"do_not_track": True},
        {"adblock": True},
        {"java_enabled": True},
        {"ip_region": "DE"},
    ],
)
def test_single_field_change_changes_string(update):
    profile = holder_profile()
    assert canonical_fingerprint_string(profile) != canonical_fingerprint_string(profile.model_copy(update=update))


def test_key_order_is_fixed():
    keys = [token.partition("=")[0] for token in canonical_fingerprint_string(holder_profile()).split("|")]
    assert tuple(keys) == CANONICAL_KEYS


def test_separator_characters_are_escaped():
    profile = holder_profile().model_copy(
        update={"plugins": [Plugin(name="a|b=c", type="x,y:z")], "os_version": "10|11"}
    )
    text = canonical_fingerprint_string(profile)
    assert len(text.split("|")) == len(CANONICAL_KEYS)
    assert parse_canonical(text) == profile


def test_parse_inverts_canonical_string():
    profile = holder_profile("DE")
    assert parse_canonical(canonical_fingerprint_string(profile)) == profile


def test_parse_rejects_wrong_layout():
    with pytest.raises(MalformedPayloadError):
        parse_canonical("browser=Chrome|os=Windows")


def test_base64_known_value():
    assert encode_fingerprint("AB", "t").encoded == "QUI="
    assert encode_fingerprint("", "t").encoded == ""
    assert decode_fingerprint(FingerprintPayload(server_transaction_id="t", encoded="")) == ""


def test_encode_decode_round_trip_is_exact():
    canonical = canonical_fingerprint_string(holder_profile())
    payload = encode_fingerprint(canonical, "stid-1")
    assert payload.server_transaction_id == "stid-1"
    assert decode_fingerprint(payload) == canonical


def test_non_ascii_round_trip():
    profile = holder_profile().model_copy(update={"browser_name": "Navigateur é"})
    canonical = canonical_fingerprint_string(profile)
    assert decode_fingerprint(encode_fingerprint(canonical, "t")) == canonical


@pytest.mark.parametrize("encoded", ["not base64!", "QUI", "//79"])
def test_decode_rejects_malformed_payload(encoded):
    with pytest.raises(MalformedPayloadError):
        decode_fingerprint(FingerprintPayload(server_transaction_id="t", encoded=encoded))


def test_profile_invariants():
    data = holder_profile().model_dump()
    with pytest.raises(ValueError):
        MachineProfile(**{**data, "avail_height": data["screen_height"] + 1})
    with pytest.raises(ValueError):
        MachineProfile(**{**data, "screen_width": 0})


def test_fingerprint_diff_names_changed_tokens():
    a = canonical_fingerprint_string(holder_profile())
    b = canonical_fingerprint_string(holder_profile().model_copy(update={"browser_name": "Firefox"}))
    assert fingerprint_diff(a, b) == {"browser": ("Chrome", "Firefox")}
    assert fingerprint_diff(a, a) == {}


@pytest.mark.parametrize("field", ["languages_supported", "languages_installed"])
def test_empty_list_differs_from_list_of_empty_tag(field):
    empty = holder_profile().model_copy(update={field: []})
    blank = holder_profile().model_copy(update={field: [""]})
    assert canonical_fingerprint_string(empty) != canonical_fingerprint_string(blank)
    assert parse_canonical(canonical_fingerprint_string(empty)) == empty
    assert parse_canonical(canonical_fingerprint_string(blank)) == blank
