"""
Two-breakpoint manipulation workflow.

Breakpoint 1 (pay_submit) rewrites the user-agent-class request headers,
breakpoint 2 (fingerprint_post) swaps the base-64 fingerprint for one recorded
on another machine. Also builds and codes experiment transaction requests.
"""

from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import httpx
from loguru import logger

from app.core.config import settings
from app.core.exceptions import ConfigurationError
from app.models.fingerprint import MachineProfile
from app.models.interception import Breakpoint, BreakpointLocation, Mutation, RecordedFingerprint
from app.models.protocol import (
    CardNetwork,
    CardProfile,
    MessageName,
    ProtocolMessage,
    TransactionRequest,
    Website,
)
from app.models.risk import PredictorVector
from app.services.fingerprint import canonical_fingerprint_string, decode_fingerprint

# Only these headers are rewritten at pay_submit
USER_AGENT_CLASS_HEADERS: Tuple[str, ...] = (
    "user-agent",
    "accept-language",
    "sec-ch-ua",
    "sec-ch-ua-platform",
    "sec-ch-ua-mobile",
)

EXPERIMENT_CARDS: Dict[int, CardProfile] = {
    1: CardProfile(card_id=1, network=CardNetwork.VISA, home_region=settings.HOME_REGION),
    2: CardProfile(card_id=2, network=CardNetwork.VISA, home_region=settings.HOME_REGION),
    3: CardProfile(card_id=3, network=CardNetwork.VISA, home_region=settings.HOME_REGION),
    4: CardProfile(card_id=4, network=CardNetwork.MASTERCARD, home_region=settings.HOME_REGION),
}

Headers = List[Tuple[str, str]]


def overwrite_headers(headers: Iterable[Tuple[str, str]], replacement: Iterable[Tuple[str, str]]) -> Headers:
    """Replace user-agent-class headers by the recorded ones, leaving every other header as sent"""
    replacement = list(replacement)
    merged = httpx.Headers(list(headers))
    recorded = httpx.Headers(replacement)
    spelling = {name.lower(): name for name, _ in replacement}
    for name in USER_AGENT_CLASS_HEADERS:
        if name in recorded:
            merged[spelling[name]] = recorded[name]
        elif name in merged:
            del merged[name]
    return [(key.decode(merged.encoding), value.decode(merged.encoding)) for key, value in merged.raw]


def overwrite_machine_data(post: ProtocolMessage, replacement: RecordedFingerprint) -> ProtocolMessage:
    """FingerprintPost carrying the recorded payload; the transaction id is kept"""
    if post.name != MessageName.FINGERPRINT_POST:
        raise ConfigurationError(
            f"fingerprint breakpoint expects a {MessageName.FINGERPRINT_POST.value} message, got {post.name.value}",
            received=post.name.value,
        )
    decode_fingerprint(replacement.payload)

    payload = dict(post.payload)
    payload["fingerprint"] = replacement.payload.encoded
    payload["headers"] = [[name, value] for name, value in replacement.headers]
    logger.debug(f"Replaced fingerprint payload with recording '{replacement.source_label}'")
    return ProtocolMessage.create(post.step, MessageName.FINGERPRINT_POST, payload)


class Interceptor:
    """Breakpoints attached to one transaction run; mutation=none passes messages through untouched"""

    def __init__(self, breakpoints: Sequence[Breakpoint] = (), replacement: Optional[RecordedFingerprint] = None):
        self.breakpoints: Dict[BreakpointLocation, Breakpoint] = {}
        for breakpoint in breakpoints:
            if breakpoint.location in self.breakpoints:
                raise ConfigurationError(
                    f"duplicate breakpoint at {breakpoint.location.value}",
                    location=breakpoint.location.value,
                )
            self.breakpoints[breakpoint.location] = breakpoint

        needs_replacement = any(b.mutation != Mutation.NONE for b in self.breakpoints.values())
        if needs_replacement and replacement is None:
            raise ConfigurationError("mutating breakpoints need a recorded fingerprint")
        self.replacement = replacement

    @classmethod
    def manipulation(cls, replacement: RecordedFingerprint) -> "Interceptor":
        """Both breakpoints armed, as in the machine-data manipulation"""
        return cls(
            [
                Breakpoint(location=BreakpointLocation.PAY_SUBMIT, mutation=Mutation.OVERWRITE_HEADERS),
                Breakpoint(location=BreakpointLocation.FINGERPRINT_POST, mutation=Mutation.REPLACE_PAYLOAD),
            ],
            replacement,
        )

    def _mutation(self, location: BreakpointLocation) -> Mutation:
        breakpoint = self.breakpoints.get(location)
        return breakpoint.mutation if breakpoint else Mutation.NONE

    def on_pay_submit(self, headers: Headers) -> Headers:
        if self._mutation(BreakpointLocation.PAY_SUBMIT) == Mutation.OVERWRITE_HEADERS:
            return overwrite_headers(headers, self.replacement.headers)
        return headers

    def on_fingerprint_post(self, post: ProtocolMessage) -> ProtocolMessage:
        if self._mutation(BreakpointLocation.FINGERPRINT_POST) == Mutation.REPLACE_PAYLOAD:
            return overwrite_machine_data(post, self.replacement)
        return post


def resolve_card(card: Union[int, CardProfile]) -> CardProfile:
    if isinstance(card, CardProfile):
        return card
    if card not in EXPERIMENT_CARDS:
        raise ConfigurationError(f"unknown card id {card}", card=card, available=list(EXPERIMENT_CARDS))
    return EXPERIMENT_CARDS[card]


def resolve_website(website: Union[str, int, Website]) -> Website:
    if isinstance(website, Website):
        return website
    if isinstance(website, int) and not isinstance(website, bool):
        for candidate in Website:
            if candidate.code == website:
                return candidate
    else:
        try:
            return Website(website)
        except ValueError:
            pass
    raise ConfigurationError(f"unknown website '{website}'", website=website, available=[w.value for w in Website])


def build_request(
    card: Union[int, CardProfile],
    website: Union[str, int, Website],
    region_choice: str,
    value_choice: str,
    machine: MachineProfile,
    overwrite: Optional[RecordedFingerprint] = None,
    headers: Optional[Headers] = None,
) -> TransactionRequest:
    """Experiment request for one design cell; machine data counts as overwritten only if the recording differs"""
    card = resolve_card(card)
    website = resolve_website(website)

    regions = {"home": card.home_region, "foreign": settings.FOREIGN_REGION}
    if region_choice not in regions:
        raise ConfigurationError(f"region choice must be home or foreign, got '{region_choice}'", region=region_choice)
    values = {"low": settings.LOW_VALUE_USD, "high": settings.HIGH_VALUE_USD}
    if value_choice not in values:
        raise ConfigurationError(f"value choice must be low or high, got '{value_choice}'", value=value_choice)

    origin_region = regions[region_choice]
    machine = machine.model_copy(update={"ip_region": origin_region})

    overwritten = False
    if overwrite is not None:
        overwritten = decode_fingerprint(overwrite.payload) != canonical_fingerprint_string(machine)

    return TransactionRequest(
        card=card,
        website=website,
        value_usd=values[value_choice],
        origin_region=origin_region,
        machine=machine,
        machine_data_overwritten=overwritten,
        replacement=overwrite,
        headers=list(headers or []),
    )


def code_value(value_usd: float, sandbox: bool = False) -> int:
    if sandbox:
        return int(value_usd >= settings.HIGH_VALUE_THRESHOLD_USD)
    return int(value_usd == settings.HIGH_VALUE_USD)


def code_request(request: TransactionRequest, machine_data: Optional[int] = None) -> PredictorVector:
    """Coded IVs of a request; `machine_data` overrides the request flag when the ACS observed the payload"""
    return PredictorVector(
        machine_data=int(request.machine_data_overwritten) if machine_data is None else machine_data,
        value=code_value(request.value_usd, request.sandbox),
        region=int(request.origin_region != request.card.home_region),
        website=request.website.code,
        card=request.card.card_id,
    )
