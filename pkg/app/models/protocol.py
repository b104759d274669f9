"""
3DS 2.0 transaction models - cards, requests, protocol messages and outcomes
"""

import hashlib
import json
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.config import settings
from app.models.fingerprint import MachineProfile
from app.models.interception import RecordedFingerprint


class CardNetwork(str, Enum):
    VISA = "Visa"
    MASTERCARD = "MasterCard"


class CardState(str, Enum):
    ACTIVE = "active"
    BLOCKED = "blocked"


class Website(str, Enum):
    """The two 3DS 2.0 merchant sites of the experiment"""

    SHOP_A = "shop_a"
    SHOP_B = "shop_b"

    @property
    def code(self) -> int:
        return 0 if self is Website.SHOP_A else 1


class CardProfile(BaseModel):
    model_config = ConfigDict(frozen=True)

    card_id: int = Field(ge=1, le=4)
    network: CardNetwork
    home_region: str
    state: CardState = CardState.ACTIVE


class TransactionRequest(BaseModel):
    """Inputs of one card-not-present transaction"""

    model_config = ConfigDict(frozen=True)

    card: CardProfile
    website: Website
    value_usd: float = Field(gt=0)
    origin_region: str
    machine: MachineProfile
    machine_data_overwritten: bool = False
    replacement: Optional[RecordedFingerprint] = None
    headers: List[Tuple[str, str]] = []
    sandbox: bool = False

    @model_validator(mode="after")
    def check_experiment_values(self) -> "TransactionRequest":
        if not self.sandbox and self.value_usd not in (settings.LOW_VALUE_USD, settings.HIGH_VALUE_USD):
            raise ValueError(
                f"value_usd {self.value_usd} not in experiment levels "
                f"({settings.LOW_VALUE_USD}, {settings.HIGH_VALUE_USD}); use sandbox mode"
            )
        if self.machine_data_overwritten and self.replacement is None:
            raise ValueError("machine_data_overwritten requires a replacement fingerprint")
        return self


def payload_digest(payload: Dict[str, Any]) -> str:
    """SHA-256 hex of the payload serialized as compact JSON with sorted keys"""
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class MessageName(str, Enum):
    PAY_REQUEST = "PayRequest"
    FINGERPRINT_SCRIPT_LOAD = "FingerprintScriptLoad"
    FINGERPRINT_POST = "FingerprintPost"
    AREQ = "AReq"
    ARES = "ARes"
    CREQ = "CReq"
    CHALLENGE_PROMPT = "ChallengePrompt"
    CHALLENGE_RESPONSE = "ChallengeResponse"
    RREQ = "RReq"
    RRES = "RRes"
    CRES = "CRes"
    AUTHORIZATION_REQUEST = "AuthorizationRequest"


class Disposition(str, Enum):
    """ARes transaction status"""

    AUTHENTICATED = "Y"
    CHALLENGE_REQUIRED = "C"
    NOT_AUTHENTICATED = "N"
    REJECTED = "R"


class ProtocolMessage(BaseModel):
    model_config = ConfigDict(frozen=True)

    step: int = Field(ge=1)
    name: MessageName
    payload: Dict[str, Any]
    digest: str
    disposition: Optional[Disposition] = None
    auth_hash: Optional[str] = None

    @classmethod
    def create(cls, step: int, name: MessageName, payload: Dict[str, Any], **extra: Any) -> "ProtocolMessage":
        return cls(step=step, name=name, payload=payload, digest=payload_digest(payload), **extra)


class MessageTrace(BaseModel):
    server_transaction_id: str
    messages: List[ProtocolMessage] = []

    def names(self) -> List[MessageName]:
        return [message.name for message in self.messages]

    def find(self, name: MessageName) -> List[ProtocolMessage]:
        return [message for message in self.messages if message.name == name]

    def first(self, name: MessageName) -> Optional[ProtocolMessage]:
        found = self.find(name)
        return found[0] if found else None


class TransactionOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    challenged: int = Field(ge=0, le=1)
    declined: int = Field(ge=0, le=1)
    blocked: int = Field(ge=0, le=1)
    accepted: int = Field(ge=0, le=1)
    otp_attempts: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_consistency(self) -> "TransactionOutcome":
        if self.accepted and (self.declined or self.blocked):
            raise ValueError("accepted transaction cannot be declined or blocked")
        if self.blocked and not self.declined:
            raise ValueError("blocked implies declined")
        if self.challenged and self.otp_attempts < 1:
            raise ValueError("challenged transaction needs at least one OTP attempt")
        return self


class TraceVerdict(BaseModel):
    """Conformance result of a message trace"""

    violations: List[str] = []

    @property
    def passed(self) -> bool:
        return not self.violations
