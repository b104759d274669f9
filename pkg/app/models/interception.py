"""
Interception models - breakpoints and recorded fingerprints
"""

from enum import Enum
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict

from app.models.fingerprint import FingerprintPayload


class BreakpointLocation(str, Enum):
    PAY_SUBMIT = "pay_submit"
    FINGERPRINT_POST = "fingerprint_post"


class Mutation(str, Enum):
    OVERWRITE_HEADERS = "overwrite_headers"
    REPLACE_PAYLOAD = "replace_payload"
    NONE = "none"


class Breakpoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    location: BreakpointLocation
    mutation: Mutation = Mutation.NONE


class RecordedFingerprint(BaseModel):
    """Fingerprint captured from another machine, replayed at the ACS fetch"""

    model_config = ConfigDict(frozen=True)

    source_label: str
    payload: FingerprintPayload
    headers: List[Tuple[str, str]] = []
