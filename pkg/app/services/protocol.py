"""
3DS 2.0 transaction state machine.

Runs one card-not-present payment through fingerprint collection, the
authentication request/response, the optional OTP challenge loop with its
results exchange, and authorization. Every run is a pure function of the
request and the seed.
"""

import hashlib
import uuid
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from loguru import logger

from app.core.config import settings
from app.core.exceptions import CardBlockedError
from app.models.protocol import (
    CardState,
    Disposition,
    MessageName,
    MessageTrace,
    ProtocolMessage,
    TraceVerdict,
    TransactionOutcome,
    TransactionRequest,
    payload_digest,
)
from app.models.risk import Verdict
from app.services.fingerprint import canonical_fingerprint_string, decode_fingerprint, encode_fingerprint
from app.services.interceptor import Interceptor, code_request
from app.services.risk_engine import RiskEngine

Seed = Union[int, np.random.SeedSequence]

# (attempt number, one-time passcode sent) -> passcode typed by the payer
OtpResponder = Callable[[int, str], str]

FINGERPRINT_SCRIPT = "dfp.js"


def correct_responder(attempt: int, otp: str) -> str:
    return otp


def auth_hash(server_transaction_id: str, challenge_status: str) -> str:
    """Digest carried by RReq over the transaction id and the challenge verdict"""
    return hashlib.sha256(f"{server_transaction_id}:{challenge_status}".encode("utf-8")).hexdigest()


def _streams(seed: Seed) -> Tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    """Independent generators for identifiers, risk assessment and OTP generation"""
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = [
        np.random.SeedSequence(root.entropy, spawn_key=tuple(root.spawn_key) + (index,))
        for index in range(3)
    ]
    return tuple(np.random.default_rng(child) for child in children)


class _TraceBuilder:
    def __init__(self, server_transaction_id: str):
        self.server_transaction_id = server_transaction_id
        self.messages: List[ProtocolMessage] = []

    @property
    def next_step(self) -> int:
        return len(self.messages) + 1

    def emit(self, name: MessageName, payload: dict, **extra) -> ProtocolMessage:
        message = ProtocolMessage.create(self.next_step, name, payload, **extra)
        self.messages.append(message)
        return message

    def append(self, message: ProtocolMessage) -> ProtocolMessage:
        self.messages.append(message)
        return message

    def build(self) -> MessageTrace:
        return MessageTrace(server_transaction_id=self.server_transaction_id, messages=self.messages)


def _disposition(verdict: Verdict) -> Disposition:
    return {
        Verdict.CHALLENGE: Disposition.CHALLENGE_REQUIRED,
        Verdict.DECLINE: Disposition.NOT_AUTHENTICATED,
        Verdict.BLOCK: Disposition.REJECTED,
        Verdict.FRICTIONLESS_ACCEPT: Disposition.AUTHENTICATED,
    }[verdict]


def run_transaction(
    request: TransactionRequest,
    engine: RiskEngine,
    seed: Seed,
    interceptor: Optional[Interceptor] = None,
    responder: OtpResponder = correct_responder,
    stateful: bool = False,
) -> Tuple[TransactionOutcome, MessageTrace]:
    """
    Execute one 3DS 2.0 transaction.

    Args:
        request: Transaction inputs; `request.replacement` arms both breakpoints
            unless an explicit interceptor is given
        engine: Risk engine consulted by the ACS
        seed: Seed of the run; equal (request, seed) give identical traces
        interceptor: Breakpoints attached to this run
        responder: Payer's answer to each OTP prompt
        stateful: Refuse blocked cards before step 1

    Returns:
        (outcome, trace)
    """
    if stateful and request.card.state == CardState.BLOCKED:
        raise CardBlockedError(request.card.card_id)

    if interceptor is None:
        interceptor = Interceptor.manipulation(request.replacement) if request.replacement else Interceptor()

    id_rng, risk_rng, otp_rng = _streams(seed)
    stid = str(uuid.UUID(bytes=id_rng.bytes(16), version=4))
    trace = _TraceBuilder(stid)

    # Pay submit (breakpoint 1)
    headers = interceptor.on_pay_submit(list(request.headers))
    trace.emit(
        MessageName.PAY_REQUEST,
        {
            "card_id": request.card.card_id,
            "network": request.card.network.value,
            "website": request.website.value,
            "value_usd": request.value_usd,
            "origin_region": request.origin_region,
            "headers": [[name, value] for name, value in headers],
        },
    )

    # Fingerprint collection (breakpoint 2)
    trace.emit(MessageName.FINGERPRINT_SCRIPT_LOAD, {"server_transaction_id": stid, "script": FINGERPRINT_SCRIPT})
    reference = canonical_fingerprint_string(request.machine)
    collected = encode_fingerprint(reference, stid)
    post = ProtocolMessage.create(
        trace.next_step,
        MessageName.FINGERPRINT_POST,
        {"server_transaction_id": stid, "fingerprint": collected.encoded},
    )
    post = trace.append(interceptor.on_fingerprint_post(post))

    # The ACS compares the posted fingerprint with the holder's machine
    received = decode_fingerprint(collected.model_copy(update={"encoded": post.payload["fingerprint"]}))
    machine_data = int(received != reference)
    x = code_request(request, machine_data=machine_data)

    trace.emit(
        MessageName.AREQ,
        {
            "server_transaction_id": stid,
            "card_id": request.card.card_id,
            "website": request.website.value,
            "value_usd": request.value_usd,
            "origin_region": request.origin_region,
            "fingerprint_digest": hashlib.sha256(received.encode("utf-8")).hexdigest(),
        },
    )

    decision = engine.assess(x, risk_rng)
    challenged = decision.challenge_required
    _, declined, blocked = decision.draws
    disposition = _disposition(Verdict.CHALLENGE if challenged else decision.verdict)
    trace.emit(
        MessageName.ARES,
        {"server_transaction_id": stid, "trans_status": disposition.value},
        disposition=disposition,
    )

    otp_attempts = 0
    otp_passed = True
    if challenged:
        trace.emit(MessageName.CREQ, {"server_transaction_id": stid})
        otp_passed = False
        while otp_attempts < settings.OTP_MAX_ATTEMPTS and not otp_passed:
            otp_attempts += 1
            otp = f"{int(otp_rng.integers(0, 10 ** settings.OTP_DIGITS)):0{settings.OTP_DIGITS}d}"
            trace.emit(
                MessageName.CHALLENGE_PROMPT,
                {"server_transaction_id": stid, "attempt": otp_attempts, "otp_digest": hashlib.sha256(otp.encode()).hexdigest()},
            )
            answer = responder(otp_attempts, otp)
            otp_passed = answer == otp
            trace.emit(
                MessageName.CHALLENGE_RESPONSE,
                {"server_transaction_id": stid, "attempt": otp_attempts, "correct": otp_passed},
            )

        status = Disposition.AUTHENTICATED.value if otp_passed else Disposition.NOT_AUTHENTICATED.value
        digest = auth_hash(stid, status)
        trace.emit(
            MessageName.RREQ,
            {"server_transaction_id": stid, "trans_status": status, "auth_hash": digest},
            auth_hash=digest,
        )
        trace.emit(MessageName.RRES, {"server_transaction_id": stid, "received": True})

    declined = bool(declined or blocked or not otp_passed)
    accepted = not declined

    if challenged:
        final = Disposition.AUTHENTICATED if accepted else (
            Disposition.REJECTED if blocked else Disposition.NOT_AUTHENTICATED
        )
        trace.emit(MessageName.CRES, {"server_transaction_id": stid, "trans_status": final.value})

    if accepted:
        trace.emit(
            MessageName.AUTHORIZATION_REQUEST,
            {"server_transaction_id": stid, "card_id": request.card.card_id, "value_usd": request.value_usd},
        )

    outcome = TransactionOutcome(
        challenged=int(challenged),
        declined=int(declined),
        blocked=int(blocked),
        accepted=int(accepted),
        otp_attempts=otp_attempts,
    )
    logger.debug(
        f"Transaction {stid}: verdict={decision.verdict.value} challenged={outcome.challenged} "
        f"declined={outcome.declined} blocked={outcome.blocked}"
    )
    return outcome, trace.build()


def _index(trace: MessageTrace, name: MessageName) -> List[int]:
    return [i for i, message in enumerate(trace.messages) if message.name == name]


def verify_trace(trace: MessageTrace, outcome: Optional[TransactionOutcome] = None) -> TraceVerdict:
    """Check a trace against the 3DS 2.0 ordering rules; violations are returned, never raised"""
    violations: List[str] = []
    messages = trace.messages

    steps = [message.step for message in messages]
    if any(b <= a for a, b in zip(steps, steps[1:])):
        violations.append("step indices not strictly increasing")

    for message in messages:
        if payload_digest(message.payload) != message.digest:
            violations.append(f"digest mismatch at step {message.step} ({message.name.value})")

    areq, ares = _index(trace, MessageName.AREQ), _index(trace, MessageName.ARES)
    creq, cres = _index(trace, MessageName.CREQ), _index(trace, MessageName.CRES)
    rreq, rres = _index(trace, MessageName.RREQ), _index(trace, MessageName.RRES)
    prompts = _index(trace, MessageName.CHALLENGE_PROMPT)
    responses = _index(trace, MessageName.CHALLENGE_RESPONSE)
    authorization = _index(trace, MessageName.AUTHORIZATION_REQUEST)

    if len(areq) != 1 or len(ares) != 1:
        violations.append("expected exactly one AReq and one ARes")
    elif ares[0] < areq[0]:
        violations.append("ARes precedes AReq")

    challenge_required = bool(ares) and messages[ares[0]].disposition == Disposition.CHALLENGE_REQUIRED
    if challenge_required and not creq:
        violations.append("challenge required but no CReq")
    if creq and not challenge_required:
        violations.append("CReq without challenge-required ARes")
    if cres and not creq:
        violations.append("unpaired challenge response")
    if creq and not cres:
        violations.append("CReq without CRes")

    if len(prompts) != len(responses) or any(r < p for p, r in zip(prompts, responses)):
        violations.append("unpaired challenge prompt")

    if rres and not rreq:
        violations.append("RRes without RReq")
    if creq and (not rreq or not rres):
        violations.append("challenge without results exchange")
    if rreq and rres and cres and not rreq[0] < rres[0] < cres[0]:
        violations.append("results messages out of order")

    if rreq:
        passed = bool(responses) and messages[responses[-1]].payload.get("correct") is True
        status = Disposition.AUTHENTICATED.value if passed else Disposition.NOT_AUTHENTICATED.value
        if messages[rreq[0]].auth_hash != auth_hash(trace.server_transaction_id, status):
            violations.append("hash mismatch")

    rejected = bool(ares) and messages[ares[0]].disposition in (Disposition.NOT_AUTHENTICATED, Disposition.REJECTED)
    challenge_failed = bool(cres) and messages[cres[0]].payload.get("trans_status") != Disposition.AUTHENTICATED.value
    if authorization and (rejected or challenge_failed):
        violations.append("authorization after failed authentication")
    if authorization and authorization[0] != len(messages) - 1:
        violations.append("AuthorizationRequest is not the final message")

    if outcome is not None:
        if bool(authorization) != bool(outcome.accepted):
            violations.append("AuthorizationRequest present iff accepted")
        if bool(creq and cres) != bool(outcome.challenged):
            violations.append("challenge messages present iff challenged")

    return TraceVerdict(violations=violations)


def format_trace_log(trace: MessageTrace) -> str:
    """One line per message: step index, message name, payload digest"""
    return "".join(f"{m.step}\t{m.name.value}\t{m.digest}\n" for m in trace.messages)
