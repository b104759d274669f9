"""
trace - run one transaction and print its message log
"""

import argparse
from typing import List

from loguru import logger

from app.commands.options import resolve_preset
from app.controllers.experiment_controller import ExperimentController
from app.models.protocol import TransactionRequest
from app.models.risk import PredictorVector
from app.services.fingerprint import canonical_fingerprint_string, decode_fingerprint, fingerprint_diff
from app.services.fixtures import recorded_fingerprint, recorded_names
from app.services.protocol import format_trace_log, run_transaction, verify_trace
from app.services.risk_engine import RiskEngine


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "trace",
        help="Print the message trace of one transaction",
        description="Run one design cell through the 3DS flow and print step, message and payload digest per line.",
    )
    parser.add_argument("--preset", default="published", help="Risk-model preset (default: published)")
    parser.add_argument("--seed", type=int, default=0, help="Transaction seed (default: 0)")
    parser.add_argument("--card", type=int, choices=[1, 2, 3, 4], default=1)
    parser.add_argument("--website", type=int, choices=[0, 1], default=0)
    parser.add_argument("--region", type=int, choices=[0, 1], default=0, help="1 = foreign origin")
    parser.add_argument("--value", type=int, choices=[0, 1], default=0, help="1 = high value")
    parser.add_argument("--machine-data", type=int, choices=[0, 1], default=0, help="1 = overwrite fingerprint")
    parser.add_argument("--fingerprint", choices=recorded_names(), default=None, help="Recorded fingerprint to inject")
    parser.set_defaults(handler=run)


def overwritten_tokens(request: TransactionRequest) -> List[str]:
    """Fingerprint tokens the replayed recording changes relative to the holder's machine"""
    if not request.machine_data_overwritten or request.replacement is None:
        return []
    original = canonical_fingerprint_string(request.machine)
    return list(fingerprint_diff(original, decode_fingerprint(request.replacement.payload)))


def run(args: argparse.Namespace) -> str:
    x = PredictorVector(
        machine_data=args.machine_data, value=args.value, region=args.region, website=args.website, card=args.card
    )
    request = ExperimentController.request_for(x, recorded_fingerprint(args.fingerprint))
    outcome, trace = run_transaction(request, RiskEngine(resolve_preset(args.preset)), args.seed)

    verdict = verify_trace(trace, outcome)
    for violation in verdict.violations:
        logger.warning(f"⚠️  Trace violation: {violation}")

    lines = format_trace_log(trace)
    tokens = overwritten_tokens(request)
    if tokens:
        logger.info(f"Fingerprint overwritten with '{request.replacement.source_label}': {', '.join(tokens)}")
        lines += f"# overwritten={','.join(tokens)}\n"
    return (
        lines
        + f"# challenged={outcome.challenged} declined={outcome.declined} blocked={outcome.blocked} "
        f"accepted={outcome.accepted} otp_attempts={outcome.otp_attempts} conformant={verdict.passed}\n"
    )
