"""
Services module - protocol simulation, interception and the risk engine
"""
from app.services.fingerprint import canonical_fingerprint_string, decode_fingerprint, encode_fingerprint
from app.services.interceptor import Interceptor, build_request
from app.services.presets import get_preset, list_presets
from app.services.protocol import run_transaction, verify_trace
from app.services.risk_engine import RiskEngine, assess, probability

__all__ = [
    "canonical_fingerprint_string",
    "decode_fingerprint",
    "encode_fingerprint",
    "Interceptor",
    "build_request",
    "get_preset",
    "list_presets",
    "run_transaction",
    "verify_trace",
    "RiskEngine",
    "assess",
    "probability",
]
