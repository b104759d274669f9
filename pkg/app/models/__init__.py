"""
Models module - domain types of the lab
"""

from app.models.fingerprint import FingerprintPayload, MachineProfile, Platform, Plugin
from app.models.interception import Breakpoint, BreakpointLocation, Mutation, RecordedFingerprint
from app.models.protocol import (
    CardNetwork,
    CardProfile,
    CardState,
    Disposition,
    MessageName,
    MessageTrace,
    ProtocolMessage,
    TraceVerdict,
    TransactionOutcome,
    TransactionRequest,
    Website,
)
from app.models.risk import (
    PREDICTORS,
    RESPONSES,
    Decision,
    LogisticModel,
    ModelSource,
    PredictorVector,
    RiskModels,
    Verdict,
)
from app.models.dataset import CSV_COLUMNS, Dataset, Observation
from app.models.reports import (
    CvReport,
    DiagnosticsReport,
    FitResult,
    GofReport,
)
from app.models.experiment import DesignSpec, ExecutionMode, ReplicationReport, ResponseSection

__all__ = [
    "FingerprintPayload",
    "MachineProfile",
    "Platform",
    "Plugin",
    "Breakpoint",
    "BreakpointLocation",
    "Mutation",
    "RecordedFingerprint",
    "CardNetwork",
    "CardProfile",
    "CardState",
    "Disposition",
    "MessageName",
    "MessageTrace",
    "ProtocolMessage",
    "TraceVerdict",
    "TransactionOutcome",
    "TransactionRequest",
    "Website",
    "PREDICTORS",
    "RESPONSES",
    "Decision",
    "LogisticModel",
    "ModelSource",
    "PredictorVector",
    "RiskModels",
    "Verdict",
    "CSV_COLUMNS",
    "Dataset",
    "Observation",
    "CvReport",
    "DiagnosticsReport",
    "FitResult",
    "GofReport",
    "DesignSpec",
    "ExecutionMode",
    "ReplicationReport",
    "ResponseSection",
]
