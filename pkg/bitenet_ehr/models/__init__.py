from .config import ModelConfig, TrainConfig, DataConfig, SynthConfig
from .run import PathsConfig, RunConfig
from .report import (
    MetricReport,
    MetricSummary,
    AggregateReport,
    EpochLog,
    CodeImportance,
    VisitExplanation,
    PatientExplanation
)

__all__ = [
    "ModelConfig",
    "TrainConfig",
    "DataConfig",
    "SynthConfig",
    "PathsConfig",
    "RunConfig",
    "MetricReport",
    "MetricSummary",
    "AggregateReport",
    "EpochLog",
    "CodeImportance",
    "VisitExplanation",
    "PatientExplanation",
]
