# import libs
from typing import Dict, List, Optional
from pydantic import BaseModel, Field, field_validator


class MetricReport(BaseModel):
    """Evaluation of one model on one split."""
    task: str = Field(..., description="readmission or diagnosis")
    num_samples: int = Field(0, description="Samples evaluated")
    pr_auc: Optional[float] = Field(None, description="Average precision (readmission)")
    precision_at_k: Dict[int, float] = Field(
        default_factory=dict, description="Diagnosis precision@k")
    precision_at_20_by_length: Dict[int, float] = Field(
        default_factory=dict,
        description="Diagnosis precision@20 grouped by prefix visit count")
    nns_accuracy_at_k: Dict[int, float] = Field(
        default_factory=dict, description="Nearest-neighbour accuracy@k")
    nmi: Optional[float] = Field(None, description="k-means clustering NMI")

    @field_validator("pr_auc", "nmi")
    @classmethod
    def _unit_scalar(cls, value):
        if value is not None and not 0.0 <= value <= 1.0:
            raise ValueError(f"metric outside [0, 1]: {value}")
        return value

    @field_validator("precision_at_k", "precision_at_20_by_length", "nns_accuracy_at_k")
    @classmethod
    def _unit_map(cls, value):
        for k, v in value.items():
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"metric @{k} outside [0, 1]: {v}")
        return value

    def flat(self) -> Dict[str, float]:
        """Flatten to ``{"pr_auc": .., "precision@5": .., ...}``."""
        out: Dict[str, float] = {}
        if self.pr_auc is not None:
            out["pr_auc"] = self.pr_auc
        for k, v in sorted(self.precision_at_k.items()):
            out[f"precision@{k}"] = v
        for k, v in sorted(self.nns_accuracy_at_k.items()):
            out[f"nns_accuracy@{k}"] = v
        if self.nmi is not None:
            out["nmi"] = self.nmi
        return out


class MetricSummary(BaseModel):
    mean: float
    std: float


class AggregateReport(BaseModel):
    """Mean and std per metric across seeds."""
    task: str
    seeds: List[int]
    metrics: Dict[str, MetricSummary]
    runs: List[MetricReport]


class EpochLog(BaseModel):
    """One line of the training log."""
    epoch: int = Field(..., description="1-based epoch")
    train_loss: float = Field(..., description="Mean training loss over samples")
    valid_metric: Optional[float] = Field(
        None, description="Validation selection metric; None when it cannot be computed")
    valid_loss: Optional[float] = Field(
        None, description="Mean validation loss; breaks ties in the validation metric")
    metric_name: str = Field(..., description="pr_auc or precision@20")
    best: bool = Field(False, description="Whether this epoch is the best so far")


class CodeImportance(BaseModel):
    code: str
    weight: float


class VisitExplanation(BaseModel):
    index: int = Field(..., description="0-based visit position")
    admission_day: int
    importance: float = Field(..., description="Mean of forward and backward weights")
    importance_fw: float
    importance_bw: float
    codes: List[CodeImportance]


class PatientExplanation(BaseModel):
    patient_id: str
    task: str
    probabilities: List[float]
    visits: List[VisitExplanation]
