# import libs
from typing import Literal, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
# local
from ..errors import ConfigError


class ModelConfig(BaseModel):
    """Architecture of one BiteNet network."""
    model_config = ConfigDict(extra="forbid")

    d: int = Field(
        default=128, ge=1,
        description="Embedding dimension shared by codes, visits and intervals"
    )
    layers: int = Field(
        default=2, ge=1,
        description="Depth N of every MasEnc stack"
    )
    heads: int = Field(
        default=4, ge=1,
        description="Number of attention heads h"
    )
    dropout: float = Field(
        default=0.1, ge=0.0, lt=1.0,
        description="Dropout rate on sublayer outputs"
    )
    interval_table_days: int = Field(
        default=11 * 365, ge=1,
        description="Rows m_days of the interval lookup table"
    )
    variant: Literal["full", "attention", "diremask", "interval"] = Field(
        default="full",
        description="Full model or one of the ablations"
    )
    task: Literal["readmission", "diagnosis"] = Field(
        default="readmission",
        description="Prediction task the head is built for"
    )
    num_categories: Optional[int] = Field(
        default=None, ge=1,
        description="Number of diagnosis categories (diagnosis task only)"
    )
    direction_swap: bool = Field(
        default=False,
        description="Swap the orientation of the forward and backward masks"
    )
    diagnosis_head: Literal["sigmoid", "softmax"] = Field(
        default="sigmoid",
        description="Multi-label sigmoid head or categorical softmax head"
    )

    @model_validator(mode="after")
    def _check_shapes(self) -> "ModelConfig":
        if self.d % self.heads != 0:
            raise ValueError(
                f"d={self.d} is not divisible by heads={self.heads}")
        return self

    @property
    def output_width(self) -> int:
        """1 logit for readmission, one per category for diagnosis."""
        if self.task == "readmission":
            return 1
        if self.num_categories is None:
            raise ConfigError("diagnosis head needs num_categories")
        return int(self.num_categories)

    @property
    def uses_interval(self) -> bool:
        return self.variant != "interval"

    @property
    def uses_pooling(self) -> bool:
        return self.variant != "attention"


class TrainConfig(BaseModel):
    """Optimisation settings."""
    model_config = ConfigDict(extra="forbid")

    batch_size: int = Field(default=32, ge=1, description="Minibatch size")
    epochs: int = Field(default=10, ge=1, description="Training epochs")
    learning_rate: float = Field(default=1e-3, ge=0.0, description="RMSprop step size")
    rmsprop_decay: float = Field(default=0.9, ge=0.0, lt=1.0, description="RMSprop decay")
    rmsprop_eps: float = Field(default=1e-8, gt=0.0, description="RMSprop epsilon")
    split_ratios: Tuple[float, float, float] = Field(
        default=(0.8, 0.1, 0.1),
        description="Train/validation/test ratios at patient level"
    )
    seed: int = Field(default=0, description="Seed for init, shuffling and dropout")

    @field_validator("split_ratios", mode="before")
    @classmethod
    def _parse_ratios(cls, value):
        if isinstance(value, str):
            value = [part for part in value.replace("/", ",").split(",") if part.strip()]
        return value

    @field_validator("split_ratios")
    @classmethod
    def _check_ratios(cls, value):
        if any(r <= 0 for r in value):
            raise ValueError(f"split ratios must be positive: {value}")
        if abs(sum(value) - 1.0) > 1e-9:
            raise ValueError(f"split ratios must sum to 1: {value}")
        return value


class DataConfig(BaseModel):
    """Ingestion and preprocessing knobs."""
    model_config = ConfigDict(extra="forbid")

    mode: Literal["dx", "dxtx"] = Field(
        default="dxtx", description="Diagnosis codes only, or diagnoses and procedures")
    min_visits: int = Field(default=2, ge=1, description="Minimum visits per patient")
    min_code_freq: int = Field(default=5, ge=1, description="Minimum corpus frequency of a code")
    window_days: int = Field(default=30, ge=0, description="Readmission window in days")


class SynthConfig(BaseModel):
    """Synthetic cohort with planted, recoverable structure."""
    model_config = ConfigDict(extra="forbid")

    num_patients: int = Field(default=5000, ge=1, description="Patients to generate")
    vocab_dx: int = Field(default=200, ge=2, description="Number of diagnosis codes")
    vocab_px: int = Field(default=40, ge=0, description="Number of procedure codes")
    num_categories: int = Field(default=20, ge=1, description="Diagnosis categories")
    visits_min: int = Field(default=2, ge=1, description="Fewest visits per patient")
    visits_max: int = Field(default=8, ge=1, description="Most visits per patient")
    codes_min: int = Field(default=3, ge=1, description="Fewest diagnosis codes per visit")
    codes_max: int = Field(default=10, ge=1, description="Most diagnosis codes per visit")
    procedures_max: int = Field(default=2, ge=0, description="Most procedure codes per visit")
    trigger_codes: int = Field(default=5, ge=1, description="Readmission-driving codes")
    trigger_rate: float = Field(
        default=0.3, gt=0.0, lt=1.0,
        description="Chance a visit receives an extra trigger code")
    trigger_readm_rate: float = Field(
        default=0.9, gt=0.0, lt=1.0,
        description="Readmission probability after a trigger-bearing visit")
    cluster_count: int = Field(default=20, ge=1, description="Planted code clusters")
    cluster_affinity: float = Field(
        default=0.8, gt=0.0, lt=1.0,
        description="Chance a code is drawn from the visit's primary cluster")
    transition_strength: float = Field(
        default=0.8, gt=0.0, lt=1.0,
        description="Chance the next visit's primary cluster follows next(c)")
    readm_base_rate: float = Field(
        default=0.02, gt=0.0, lt=1.0,
        description="Readmission probability without a trigger")
    interval_effect: bool = Field(
        default=False,
        description="Triggers only act when the visit is late enough in the journey")
    interval_threshold_days: int = Field(
        default=60, ge=0,
        description="Days after the first visit from which triggers act")
    span_days: int = Field(default=730, ge=1, description="Calendar span of first admissions")
    seed: int = Field(default=0, description="Generator seed")

    @model_validator(mode="after")
    def _check_bounds(self) -> "SynthConfig":
        if self.visits_min > self.visits_max:
            raise ValueError("visits_min must not exceed visits_max")
        if self.codes_min > self.codes_max:
            raise ValueError("codes_min must not exceed codes_max")
        if self.trigger_codes >= self.vocab_dx:
            raise ValueError("trigger_codes must be smaller than vocab_dx")
        if self.cluster_count > self.vocab_dx:
            raise ValueError("cluster_count must not exceed vocab_dx")
        if self.cluster_count < self.num_categories:
            raise ValueError("cluster_count must be at least num_categories")
        if self.codes_max > self.vocab_dx:
            raise ValueError("codes_max must not exceed vocab_dx")
        if self.procedures_max > self.vocab_px:
            raise ValueError("procedures_max must not exceed vocab_px")
        return self
