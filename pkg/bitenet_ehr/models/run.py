# import libs
from pathlib import Path
from typing import List, Literal, Optional
from pydantic import BaseModel, ConfigDict, Field, field_validator
# local
from .config import DataConfig, ModelConfig, SynthConfig, TrainConfig


class PathsConfig(BaseModel):
    """Input and output locations of a run."""
    model_config = ConfigDict(extra="forbid")

    journeys: Optional[Path] = Field(
        default=None, description="Journey line file (JSON lines)")
    categories: Optional[Path] = Field(
        default=None, description="Category map (code<TAB>category)")
    truth: Optional[Path] = Field(
        default=None, description="Planted-truth file with NNS pairs and cluster labels")
    params: Optional[Path] = Field(
        default=None, description="Parameter file to read; defaults to <output_dir>/params.bin")
    output_dir: Optional[Path] = Field(
        default=None, description="Where outputs go; Settings.output_dir when unset")


class RunConfig(BaseModel):
    """
    Everything one CLI command needs.

    Every field has a default and unknown keys are rejected, so a config file
    with a typo fails loudly.
    """
    model_config = ConfigDict(extra="forbid")

    data: DataConfig = Field(default_factory=DataConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    synth: SynthConfig = Field(default_factory=SynthConfig)
    paths: PathsConfig = Field(default_factory=PathsConfig)
    seeds: List[int] = Field(
        default_factory=list,
        description="Training seeds; empty means [train.seed]")
    patients: List[str] = Field(
        default_factory=list, description="Patient ids to explain")
    force: bool = Field(default=False, description="Overwrite existing outputs")
    nns_metric: Literal["euclidean", "cosine"] = Field(
        default="euclidean", description="Distance for nearest-neighbour search")

    @field_validator("seeds", "patients", mode="before")
    @classmethod
    def _split_list(cls, value):
        if isinstance(value, str):
            return [part.strip() for part in value.split(",") if part.strip()]
        if isinstance(value, (int, float)):
            return [value]
        return value

    @property
    def run_seeds(self) -> List[int]:
        return list(self.seeds) or [self.train.seed]
