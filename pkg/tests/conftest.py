# import libs
import json
from pathlib import Path
from typing import List, Sequence, Tuple
import numpy as np
import pytest
# local
from bitenet_ehr.ehr import (
    LabeledSample,
    PatientJourney,
    Visit,
    Vocabulary,
    build_vocabulary,
    make_readmission_samples
)
from bitenet_ehr.models import ModelConfig, SynthConfig
from bitenet_ehr.nn import Tensor

# NOTE: grad-check tolerance for float64 inputs
GRAD_TOL = 1e-4


def make_journey(patient_id: str, visits: Sequence[Tuple[Sequence[str], int, int]]) -> PatientJourney:
    """``visits`` as ``(codes, admission_day, discharge_day)`` triples."""
    return PatientJourney(
        patient_id=patient_id,
        visits=tuple(Visit(codes=tuple(c), admission_day=a, discharge_day=d) for c, a, d in visits),
    )


def write_journey_file(path: Path, records: List[dict]) -> Path:
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path


def leaf(rng: np.random.Generator, *shape, low: float = -1.0, high: float = 1.0) -> Tensor:
    return Tensor(rng.uniform(low, high, size=shape), requires_grad=True)


def weighted_sum(out: Tensor, seed: int = 99) -> Tensor:
    """Scalar objective ``sum(out * W)`` with fixed random ``W``."""
    weights = np.random.default_rng(seed).uniform(-1.0, 1.0, size=out.shape)
    return (out * weights).sum()


@pytest.fixture
def tiny_journeys() -> List[PatientJourney]:
    return [
        make_journey("p1", [
            (["dx:a", "dx:b"], 0, 2),
            (["dx:b", "px:x"], 20, 21),
            (["dx:c"], 100, 103),
        ]),
        make_journey("p2", [
            (["dx:a"], 5, 5),
            (["dx:c", "dx:d", "px:x"], 60, 62),
        ]),
        make_journey("p3", [
            (["dx:d"], 10, 12),
            (["dx:a", "dx:c"], 40, 41),
            (["dx:b"], 45, 45),
            (["dx:a", "dx:d"], 300, 305),
        ]),
    ]


@pytest.fixture
def tiny_vocab(tiny_journeys) -> Vocabulary:
    return build_vocabulary(tiny_journeys)


@pytest.fixture
def tiny_samples(tiny_journeys) -> List[LabeledSample]:
    return make_readmission_samples(tiny_journeys)


@pytest.fixture
def tiny_config() -> ModelConfig:
    return ModelConfig(d=8, layers=1, heads=2, dropout=0.0, interval_table_days=100)


@pytest.fixture
def small_synth() -> SynthConfig:
    return SynthConfig(
        num_patients=300,
        vocab_dx=30,
        vocab_px=5,
        num_categories=5,
        visits_min=2,
        visits_max=5,
        codes_min=2,
        codes_max=5,
        procedures_max=1,
        trigger_codes=3,
        cluster_count=5,
        seed=7,
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
