# import libs
import logging
from typing import List, Optional, Sequence
from pydantic import BaseModel, ConfigDict
# local
from .splits import split
from ..config import default_window_days
from ..ehr import (
    CategoryMap,
    LabeledSample,
    PatientJourney,
    Vocabulary,
    make_diagnosis_samples,
    make_readmission_samples
)
from ..errors import ConfigError

# NOTE: logger
logger = logging.getLogger(__name__)


class SplitDataset(BaseModel):
    """Labelled samples of one task, split by patient, plus their vocabulary."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    task: str
    vocab: Vocabulary
    train: List[LabeledSample]
    valid: List[LabeledSample]
    test: List[LabeledSample]
    num_categories: Optional[int] = None
    category_map: Optional[CategoryMap] = None

    @property
    def samples(self) -> List[LabeledSample]:
        return self.train + self.valid + self.test


def build_dataset(
    journeys: Sequence[PatientJourney],
    vocab: Vocabulary,
    task: str,
    ratios: Sequence[float],
    seed: int,
    window_days: int = default_window_days,
    category_map: Optional[CategoryMap] = None
) -> SplitDataset:
    """
    Cut labelled samples from preprocessed journeys and split them by patient.

    Raises
    ------
    ConfigError
        Diagnosis task without a category map.
    """
    if task == "diagnosis":
        if category_map is None:
            raise ConfigError("task=diagnosis requires a category map (paths.categories)")
        samples = make_diagnosis_samples(journeys, category_map)
        num_categories = category_map.num_categories
    else:
        samples = make_readmission_samples(journeys, window_days)
        num_categories = None

    train, valid, test = split(samples, ratios, seed)
    return SplitDataset(
        task=task,
        vocab=vocab,
        train=train,
        valid=valid,
        test=test,
        num_categories=num_categories,
        category_map=category_map,
    )
