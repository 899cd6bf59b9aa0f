from .records import (
    Vocabulary,
    Visit,
    PatientJourney,
    IntervalVector,
    LabeledSample,
    CategoryMap
)
from .ingest import ingest_journeys, read_journey_records
from .categories import load_category_map, check_total
from .preprocess import (
    apply_dataset_mode,
    build_vocabulary,
    code_frequencies,
    diagnosis_codes,
    preprocess
)
from .samples import compute_intervals, make_readmission_samples, make_diagnosis_samples
from .batching import PaddedBatch, pad_samples, batch

__all__ = [
    "Vocabulary",
    "Visit",
    "PatientJourney",
    "IntervalVector",
    "LabeledSample",
    "CategoryMap",
    "ingest_journeys",
    "read_journey_records",
    "load_category_map",
    "check_total",
    "apply_dataset_mode",
    "build_vocabulary",
    "code_frequencies",
    "diagnosis_codes",
    "preprocess",
    "compute_intervals",
    "make_readmission_samples",
    "make_diagnosis_samples",
    "PaddedBatch",
    "pad_samples",
    "batch",
]
