# import libs
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union
import numpy as np
from pydantic import BaseModel, Field, ValidationError
# local
from ..ehr import LabeledSample
from ..errors import IngestionError
from ..utils import read_json


class PlantedTruth(BaseModel):
    """Ground truth the generator planted; read only by evaluation code."""
    seed: int
    trigger_codes: List[str]
    clusters: List[List[str]] = Field(..., description="dx codes of each planted cluster")
    cluster_categories: List[str] = Field(..., description="Category name of each cluster")
    pairs: List[Tuple[str, str]] = Field(..., description="All within-cluster code pairs")
    cluster_affinity: float
    transition_strength: float
    trigger_rate: float
    trigger_readm_rate: float
    readm_base_rate: float
    interval_effect: bool
    interval_threshold_days: int

    def cluster_of(self) -> Dict[str, int]:
        return {code: c for c, members in enumerate(self.clusters) for code in members}

    @property
    def num_dx_codes(self) -> int:
        return sum(len(m) for m in self.clusters)


def within_cluster_pairs(clusters: Sequence[Sequence[str]]) -> List[Tuple[str, str]]:
    """Every unordered pair inside a cluster, as ``(a, b)`` with ``a < b``, sorted."""
    pairs = [
        (a, b)
        for members in clusters
        for a, b in combinations(sorted(members), 2)
    ]
    return sorted(pairs)


def load_truth(path: Union[str, Path]) -> PlantedTruth:
    path = Path(path)
    if not path.is_file():
        raise IngestionError("truth file not found", path=path)
    try:
        doc = read_json(path)
        doc.pop("version", None)
        return PlantedTruth.model_validate(doc)
    except (ValueError, ValidationError) as e:
        raise IngestionError(f"malformed truth file: {e}", path=path) from e


def planted_pairs(truth: Union[PlantedTruth, str, Path]) -> Tuple[List[Tuple[str, str]], Dict[str, int]]:
    """
    NNS ground truth and cluster labels.

    Returns
    -------
    tuple
        Within-cluster pairs and a ``code -> cluster id`` map covering every
        diagnosis code once.
    """
    if not isinstance(truth, PlantedTruth):
        truth = load_truth(truth)
    return within_cluster_pairs(truth.clusters), truth.cluster_of()


# SECTION: oracle baselines
def trigger_oracle_scores(truth: PlantedTruth, samples: Sequence[LabeledSample]) -> np.ndarray:
    """
    Readmission probability implied by the planted trigger rule for the last
    visit of each prefix.
    """
    triggers = set(truth.trigger_codes)
    scores = np.empty(len(samples), dtype=np.float64)
    for i, sample in enumerate(samples):
        visits = sample.journey_prefix.visits
        last = visits[-1]
        active = bool(triggers.intersection(last.codes))
        if truth.interval_effect:
            active = active and last.admission_day - visits[0].admission_day >= truth.interval_threshold_days
        scores[i] = truth.trigger_readm_rate if active else truth.readm_base_rate
    return scores


def infer_primary_cluster(truth: PlantedTruth, codes: Sequence[str]) -> int:
    """Cluster holding most of ``codes``; ties go to the lower cluster id."""
    cluster_of = truth.cluster_of()
    counts = np.zeros(len(truth.clusters), dtype=np.int64)
    for code in codes:
        if code in cluster_of:
            counts[cluster_of[code]] += 1
    return int(np.argmax(counts))


def bayes_category_scores(
    truth: PlantedTruth,
    categories: Sequence[str],
    samples: Sequence[LabeledSample]
) -> np.ndarray:
    """
    Expected share of next-visit diagnosis draws per category under the
    generator, given the primary cluster inferred from each prefix's last visit.

    Returns
    -------
    np.ndarray
        ``[N, C]`` scores aligned with ``categories``.
    """
    K = len(truth.clusters)
    category_index = {c: i for i, c in enumerate(categories)}
    cluster_cat = np.array([category_index[c] for c in truth.cluster_categories])
    total_codes = truth.num_dx_codes
    codes_per_cat = np.zeros(len(categories), dtype=np.float64)
    for c, members in enumerate(truth.clusters):
        codes_per_cat[cluster_cat[c]] += len(members)
    triggers_per_cat = np.zeros(len(categories), dtype=np.float64)
    cluster_of = truth.cluster_of()
    for code in truth.trigger_codes:
        triggers_per_cat[cluster_cat[cluster_of[code]]] += 1

    a, s = truth.cluster_affinity, truth.transition_strength
    scores = np.zeros((len(samples), len(categories)), dtype=np.float64)
    for i, sample in enumerate(samples):
        primary = infer_primary_cluster(truth, sample.journey_prefix.visits[-1].codes)
        next_primary = np.full(K, (1.0 - s) / K)
        next_primary[(primary + 1) % K] += s
        by_category = np.bincount(cluster_cat, weights=next_primary, minlength=len(categories))
        scores[i] = (
            a * by_category
            + (1.0 - a) * codes_per_cat / total_codes
            + truth.trigger_rate * triggers_per_cat / len(truth.trigger_codes)
        )
    return scores
