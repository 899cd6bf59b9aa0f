from .generator import SynthFiles, generate, JOURNEYS_FILE, CATEGORIES_FILE, TRUTH_FILE
from .truth import (
    PlantedTruth,
    load_truth,
    planted_pairs,
    within_cluster_pairs,
    trigger_oracle_scores,
    infer_primary_cluster,
    bayes_category_scores
)

__all__ = [
    "SynthFiles",
    "generate",
    "JOURNEYS_FILE",
    "CATEGORIES_FILE",
    "TRUTH_FILE",
    "PlantedTruth",
    "load_truth",
    "planted_pairs",
    "within_cluster_pairs",
    "trigger_oracle_scores",
    "infer_primary_cluster",
    "bayes_category_scores",
]
