from .ranking import (
    pr_auc,
    rank_categories,
    precision_at_k,
    mean_precision_at_k,
    precision_at_k_by_length,
    marginal_frequency_scores
)
from .embedding import (
    CodeEmbeddings,
    extract_code_embeddings,
    write_embeddings,
    read_embeddings,
    neighbour_sets,
    nns_accuracy_at_k,
    kmeans,
    inertia,
    nmi
)
from .report import (
    predict_samples,
    selection_metric,
    evaluate,
    evaluate_embeddings,
    aggregate_reports
)

__all__ = [
    "pr_auc",
    "rank_categories",
    "precision_at_k",
    "mean_precision_at_k",
    "precision_at_k_by_length",
    "marginal_frequency_scores",
    "CodeEmbeddings",
    "extract_code_embeddings",
    "write_embeddings",
    "read_embeddings",
    "neighbour_sets",
    "nns_accuracy_at_k",
    "kmeans",
    "inertia",
    "nmi",
    "predict_samples",
    "selection_metric",
    "evaluate",
    "evaluate_embeddings",
    "aggregate_reports",
]
