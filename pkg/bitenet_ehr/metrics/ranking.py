# import libs
from collections import Counter, defaultdict
from typing import Dict, Iterable, List, Sequence, Set
import numpy as np


def pr_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """
    Average precision.

    Samples are ranked by descending score with ties kept in input order; AP
    is the mean over positives of the precision at each positive's rank.

    Raises
    ------
    ValueError
        Labels are all positive or all negative, or lengths differ.
    """
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    labels = np.asarray(labels).reshape(-1).astype(bool)
    if scores.shape != labels.shape:
        raise ValueError(f"{scores.size} scores for {labels.size} labels")
    positives = int(labels.sum())
    if positives == 0 or positives == labels.size:
        raise ValueError("average precision needs both positive and negative labels")

    order = np.argsort(-scores, kind="stable")
    hits = labels[order]
    ranks = np.arange(1, hits.size + 1)
    precision = np.cumsum(hits) / ranks
    return float(precision[hits].sum() / positives)


def rank_categories(probabilities: np.ndarray) -> np.ndarray:
    """Category ids by descending probability; ties by id."""
    return np.argsort(-np.asarray(probabilities), axis=-1, kind="stable")


def precision_at_k(ranked: Sequence[int], truth: Iterable[int], k: int) -> float:
    """
    ``|top-k ∩ truth| / min(k, |truth|)``.

    Raises
    ------
    ValueError
        ``k < 1`` or an empty truth set.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    truth = set(truth)
    if not truth:
        raise ValueError("precision@k needs a non-empty truth set")
    top = set(list(ranked)[:k])
    return len(top & truth) / min(k, len(truth))


def mean_precision_at_k(
    probabilities: np.ndarray,
    truths: Sequence[Set[int]],
    ks: Sequence[int]
) -> Dict[int, float]:
    """Dataset-level precision@k: the mean over samples, for each k."""
    ranked = rank_categories(probabilities)
    return {
        int(k): float(np.mean([precision_at_k(r, t, k) for r, t in zip(ranked, truths)]))
        for k in ks
    }


def precision_at_k_by_length(
    probabilities: np.ndarray,
    truths: Sequence[Set[int]],
    lengths: Sequence[int],
    k: int = 20
) -> Dict[int, float]:
    """Mean precision@k grouped by the number of visits in each prefix."""
    ranked = rank_categories(probabilities)
    groups: Dict[int, List[float]] = defaultdict(list)
    for r, t, n in zip(ranked, truths, lengths):
        groups[int(n)].append(precision_at_k(r, t, k))
    return {n: float(np.mean(v)) for n, v in sorted(groups.items())}


def marginal_frequency_scores(truths: Iterable[Set[int]], num_categories: int) -> np.ndarray:
    """Relative frequency of each category over training targets; a context-free baseline."""
    counts = Counter(c for t in truths for c in t)
    total = max(sum(counts.values()), 1)
    scores = np.zeros(num_categories, dtype=np.float64)
    for category, n in counts.items():
        scores[category] = n / total
    return scores
