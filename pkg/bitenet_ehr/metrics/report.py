# import libs
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import numpy as np
# local
from .ranking import mean_precision_at_k, precision_at_k_by_length, pr_auc
from .embedding import CodeEmbeddings, DistanceMetric, kmeans, nmi, nns_accuracy_at_k
from ..config import nns_ks, precision_ks
from ..ehr import LabeledSample, Vocabulary, batch
from ..models import AggregateReport, MetricReport, MetricSummary
from ..network import BiteNet

# NOTE: logger
logger = logging.getLogger(__name__)


def predict_samples(
    model: BiteNet,
    samples: Sequence[LabeledSample],
    vocab: Vocabulary,
    batch_size: int = 32
) -> np.ndarray:
    """Probabilities ``[N, out]`` for ``samples`` in their input order."""
    batches = batch(samples, vocab, batch_size, shuffle_seed=None,
                    num_categories=model.config.num_categories)
    traces = model.predict_many(batches)
    return np.concatenate([t.probabilities for t in traces], axis=0)


def selection_metric(
    model: BiteNet,
    samples: Sequence[LabeledSample],
    vocab: Vocabulary,
    batch_size: int = 32
) -> Tuple[str, Optional[float]]:
    """
    Validation metric used for model selection: PR-AUC for readmission,
    precision@20 for diagnosis. ``None`` when the split cannot score it.
    """
    name = "pr_auc" if model.config.task == "readmission" else "precision@20"
    if not samples:
        return name, None
    probabilities = predict_samples(model, samples, vocab, batch_size)
    try:
        if model.config.task == "readmission":
            return name, pr_auc(probabilities[:, 0], [s.readm_label for s in samples])
        truths = [set(s.dx_labels) for s in samples]
        return name, mean_precision_at_k(probabilities, truths, [20])[20]
    except ValueError as e:
        logger.warning(f"validation {name} not computable: {e}")
        return name, None


def evaluate(
    model: BiteNet,
    samples: Sequence[LabeledSample],
    vocab: Vocabulary,
    batch_size: int = 32,
    ks: Sequence[int] = precision_ks
) -> MetricReport:
    """
    Supervised metrics of ``model`` on ``samples``.

    Readmission reports PR-AUC; diagnosis reports precision@k for every ``k``
    and precision@20 grouped by prefix length.
    """
    task = model.config.task
    if not samples:
        logger.warning("evaluating on an empty split")
        return MetricReport(task=task, num_samples=0)
    probabilities = predict_samples(model, samples, vocab, batch_size)

    if task == "readmission":
        labels = [s.readm_label for s in samples]
        try:
            value = pr_auc(probabilities[:, 0], labels)
        except ValueError as e:
            logger.warning(f"PR-AUC not computable: {e}")
            value = None
        return MetricReport(task=task, num_samples=len(samples), pr_auc=value)

    truths = [set(s.dx_labels) for s in samples]
    lengths = [len(s.journey_prefix) for s in samples]
    return MetricReport(
        task=task,
        num_samples=len(samples),
        precision_at_k=mean_precision_at_k(probabilities, truths, ks),
        precision_at_20_by_length=precision_at_k_by_length(probabilities, truths, lengths, 20),
    )


def evaluate_embeddings(
    embeddings: CodeEmbeddings,
    pairs: Iterable[Tuple[str, str]],
    labels: Dict[str, int],
    seed: int,
    ks: Sequence[int] = nns_ks,
    metric: DistanceMetric = "euclidean"
) -> Tuple[Dict[int, float], Optional[float]]:
    """
    NNS accuracy@k over ``pairs`` and NMI between k-means clusters and
    ``labels``, with k the number of distinct labels among embedded codes.

    Only codes present in both the embedding and ``labels`` take part in the
    clustering.
    """
    pairs = list(pairs)
    n = len(embeddings.codes)
    nns = {int(k): nns_accuracy_at_k(embeddings, pairs, k, metric) for k in ks if k < n}

    labelled = [c for c in embeddings.codes if c in labels]
    score = None
    if labelled:
        subset = embeddings.subset(labelled)
        truth = np.array([labels[c] for c in labelled])
        clusters = len(set(truth.tolist()))
        assign = kmeans(subset.matrix, clusters, seed)
        score = nmi(assign, truth)
    logger.info(f"embedding metrics over {n} codes: nns={nns} nmi={score}")
    return nns, score


def aggregate_reports(reports: Sequence[MetricReport], seeds: Sequence[int]) -> AggregateReport:
    """Mean and population std of every metric across runs."""
    if not reports:
        raise ValueError("no reports to aggregate")
    keys = sorted({key for r in reports for key in r.flat()})
    metrics = {}
    for key in keys:
        values = np.array([r.flat()[key] for r in reports if key in r.flat()], dtype=np.float64)
        metrics[key] = MetricSummary(mean=float(values.mean()), std=float(values.std(ddof=0)))
    return AggregateReport(task=reports[0].task, seeds=list(seeds), metrics=metrics, runs=list(reports))
