# import libs
from typing import Optional
import numpy as np
# local
from ..config import probability_clamp
from ..ehr import PaddedBatch
from ..errors import ShapeError
from ..models import ModelConfig
from ..nn import Tensor


def bce_loss(
    probabilities: Tensor,
    labels: np.ndarray,
    valid: Optional[np.ndarray] = None
) -> Tensor:
    """
    Mean binary cross-entropy over valid label slots.

    Parameters
    ----------
    probabilities : Tensor
        Predicted probabilities, clamped to ``[1e-7, 1 - 1e-7]``.
    labels : np.ndarray
        0/1 targets with the same shape.
    valid : np.ndarray, optional
        Boolean mask of slots that count; all slots by default.

    Returns
    -------
    Tensor
        Scalar loss.
    """
    labels = np.asarray(labels, dtype=probabilities.dtype)
    if labels.shape != probabilities.shape:
        raise ShapeError(f"labels {labels.shape} do not match probabilities {probabilities.shape}")
    if valid is None:
        valid = np.ones(labels.shape, dtype=bool)
    gate = np.asarray(valid, dtype=probabilities.dtype)
    count = max(float(gate.sum()), 1.0)

    p = probabilities.clip(probability_clamp, 1.0 - probability_clamp)
    per_slot = -(p.log() * labels + (1.0 - p).log() * (1.0 - labels))
    return (per_slot * gate).sum() * (1.0 / count)


def soft_cross_entropy(probabilities: Tensor, targets: np.ndarray) -> Tensor:
    """
    Cross-entropy of a softmax head against multi-hot targets spread uniformly
    over their positive categories; mean over samples.
    """
    targets = np.asarray(targets, dtype=probabilities.dtype)
    if targets.shape != probabilities.shape:
        raise ShapeError(f"targets {targets.shape} do not match probabilities {probabilities.shape}")
    totals = np.maximum(targets.sum(axis=-1, keepdims=True), 1.0)
    weights = targets / totals
    p = probabilities.clip(probability_clamp, 1.0)
    return -(p.log() * weights).sum() * (1.0 / targets.shape[0])


def task_loss(logits: Tensor, batch: PaddedBatch, config: ModelConfig) -> Tensor:
    """Loss of the configured head on a batch."""
    if config.task == "readmission":
        if batch.readm_labels is None:
            raise ShapeError("readmission batch without labels")
        probabilities = logits.sigmoid().reshape(batch.size)
        return bce_loss(probabilities, batch.readm_labels)

    if batch.dx_targets is None:
        raise ShapeError("diagnosis batch without targets")
    if config.diagnosis_head == "softmax":
        return soft_cross_entropy(logits.softmax(axis=-1), batch.dx_targets)
    return bce_loss(logits.sigmoid(), batch.dx_targets)
