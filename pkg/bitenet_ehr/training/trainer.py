# import libs
import logging
import math
from pathlib import Path
from typing import List, Optional, Union
import numpy as np
# local
from .dataset import SplitDataset
from .losses import task_loss
from .optimizer import RMSprop
from ..config import get_config
from ..ehr import batch
from ..errors import ConfigError, DivergenceError
from ..metrics import selection_metric
from ..models import EpochLog, ModelConfig, TrainConfig
from ..network import BiteNet, forward, init_params
from ..utils import write_jsonl

# NOTE: logger
logger = logging.getLogger(__name__)


class TrainResult:
    """Best model of a training run and its per-epoch log."""

    def __init__(self, model: BiteNet, log: List[EpochLog], best_epoch: int):
        self.model = model
        self.log = log
        self.best_epoch = best_epoch

    def __repr__(self) -> str:
        return f"TrainResult(best_epoch={self.best_epoch}, epochs={len(self.log)})"


def _resolve_model_config(dataset: SplitDataset, model_config: ModelConfig) -> ModelConfig:
    if model_config.task != dataset.task:
        raise ConfigError(f"model task '{model_config.task}' does not match data task '{dataset.task}'")
    if dataset.task == "diagnosis" and model_config.num_categories != dataset.num_categories:
        return model_config.model_copy(update={"num_categories": dataset.num_categories})
    return model_config


def validation_loss(
    dataset: SplitDataset,
    params,
    config: ModelConfig,
    batch_size: int
) -> Optional[float]:
    """Mean evaluation-mode loss over the validation split; None when it is empty."""
    if not dataset.valid:
        return None
    batches = batch(dataset.valid, dataset.vocab, batch_size, shuffle_seed=None,
                    num_categories=dataset.num_categories)
    total = 0.0
    for b in batches:
        logits, _ = forward(b, params, config, training=False)
        total += float(task_loss(logits, b, config).item()) * b.size
    return total / len(dataset.valid)


def _improves(
    metric: Optional[float],
    loss: Optional[float],
    best_metric: Optional[float],
    best_loss: Optional[float]
) -> bool:
    """Higher validation metric wins; equal metrics fall back to lower validation loss."""
    if metric is not None and (best_metric is None or metric > best_metric):
        return True
    if metric != best_metric or loss is None:
        return False
    return best_loss is None or loss < best_loss


def train(
    dataset: SplitDataset,
    model_config: ModelConfig,
    train_config: TrainConfig,
    log_path: Optional[Union[str, Path]] = None,
    dtype=None
) -> TrainResult:
    """
    Train BiteNet with RMSprop and keep the best validation epoch.

    Each epoch shuffles the training split with a seed derived from
    ``train_config.seed`` and the epoch number, steps once per minibatch and
    scores the validation split (PR-AUC or precision@20). Epochs that tie on
    that metric, as precision@20 does once it saturates, are ranked by
    validation loss.

    Parameters
    ----------
    dataset : SplitDataset
        Split samples and vocabulary.
    model_config : ModelConfig
        Architecture; ``num_categories`` is taken from the dataset.
    train_config : TrainConfig
        Optimiser and schedule.
    log_path : str or Path, optional
        Where to write one JSON line per epoch.
    dtype : numpy dtype, optional
        Parameter dtype; ``Settings.train_dtype`` by default.

    Returns
    -------
    TrainResult
        The best-validation model and the epoch log.

    Raises
    ------
    DivergenceError
        The loss became NaN or infinite.
    """
    if not dataset.train:
        raise ConfigError("training split is empty")
    config = _resolve_model_config(dataset, model_config)
    dtype = np.dtype(dtype or get_config().train_dtype)
    seed = train_config.seed

    params = init_params(config, dataset.vocab.num_codes, seed, dtype)
    model = BiteNet(config, params, dataset.vocab.content_hash())
    optimizer = RMSprop(
        params, train_config.learning_rate, train_config.rmsprop_decay, train_config.rmsprop_eps)
    logger.info(
        f"training {model} on {len(dataset.train)} samples for {train_config.epochs} epochs")

    log: List[EpochLog] = []
    best_value: Optional[float] = None
    best_loss: Optional[float] = None
    best_epoch = 0
    best_snapshot = params.snapshot()

    for epoch in range(1, train_config.epochs + 1):
        batches = batch(
            dataset.train, dataset.vocab, train_config.batch_size,
            shuffle_seed=int(np.random.default_rng([seed, epoch]).integers(2**31)),
            num_categories=dataset.num_categories)

        total = 0.0
        for index, b in enumerate(batches):
            optimizer.zero_grad()
            logits, _ = forward(b, params, config, training=True, seed=[seed, epoch, index])
            loss = task_loss(logits, b, config)
            value = float(loss.item())
            if not math.isfinite(value):
                raise DivergenceError(
                    f"loss became {value} at epoch {epoch}, batch {index + 1}/{len(batches)}; "
                    f"try a lower learning_rate (now {train_config.learning_rate})")
            loss.backward()
            optimizer.step()
            total += value * b.size
        train_loss = total / len(dataset.train)

        metric_name, metric = selection_metric(model, dataset.valid, dataset.vocab, train_config.batch_size)
        valid_loss = validation_loss(dataset, params, config, train_config.batch_size)
        improved = best_epoch == 0 or _improves(metric, valid_loss, best_value, best_loss)
        if improved:
            best_value = metric
            best_loss = valid_loss
            best_epoch = epoch
            best_snapshot = params.snapshot()

        entry = EpochLog(
            epoch=epoch,
            train_loss=train_loss,
            valid_metric=metric,
            valid_loss=valid_loss,
            metric_name=metric_name,
            best=improved,
        )
        log.append(entry)
        logger.info(
            f"epoch {epoch}/{train_config.epochs}: loss={train_loss:.4f} "
            f"{metric_name}={'n/a' if metric is None else f'{metric:.4f}'}{' *' if improved else ''}")

    params.restore(best_snapshot)
    logger.info(f"best epoch {best_epoch} ({log[best_epoch - 1].metric_name}={best_value})")

    if log_path is not None:
        write_jsonl(log_path, [e.model_dump() for e in log])
    return TrainResult(model, log, best_epoch)
