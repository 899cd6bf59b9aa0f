# import libs
import logging
from typing import List, Optional, Sequence, Tuple, Union
import numpy as np
from pydantic import BaseModel, ConfigDict
# local
from .params import BiteNetParams
from ..errors import ConfigError, MaskError, ShapeError
from ..ehr import PaddedBatch
from ..models import ModelConfig
from ..nn import (
    Tensor,
    MaskKind,
    MasEncParams,
    PoolingParams,
    build_mask,
    padding_mask,
    combine,
    attention_pooling,
    sum_pooling,
    masenc_block,
    concat
)

# NOTE: logger
logger = logging.getLogger(__name__)


class ForwardTrace(BaseModel):
    """
    Attention weights and outputs recorded by one forward pass.

    Shapes: ``code_weights`` ``[B, m, k]``, ``visit_weights_fw``/``visit_weights_bw``
    ``[B, m]``, ``u_bi`` ``[B, 2d]``, ``logits``/``probabilities`` ``[B, out]``.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    code_weights: np.ndarray
    visit_weights_fw: np.ndarray
    visit_weights_bw: np.ndarray
    u_bi: np.ndarray
    logits: np.ndarray
    probabilities: np.ndarray


def _as_array(weights: Union[Tensor, np.ndarray]) -> np.ndarray:
    return weights.data if isinstance(weights, Tensor) else np.asarray(weights)


def _run_stack(
    x: Tensor,
    mask,
    stack: List[MasEncParams],
    dropout_rate: float,
    training: bool,
    rng: Optional[np.random.Generator]
) -> Tensor:
    for block in stack:
        x = masenc_block(x, mask, block, dropout_rate, training, rng)
    return x


def _pool(
    seq: Tensor,
    valid: np.ndarray,
    pool: Optional[PoolingParams]
) -> Tuple[Tensor, np.ndarray]:
    if pool is None:
        pooled, weights = sum_pooling(seq, valid)
    else:
        pooled, weights = attention_pooling(seq, valid, pool, allow_empty=True)
    return pooled, _as_array(weights)


def _code_mask_kind(config: ModelConfig) -> MaskKind:
    return MaskKind.NONE if config.variant == "diremask" else MaskKind.DIAGONAL


def _visit_mask_kinds(config: ModelConfig) -> Tuple[MaskKind, MaskKind]:
    if config.variant == "diremask":
        return MaskKind.NONE, MaskKind.NONE
    return MaskKind.FORWARD, MaskKind.BACKWARD


def embed_codes(batch: PaddedBatch, params: BiteNetParams) -> Tensor:
    """
    Look up code embeddings.

    Returns
    -------
    Tensor
        ``[B, m, k, d]``; padded positions read the zero padding row.

    Raises
    ------
    IndexError
        A code id falls outside the embedding table.
    """
    return params.code_embedding.gather_rows(batch.codes)


def encode_visit(
    code_embs: Tensor,
    valid: np.ndarray,
    params: BiteNetParams,
    config: ModelConfig,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
    allow_empty: bool = False
) -> Tuple[Tensor, np.ndarray]:
    """
    Encode the unordered code set of each visit into one vector.

    Parameters
    ----------
    code_embs : Tensor
        ``[..., k, d]`` code embeddings of one or more visits.
    valid : np.ndarray
        Boolean ``[..., k]``; False marks padded codes.
    params : BiteNetParams
        Network parameters.
    config : ModelConfig
        Selects the mask kind and pooling for the variant.
    training : bool
        Enables dropout.
    rng : np.random.Generator, optional
        Dropout generator.
    allow_empty : bool
        Encode visits without valid codes to the zero vector instead of raising.

    Returns
    -------
    tuple
        Visit vectors ``[..., d]`` and code weights ``[..., k]``.

    Raises
    ------
    MaskError
        A visit has no valid code and ``allow_empty`` is False.
    """
    valid = np.asarray(valid, dtype=bool)
    if valid.shape != code_embs.shape[:-1]:
        raise ShapeError(f"code mask {valid.shape} does not match embeddings {code_embs.shape}")
    if not allow_empty and not valid.any(axis=-1).all():
        raise MaskError("visit with every code padded")

    k = code_embs.shape[-2]
    mask = combine(build_mask(_code_mask_kind(config), k), padding_mask(valid))
    hidden = _run_stack(code_embs, mask, params.code_stack, config.dropout, training, rng)
    return _pool(hidden, valid, params.code_pool)


def interval_encode(intervals: np.ndarray, params: BiteNetParams, config: ModelConfig) -> Tensor:
    """
    Interval embeddings ``[..., m, d]`` read from the day-indexed table.

    Days beyond the table are clamped to its last row.
    """
    if not config.uses_interval or params.interval_table is None:
        raise ConfigError(f"variant '{config.variant}' carries no interval table")
    intervals = np.asarray(intervals, dtype=np.int64)
    if intervals.size and intervals.min() < 0:
        raise ValueError(f"negative interval: {intervals.min()}")
    rows = np.minimum(intervals, params.interval_table.shape[0] - 1)
    return params.interval_table.gather_rows(rows)


def _check_compatible(batch: PaddedBatch, params: BiteNetParams, config: ModelConfig) -> None:
    if params.code_embedding.shape[1] != config.d:
        raise ShapeError(
            f"embedding width {params.code_embedding.shape[1]} does not match d={config.d}")
    if params.head_w.shape != (2 * config.d, config.output_width):
        raise ShapeError(
            f"head shape {params.head_w.shape} does not match "
            f"(2d={2 * config.d}, out={config.output_width})")
    if (params.code_pool is None) == config.uses_pooling:
        raise ConfigError(f"parameters do not belong to variant '{config.variant}'")
    if batch.codes.ndim != 3:
        raise ShapeError(f"batch codes must be [B, m, k], got {batch.codes.shape}")


def forward(
    batch: PaddedBatch,
    params: BiteNetParams,
    config: ModelConfig,
    training: bool = False,
    seed: Union[int, Sequence[int], None] = None
) -> Tuple[Tensor, ForwardTrace]:
    """
    Run BiteNet on a padded batch.

    Code embeddings pass through the code-level stack and pooling, interval
    embeddings are added to the visit vectors, the forward and backward
    visit-level stacks run with their directional masks and are pooled, and
    the concatenation ``u_bi`` feeds the task head.

    Parameters
    ----------
    batch : PaddedBatch
        Input samples.
    params : BiteNetParams
        Network parameters.
    config : ModelConfig
        Architecture, variant and task.
    training : bool
        Enables dropout, drawn from ``default_rng(seed)``.
    seed : int or sequence of int, optional
        Dropout seed; sequences are mixed by ``default_rng``.

    Returns
    -------
    tuple
        Logits ``[B, out]`` as a Tensor and the ForwardTrace.
    """
    _check_compatible(batch, params, config)
    rng = None
    if training and config.dropout > 0:
        if seed is None:
            raise ConfigError("training forward pass with dropout needs a seed")
        rng = np.random.default_rng(seed)
    B, m, k = batch.codes.shape
    d = config.d

    # SECTION: code level
    embs = embed_codes(batch, params).reshape(B * m, k, d)
    visits, code_weights = encode_visit(
        embs, batch.code_mask.reshape(B * m, k), params, config,
        training=training, rng=rng, allow_empty=True)
    visits = visits.reshape(B, m, d)

    if config.uses_interval:
        visits = visits + interval_encode(batch.intervals, params, config)

    # SECTION: visit level
    fw_kind, bw_kind = _visit_mask_kinds(config)
    pad = padding_mask(batch.visit_mask)
    fw_mask = combine(build_mask(fw_kind, m, config.direction_swap), pad)
    bw_mask = combine(build_mask(bw_kind, m, config.direction_swap), pad)

    fw_hidden = _run_stack(visits, fw_mask, params.fw_stack, config.dropout, training, rng)
    bw_hidden = _run_stack(visits, bw_mask, params.bw_stack, config.dropout, training, rng)
    u_fw, fw_weights = _pool(fw_hidden, batch.visit_mask, params.fw_pool)
    u_bw, bw_weights = _pool(bw_hidden, batch.visit_mask, params.bw_pool)
    u_bi = concat([u_fw, u_bw], axis=-1)

    logits = u_bi @ params.head_w + params.head_b
    trace = ForwardTrace(
        code_weights=code_weights.reshape(B, m, k),
        visit_weights_fw=fw_weights,
        visit_weights_bw=bw_weights,
        u_bi=u_bi.data.copy(),
        logits=logits.data.copy(),
        probabilities=predict_proba(logits, config.task, config.diagnosis_head),
    )
    return logits, trace


def predict_proba(
    logits: Union[Tensor, np.ndarray],
    task: str = "readmission",
    head: str = "sigmoid"
) -> np.ndarray:
    """
    Turn logits into probabilities.

    Readmission and the default diagnosis head use the logistic sigmoid per
    slot; ``head="softmax"`` normalises diagnosis logits over categories.
    """
    t = logits if isinstance(logits, Tensor) else Tensor(np.asarray(logits, dtype=np.float64))
    if task == "diagnosis" and head == "softmax":
        return t.softmax(axis=-1).data.copy()
    return t.sigmoid().data.copy()


class BiteNet:
    """
    A BiteNet network bound to its configuration and vocabulary.

    Parameters
    ----------
    config : ModelConfig
        Architecture, variant and task.
    params : BiteNetParams
        Network parameters.
    vocab_hash : str
        Content hash of the vocabulary the parameters were trained on.
    """

    def __init__(self, config: ModelConfig, params: BiteNetParams, vocab_hash: str):
        self.config = config
        self.params = params
        self.vocab_hash = vocab_hash

    def __repr__(self) -> str:
        return (
            f"BiteNet(variant={self.config.variant}, task={self.config.task}, "
            f"d={self.config.d}, parameters={self.params.parameter_count()})"
        )

    @property
    def num_codes(self) -> int:
        return self.params.num_codes

    def forward(
        self,
        batch: PaddedBatch,
        training: bool = False,
        seed: Optional[int] = None
    ) -> Tuple[Tensor, ForwardTrace]:
        return forward(batch, self.params, self.config, training, seed)

    def predict(self, batch: PaddedBatch) -> ForwardTrace:
        """Evaluation-mode forward pass; only the trace is kept."""
        _, trace = self.forward(batch, training=False)
        return trace

    def predict_many(self, batches: List[PaddedBatch]) -> List[ForwardTrace]:
        traces = [self.predict(b) for b in batches]
        logger.debug(f"predicted {sum(t.logits.shape[0] for t in traces)} samples")
        return traces
