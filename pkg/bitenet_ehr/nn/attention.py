# import libs
import math
from typing import Optional, Tuple, Union
import numpy as np
# local
from .tensor import Tensor
from .masks import AttentionMask, MaskKind
from .params import MasEncParams, MultiHeadParams, PoolingParams
from .functional import SeedLike, apply_layer_norm, dropout, feed_forward, masked_softmax
from ..config import NEG
from ..errors import MaskError, ShapeError

MaskLike = Union[AttentionMask, np.ndarray, None]


def _mask_matrix(mask: MaskLike) -> Optional[np.ndarray]:
    if mask is None:
        return None
    if isinstance(mask, AttentionMask):
        if mask.kind == MaskKind.NONE:
            return None
        return mask.matrix
    return np.asarray(mask)


def masked_attention(
    q: Tensor,
    k: Tensor,
    v: Tensor,
    mask: MaskLike = None
) -> Tuple[Tensor, Tensor]:
    """
    Scaled dot-product attention with an additive mask.

    Parameters
    ----------
    q, k, v : Tensor
        ``[..., m, d]`` queries, keys and values.
    mask : AttentionMask or np.ndarray, optional
        ``[..., m, m]`` additive mask, broadcast over leading axes.

    Returns
    -------
    tuple
        Output ``[..., m, d]`` and weights ``[..., m, m]``. Fully masked rows
        give zero weights and a zero output row.

    Raises
    ------
    ShapeError
        ``q``, ``k``, ``v`` or the mask disagree in shape.
    """
    if q.shape != k.shape or k.shape[:-1] != v.shape[:-1] or q.ndim < 2:
        raise ShapeError(f"attention shapes differ: q{q.shape} k{k.shape} v{v.shape}")
    m, d = q.shape[-2], q.shape[-1]
    matrix = _mask_matrix(mask)
    if matrix is not None and matrix.shape[-2:] != (m, m):
        raise ShapeError(f"mask shape {matrix.shape} does not fit sequence length {m}")

    scores = (q @ k.swap_last()) * (1.0 / math.sqrt(d))
    weights = masked_softmax(scores, matrix)
    return weights @ v, weights


def _split_heads(x: Tensor, heads: int) -> Tensor:
    *lead, m, d = x.shape
    L = len(lead)
    axes = tuple(range(L)) + (L + 1, L, L + 2)
    return x.reshape(*lead, m, heads, d // heads).transpose(axes)


def _merge_heads(x: Tensor) -> Tensor:
    *lead, h, m, dk = x.shape
    L = len(lead)
    axes = tuple(range(L)) + (L + 1, L, L + 2)
    return x.transpose(axes).reshape(*lead, m, h * dk)


def multi_head(
    x: Tensor,
    mask: MaskLike,
    params: MultiHeadParams,
    return_weights: bool = False
):
    """
    Multi-head self-attention ``Concat(head_1..head_h) W^O`` with Q = K = V = x.

    Each head attends over its ``d/h``-wide projection and is scaled by
    ``sqrt(d/h)``.
    """
    d = x.shape[-1]
    if d % params.heads != 0:
        raise ShapeError(f"d={d} is not divisible by heads={params.heads}")
    if params.d != d:
        raise ShapeError(f"projection width {params.d} does not match input width {d}")

    q = _split_heads(x @ params.w_q, params.heads)
    k = _split_heads(x @ params.w_k, params.heads)
    v = _split_heads(x @ params.w_v, params.heads)

    matrix = _mask_matrix(mask)
    if matrix is not None:
        # NOTE: insert the head axis
        matrix = np.expand_dims(matrix, axis=-3)
    heads_out, weights = masked_attention(q, k, v, matrix)
    out = _merge_heads(heads_out) @ params.w_o
    if return_weights:
        return out, weights
    return out


def attention_pooling(
    seq: Tensor,
    valid: np.ndarray,
    params: PoolingParams,
    allow_empty: bool = False
) -> Tuple[Tensor, Tensor]:
    """
    Compress ``[..., m, d]`` into ``[..., d]`` by query-free additive attention.

    Scores ``w . tanh(W1 v_i + b1) + b`` are softmaxed over valid positions and
    the output is the weighted sum of rows.

    Parameters
    ----------
    seq : Tensor
        Sequence or set to pool.
    valid : np.ndarray
        Boolean ``[..., m]``.
    params : PoolingParams
        Scoring weights.
    allow_empty : bool
        Pool groups with no valid position to zero instead of raising.

    Returns
    -------
    tuple
        Pooled ``[..., d]`` and weights ``[..., m]``.
    """
    valid = np.asarray(valid, dtype=bool)
    if valid.shape != seq.shape[:-1]:
        raise ShapeError(f"valid mask {valid.shape} does not match sequence {seq.shape}")
    any_valid = valid.any(axis=-1, keepdims=True)
    if not allow_empty and not any_valid.all():
        raise MaskError("attention pooling over no valid positions")

    hidden = (seq @ params.w1 + params.b1).tanh()
    scores = (hidden @ params.w.reshape(-1, 1)).reshape(*seq.shape[:-1]) + params.b
    mask = np.where(valid, 0.0, NEG).astype(seq.dtype)
    weights = (scores + mask).softmax(axis=-1) * any_valid.astype(seq.dtype)
    pooled = (weights.reshape(*weights.shape, 1) * seq).sum(axis=-2)
    return pooled, weights


def sum_pooling(seq: Tensor, valid: np.ndarray) -> Tuple[Tensor, np.ndarray]:
    """
    Plain summation over valid positions.

    Reported weights are uniform over valid positions.
    """
    valid = np.asarray(valid, dtype=bool)
    gate = valid.astype(seq.dtype)[..., None]
    counts = np.maximum(valid.sum(axis=-1, keepdims=True), 1)
    return (seq * gate).sum(axis=-2), valid / counts


def masenc_block(
    x: Tensor,
    mask: MaskLike,
    params: MasEncParams,
    dropout_rate: float = 0.0,
    training: bool = False,
    seed: SeedLike = None
) -> Tensor:
    """
    Masked encoder block.

    ``y1 = LN(x + Dropout(MultiHead(x, M)))`` then
    ``y = LN(y1 + Dropout(FFN(y1)))``.
    """
    if x.shape[-1] != params.attention.d:
        raise ShapeError(f"block width {params.attention.d} does not match input {x.shape}")
    rng = None
    if training and dropout_rate > 0:
        if seed is None:
            raise ValueError("masenc_block in training mode needs a dropout seed")
        rng = np.random.default_rng(seed)
    attended = dropout(multi_head(x, mask, params.attention), dropout_rate, training, rng)
    y1 = apply_layer_norm(x + attended, params.ln1)
    transformed = dropout(feed_forward(y1, params.ffn), dropout_rate, training, rng)
    return apply_layer_norm(y1 + transformed, params.ln2)
