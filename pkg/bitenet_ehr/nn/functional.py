# import libs
from typing import Optional, Union
import numpy as np
# local
from .tensor import Tensor
from .masks import live_rows
from .params import FeedForwardParams, LayerNormParams
from ..config import layer_norm_eps

SeedLike = Union[int, np.random.Generator, None]


def linear(x: Tensor, weight: Tensor, bias: Optional[Tensor] = None) -> Tensor:
    out = x @ weight
    return out if bias is None else out + bias


def masked_softmax(scores: Tensor, mask: Optional[np.ndarray]) -> Tensor:
    """
    Row softmax of ``scores + mask``.

    Rows whose keys are all disabled come out as all-zero rows.
    """
    if mask is None:
        return scores.softmax(axis=-1)
    mask = np.asarray(mask, dtype=scores.dtype)
    weights = (scores + mask).softmax(axis=-1)
    live = np.broadcast_to(live_rows(mask), weights.shape[:-1] + (1,))
    return weights * live.astype(scores.dtype)


def layer_norm(
    x: Tensor,
    gain: Tensor,
    bias: Tensor,
    eps: float = layer_norm_eps
) -> Tensor:
    """Standardise each row over the feature axis, then scale and shift."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    centred = x - x.mean(axis=-1, keepdims=True)
    variance = (centred * centred).mean(axis=-1, keepdims=True)
    return centred * (variance + eps) ** -0.5 * gain + bias


def apply_layer_norm(x: Tensor, params: LayerNormParams) -> Tensor:
    return layer_norm(x, params.gain, params.bias)


def feed_forward(x: Tensor, params: FeedForwardParams) -> Tensor:
    """``relu(x W1 + b1) W2 + b2``."""
    return linear(linear(x, params.w1, params.b1).relu(), params.w2, params.b2)


def dropout(x: Tensor, rate: float, training: bool, seed: SeedLike = None) -> Tensor:
    """Inverted dropout; the identity outside training or at rate 0."""
    if not training or rate <= 0.0:
        return x
    if seed is None:
        raise ValueError("dropout in training mode needs a seed or generator")
    rng = np.random.default_rng(seed)
    keep = rng.random(x.shape) >= rate
    return x * (keep.astype(x.dtype) / (1.0 - rate))
