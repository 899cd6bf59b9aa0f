from .tensor import Tensor, backward, concat
from .masks import AttentionMask, MaskKind, build_mask, padding_mask, combine, live_rows
from .params import (
    ParamGroup,
    MultiHeadParams,
    LayerNormParams,
    FeedForwardParams,
    MasEncParams,
    PoolingParams
)
from .functional import linear, masked_softmax, layer_norm, feed_forward, dropout
from .attention import (
    masked_attention,
    multi_head,
    attention_pooling,
    sum_pooling,
    masenc_block
)
from .gradcheck import grad_check

__all__ = [
    "Tensor",
    "backward",
    "concat",
    "AttentionMask",
    "MaskKind",
    "build_mask",
    "padding_mask",
    "combine",
    "live_rows",
    "ParamGroup",
    "MultiHeadParams",
    "LayerNormParams",
    "FeedForwardParams",
    "MasEncParams",
    "PoolingParams",
    "linear",
    "masked_softmax",
    "layer_norm",
    "feed_forward",
    "dropout",
    "masked_attention",
    "multi_head",
    "attention_pooling",
    "sum_pooling",
    "masenc_block",
    "grad_check",
]
