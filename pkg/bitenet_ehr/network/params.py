# import libs
import logging
from typing import Dict, List, Optional
import numpy as np
# local
from ..config import PAD_ID, ffn_multiplier
from ..models import ModelConfig
from ..nn import (
    Tensor,
    ParamGroup,
    MultiHeadParams,
    LayerNormParams,
    FeedForwardParams,
    MasEncParams,
    PoolingParams
)

# NOTE: logger
logger = logging.getLogger(__name__)


class BiteNetParams(ParamGroup):
    """
    Every learnable array of one BiteNet network.

    ``code_embedding`` row 0 is the padding row and stays zero. Pooling layers
    are absent under the attention ablation, the interval table under the
    interval ablation.
    """
    code_embedding: Tensor
    code_stack: List[MasEncParams]
    code_pool: Optional[PoolingParams] = None
    interval_table: Optional[Tensor] = None
    fw_stack: List[MasEncParams]
    bw_stack: List[MasEncParams]
    fw_pool: Optional[PoolingParams] = None
    bw_pool: Optional[PoolingParams] = None
    head_w: Tensor
    head_b: Tensor

    @property
    def num_codes(self) -> int:
        return int(self.code_embedding.shape[0]) - 1

    def rezero_padding(self) -> None:
        self.code_embedding.data[PAD_ID] = 0.0

    def snapshot(self) -> Dict[str, np.ndarray]:
        return {name: t.data.copy() for name, t in self.named_tensors()}

    def restore(self, snapshot: Dict[str, np.ndarray]) -> None:
        for name, t in self.named_tensors():
            t.data[...] = snapshot[name]


class _Initializer:
    """Glorot-uniform matrices, zero biases, from one seeded generator."""

    def __init__(self, seed: int, dtype):
        self.rng = np.random.default_rng(seed)
        self.dtype = dtype

    def matrix(self, fan_in: int, fan_out: int) -> Tensor:
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        data = self.rng.uniform(-limit, limit, size=(fan_in, fan_out))
        return Tensor(data.astype(self.dtype), requires_grad=True)

    def vector(self, d: int) -> Tensor:
        limit = np.sqrt(6.0 / (d + 1))
        data = self.rng.uniform(-limit, limit, size=(d,))
        return Tensor(data.astype(self.dtype), requires_grad=True)

    def zeros(self, *shape: int) -> Tensor:
        return Tensor(np.zeros(shape, dtype=self.dtype), requires_grad=True)

    def ones(self, *shape: int) -> Tensor:
        return Tensor(np.ones(shape, dtype=self.dtype), requires_grad=True)

    def masenc(self, d: int, heads: int) -> MasEncParams:
        d_ff = ffn_multiplier * d
        return MasEncParams(
            attention=MultiHeadParams(
                w_q=self.matrix(d, d),
                w_k=self.matrix(d, d),
                w_v=self.matrix(d, d),
                w_o=self.matrix(d, d),
                heads=heads,
            ),
            ffn=FeedForwardParams(
                w1=self.matrix(d, d_ff),
                b1=self.zeros(d_ff),
                w2=self.matrix(d_ff, d),
                b2=self.zeros(d),
            ),
            ln1=LayerNormParams(gain=self.ones(d), bias=self.zeros(d)),
            ln2=LayerNormParams(gain=self.ones(d), bias=self.zeros(d)),
        )

    def pooling(self, d: int) -> PoolingParams:
        return PoolingParams(
            w1=self.matrix(d, d),
            b1=self.zeros(d),
            w=self.vector(d),
            b=self.zeros(1),
        )


def init_params(
    config: ModelConfig,
    num_codes: int,
    seed: int,
    dtype=np.float32
) -> BiteNetParams:
    """
    Draw a fresh parameter set.

    Parameters
    ----------
    config : ModelConfig
        Architecture and variant.
    num_codes : int
        Real vocabulary size |X|; the embedding gets one extra padding row.
    seed : int
        Generator seed; equal seeds give bitwise-equal parameters.
    dtype : numpy dtype
        ``float32`` for training, ``float64`` for gradient checks.

    Returns
    -------
    BiteNetParams
        Matrices Glorot-uniform, biases and the interval table zero.
    """
    init = _Initializer(seed, dtype)
    d = config.d

    embedding = init.matrix(num_codes + 1, d)
    embedding.data[PAD_ID] = 0.0

    code_stack = [init.masenc(d, config.heads) for _ in range(config.layers)]
    code_pool = init.pooling(d) if config.uses_pooling else None
    fw_stack = [init.masenc(d, config.heads) for _ in range(config.layers)]
    bw_stack = [init.masenc(d, config.heads) for _ in range(config.layers)]
    fw_pool = init.pooling(d) if config.uses_pooling else None
    bw_pool = init.pooling(d) if config.uses_pooling else None
    interval_table = init.zeros(config.interval_table_days, d) if config.uses_interval else None

    params = BiteNetParams(
        code_embedding=embedding,
        code_stack=code_stack,
        code_pool=code_pool,
        interval_table=interval_table,
        fw_stack=fw_stack,
        bw_stack=bw_stack,
        fw_pool=fw_pool,
        bw_pool=bw_pool,
        head_w=init.matrix(2 * d, config.output_width),
        head_b=init.zeros(config.output_width),
    )
    logger.debug(f"initialised {params.parameter_count()} parameters (variant={config.variant})")
    return params


def masenc_param_count(d: int) -> int:
    """4 attention projections, the d -> 4d -> d FFN and two layer norms."""
    return 4 * d * d + (8 * d * d + 5 * d) + 4 * d


def pooling_param_count(d: int) -> int:
    return d * d + 2 * d + 1


def expected_parameter_count(config: ModelConfig, num_codes: int) -> int:
    """
    Closed-form parameter count of ``init_params(config, num_codes, ...)``.

    ``(|X|+1)d + 3N(12d^2 + 9d) + 3(d^2 + 2d + 1) + m_days d + (2d + 1) out``
    with the pooling and interval terms dropped by their ablations.
    """
    d = config.d
    total = (num_codes + 1) * d
    total += 3 * config.layers * masenc_param_count(d)
    if config.uses_pooling:
        total += 3 * pooling_param_count(d)
    if config.uses_interval:
        total += config.interval_table_days * d
    total += (2 * d + 1) * config.output_width
    return total
