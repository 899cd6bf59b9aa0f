# import libs
from typing import Iterator, List, Tuple
import numpy as np
from pydantic import BaseModel, ConfigDict
# local
from .tensor import Tensor


class ParamGroup(BaseModel):
    """Pydantic container of learnable tensors, possibly nested."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    def named_tensors(self, prefix: str = "") -> Iterator[Tuple[str, Tensor]]:
        """Yield ``(dotted_name, tensor)`` in declaration order."""
        for name in type(self).model_fields:
            value = getattr(self, name)
            key = f"{prefix}{name}"
            if isinstance(value, Tensor):
                yield key, value
            elif isinstance(value, ParamGroup):
                yield from value.named_tensors(f"{key}.")
            elif isinstance(value, (list, tuple)):
                for i, item in enumerate(value):
                    if isinstance(item, ParamGroup):
                        yield from item.named_tensors(f"{key}.{i}.")

    def tensors(self) -> List[Tensor]:
        return [t for _, t in self.named_tensors()]

    def parameter_count(self) -> int:
        return int(sum(t.data.size for t in self.tensors()))

    def zero_grad(self) -> None:
        for tensor in self.tensors():
            tensor.zero_grad()


class MultiHeadParams(ParamGroup):
    """
    Stacked head projections.

    Head ``i`` uses columns ``i*d_k:(i+1)*d_k`` of ``w_q``/``w_k``/``w_v`` and
    rows ``i*d_v:(i+1)*d_v`` of ``w_o``.
    """
    w_q: Tensor
    w_k: Tensor
    w_v: Tensor
    w_o: Tensor
    heads: int

    @property
    def d(self) -> int:
        return int(self.w_q.shape[0])

    @property
    def d_k(self) -> int:
        return self.d // self.heads

    def head_projection(self, i: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        sl = slice(i * self.d_k, (i + 1) * self.d_k)
        return self.w_q.data[:, sl], self.w_k.data[:, sl], self.w_v.data[:, sl]


class LayerNormParams(ParamGroup):
    gain: Tensor
    bias: Tensor


class FeedForwardParams(ParamGroup):
    w1: Tensor
    b1: Tensor
    w2: Tensor
    b2: Tensor


class MasEncParams(ParamGroup):
    attention: MultiHeadParams
    ffn: FeedForwardParams
    ln1: LayerNormParams
    ln2: LayerNormParams


class PoolingParams(ParamGroup):
    """Query-free additive scoring ``w . tanh(W1 v + b1) + b``."""
    w1: Tensor
    b1: Tensor
    w: Tensor
    b: Tensor
