# import libs
from typing import Dict, Optional
import numpy as np
from pydantic import BaseModel, ConfigDict, Field
# local
from ..nn import ParamGroup


class RMSpropState(BaseModel):
    """Running mean of squared gradients, keyed by parameter name."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    square_avg: Dict[str, np.ndarray] = Field(default_factory=dict)
    steps: int = 0


def rmsprop_step(
    params: ParamGroup,
    grads: Dict[str, np.ndarray],
    state: RMSpropState,
    lr: float,
    decay: float = 0.9,
    eps: float = 1e-8
) -> RMSpropState:
    """
    One in-place RMSprop update.

    ``s <- decay * s + (1 - decay) * g^2`` and ``w <- w - lr * g / sqrt(s + eps)``.
    Parameters without a gradient entry are left alone. A padding embedding
    row, if the group has one, is re-zeroed afterwards.
    """
    for name, tensor in params.named_tensors():
        grad = grads.get(name)
        if grad is None:
            continue
        s = state.square_avg.get(name)
        if s is None:
            s = np.zeros_like(tensor.data)
        s = decay * s + (1.0 - decay) * grad * grad
        state.square_avg[name] = s.astype(tensor.data.dtype, copy=False)
        tensor.data -= (lr * grad / np.sqrt(s + eps)).astype(tensor.data.dtype, copy=False)

    rezero = getattr(params, "rezero_padding", None)
    if rezero is not None:
        rezero()
    state.steps += 1
    return state


class RMSprop:
    """
    RMSprop over the leaf tensors of a parameter group.

    Parameters
    ----------
    params : ParamGroup
        Tensors to optimise in place.
    lr : float
        Step size.
    decay : float
        Squared-gradient decay.
    eps : float
        Denominator epsilon.
    """

    def __init__(self, params: ParamGroup, lr: float, decay: float = 0.9, eps: float = 1e-8):
        self.params = params
        self.lr = lr
        self.decay = decay
        self.eps = eps
        self.state = RMSpropState()

    def zero_grad(self) -> None:
        self.params.zero_grad()

    def gradients(self) -> Dict[str, np.ndarray]:
        return {
            name: t.grad for name, t in self.params.named_tensors() if t.grad is not None
        }

    def step(self, grads: Optional[Dict[str, np.ndarray]] = None) -> None:
        rmsprop_step(
            self.params,
            self.gradients() if grads is None else grads,
            self.state,
            self.lr,
            self.decay,
            self.eps,
        )
