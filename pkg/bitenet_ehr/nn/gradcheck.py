# import libs
import logging
from typing import Callable, Sequence
import numpy as np
# local
from .tensor import Tensor

# NOTE: logger
logger = logging.getLogger(__name__)


def grad_check(
    f: Callable[..., Tensor],
    inputs: Sequence[Tensor],
    eps: float = 1e-5,
    floor: float = 1e-8
) -> float:
    """
    Compare analytic gradients with central finite differences.

    Parameters
    ----------
    f : callable
        Maps ``inputs`` to a scalar Tensor.
    inputs : sequence of Tensor
        Double-precision leaves with ``requires_grad=True``.
    eps : float
        Finite-difference step.
    floor : float
        Smallest denominator, so gradients that vanish analytically are
        compared in absolute terms against finite-difference round-off.

    Returns
    -------
    float
        ``max |a - n| / max(|a|, |n|, floor)`` over every input element.
    """
    for x in inputs:
        if x.dtype != np.float64:
            logger.warning(f"grad_check on {x.dtype} input; expect loose agreement")
        x.zero_grad()
    loss = f(*inputs)
    loss.backward()
    analytic = [x.grad.copy() for x in inputs]

    worst = 0.0
    for x, a_grad in zip(inputs, analytic):
        flat = x.data.reshape(-1)
        a_flat = a_grad.reshape(-1)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + eps
            plus = f(*inputs).item()
            flat[i] = original - eps
            minus = f(*inputs).item()
            flat[i] = original
            numeric = (plus - minus) / (2.0 * eps)
            a = a_flat[i]
            error = abs(a - numeric) / max(abs(a), abs(numeric), floor)
            worst = max(worst, error)
    return worst
