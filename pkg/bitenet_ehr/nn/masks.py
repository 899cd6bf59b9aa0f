# import libs
from enum import Enum
from typing import Optional, Union
import numpy as np
from pydantic import BaseModel, ConfigDict
# local
from ..config import NEG
from ..errors import MaskError


class MaskKind(str, Enum):
    NONE = "none"
    DIAGONAL = "diagonal"
    FORWARD = "forward"
    BACKWARD = "backward"
    PADDING = "padding"
    COMBINED = "combined"


class AttentionMask(BaseModel):
    """Additive mask: 0 where attention is allowed, NEG where it is disabled."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: MaskKind
    matrix: np.ndarray

    def allowed(self) -> np.ndarray:
        return self.matrix == 0.0


def build_mask(kind: Union[str, MaskKind], n: int, swap_direction: bool = False) -> AttentionMask:
    """
    Build an ``n x n`` temporal mask.

    Row ``i`` is the query, column ``j`` the key. ``forward`` allows ``i < j``,
    ``backward`` allows ``i > j``; ``swap_direction`` exchanges the two.

    Raises
    ------
    MaskError
        ``n < 1`` or a kind that is not a temporal mask.
    """
    try:
        kind = MaskKind(kind)
    except ValueError as e:
        raise MaskError(f"unknown mask kind: {kind!r}") from e
    if n < 1:
        raise MaskError(f"mask length must be >= 1, got {n}")

    if swap_direction and kind in (MaskKind.FORWARD, MaskKind.BACKWARD):
        kind_used = MaskKind.BACKWARD if kind == MaskKind.FORWARD else MaskKind.FORWARD
    else:
        kind_used = kind

    i, j = np.indices((n, n))
    if kind_used == MaskKind.NONE:
        allowed = np.ones((n, n), dtype=bool)
    elif kind_used == MaskKind.DIAGONAL:
        allowed = i != j
    elif kind_used == MaskKind.FORWARD:
        allowed = i < j
    elif kind_used == MaskKind.BACKWARD:
        allowed = i > j
    else:
        raise MaskError(
            f"{kind.value} masks are built with padding_mask/combine, not build_mask")
    return AttentionMask(kind=kind, matrix=np.where(allowed, 0.0, NEG))


def padding_mask(valid: np.ndarray) -> AttentionMask:
    """
    Mask padded keys.

    Parameters
    ----------
    valid : np.ndarray
        Boolean ``[..., n]`` validity of each position.

    Returns
    -------
    AttentionMask
        ``[..., n, n]`` with NEG in the columns of padded positions.
    """
    valid = np.asarray(valid, dtype=bool)
    columns = np.where(valid, 0.0, NEG)[..., None, :]
    matrix = np.broadcast_to(columns, valid.shape + (valid.shape[-1],)).copy()
    return AttentionMask(kind=MaskKind.PADDING, matrix=matrix)


def combine(a: AttentionMask, b: Optional[AttentionMask]) -> AttentionMask:
    """Elementwise minimum of two masks (broadcast over leading axes)."""
    if b is None:
        return a
    return AttentionMask(kind=MaskKind.COMBINED, matrix=np.minimum(a.matrix, b.matrix))


def live_rows(matrix: np.ndarray) -> np.ndarray:
    """``[..., n, 1]`` indicator of rows with at least one allowed key."""
    return (matrix > NEG / 2).any(axis=-1, keepdims=True)
