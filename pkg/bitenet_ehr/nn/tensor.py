# import libs
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union
import numpy as np
# local
from ..errors import ShapeError

ArrayLike = Union[np.ndarray, float, int, Sequence]
GradFn = Callable[[np.ndarray], Iterable[Tuple["Tensor", np.ndarray]]]


def _as_float_array(data: ArrayLike, dtype=None) -> np.ndarray:
    if dtype is not None:
        return np.asarray(data, dtype=dtype)
    array = np.asarray(data)
    if not np.issubdtype(array.dtype, np.floating):
        array = array.astype(np.float64)
    return array


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum ``grad`` down to ``shape`` after numpy broadcasting."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Tensor:
    """
    Dense array node of a reverse-mode computation graph.

    Leaves created with ``requires_grad=True`` accumulate ``grad`` across
    ``backward`` calls until ``zero_grad`` is called. Interior nodes never store
    gradients.
    """

    def __init__(
        self,
        data: ArrayLike,
        requires_grad: bool = False,
        dtype=None,
        _parents: Tuple["Tensor", ...] = (),
        _grad_fn: Optional[GradFn] = None,
        _op: str = ""
    ):
        self.data = _as_float_array(data, dtype)
        self.requires_grad = requires_grad
        self._parents = _parents
        self._grad_fn = _grad_fn
        self._op = _op
        self.grad: Optional[np.ndarray] = None
        if requires_grad and not _parents:
            self.grad = np.zeros_like(self.data)

    # NOTE: numpy defers mixed ndarray-Tensor arithmetic to Tensor
    __array_ufunc__ = None

    # SECTION: basic properties
    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def is_leaf(self) -> bool:
        return not self._parents

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, op={self._op or 'leaf'}, requires_grad={self.requires_grad})"

    def numpy(self) -> np.ndarray:
        return self.data

    def item(self) -> float:
        return float(self.data.reshape(-1)[0]) if self.data.size == 1 else float("nan")

    def detach(self) -> "Tensor":
        return Tensor(self.data.copy())

    def zero_grad(self) -> None:
        if self.requires_grad and self.is_leaf:
            self.grad = np.zeros_like(self.data)

    # SECTION: graph construction
    def _const(self, other: ArrayLike) -> "Tensor":
        if isinstance(other, Tensor):
            return other
        return Tensor(np.asarray(other, dtype=self.data.dtype))

    def _child(self, data: np.ndarray, parents: Tuple["Tensor", ...], grad_fn: GradFn, op: str) -> "Tensor":
        tracked = tuple(p for p in parents if p.requires_grad)
        if not tracked:
            return Tensor(data)
        return Tensor(data, requires_grad=True, _parents=tracked, _grad_fn=grad_fn, _op=op)

    # SECTION: arithmetic
    def __add__(self, other: ArrayLike) -> "Tensor":
        other = self._const(other)
        a, b = self, other

        def grad_fn(g):
            return ((a, _unbroadcast(g, a.shape)), (b, _unbroadcast(g, b.shape)))
        return self._child(a.data + b.data, (a, b), grad_fn, "add")

    __radd__ = __add__

    def __neg__(self) -> "Tensor":
        a = self
        return self._child(-a.data, (a,), lambda g: ((a, -g),), "neg")

    def __sub__(self, other: ArrayLike) -> "Tensor":
        return self + (-self._const(other))

    def __rsub__(self, other: ArrayLike) -> "Tensor":
        return self._const(other) + (-self)

    def __mul__(self, other: ArrayLike) -> "Tensor":
        other = self._const(other)
        a, b = self, other

        def grad_fn(g):
            return (
                (a, _unbroadcast(g * b.data, a.shape)),
                (b, _unbroadcast(g * a.data, b.shape)),
            )
        return self._child(a.data * b.data, (a, b), grad_fn, "mul")

    __rmul__ = __mul__

    def __truediv__(self, other: ArrayLike) -> "Tensor":
        if isinstance(other, Tensor):
            return self * other ** -1.0
        return self * (1.0 / np.asarray(other, dtype=self.data.dtype))

    def __pow__(self, exponent: float) -> "Tensor":
        a = self
        out = a.data ** exponent

        def grad_fn(g):
            return ((a, g * exponent * a.data ** (exponent - 1)),)
        return self._child(out, (a,), grad_fn, "pow")

    def __matmul__(self, other: "Tensor") -> "Tensor":
        other = self._const(other)
        a, b = self, other
        if a.ndim < 2 or b.ndim < 2:
            raise ShapeError(f"matmul needs >= 2-D operands, got {a.shape} @ {b.shape}")
        if a.shape[-1] != b.shape[-2]:
            raise ShapeError(f"matmul shape mismatch: {a.shape} @ {b.shape}")

        def grad_fn(g):
            ga = g @ np.swapaxes(b.data, -1, -2)
            gb = np.swapaxes(a.data, -1, -2) @ g
            return ((a, _unbroadcast(ga, a.shape)), (b, _unbroadcast(gb, b.shape)))
        return self._child(a.data @ b.data, (a, b), grad_fn, "matmul")

    # SECTION: reductions and reshaping
    def sum(self, axis=None, keepdims: bool = False) -> "Tensor":
        a = self

        def grad_fn(g):
            if axis is not None and not keepdims:
                g = np.expand_dims(g, axis)
            return ((a, np.broadcast_to(g, a.shape).copy()),)
        return self._child(a.data.sum(axis=axis, keepdims=keepdims), (a,), grad_fn, "sum")

    def mean(self, axis=None, keepdims: bool = False) -> "Tensor":
        count = self.data.size if axis is None else np.prod(
            [self.shape[i] for i in np.atleast_1d(axis)])
        return self.sum(axis=axis, keepdims=keepdims) * (1.0 / count)

    def reshape(self, *shape) -> "Tensor":
        a = self
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return self._child(a.data.reshape(shape), (a,), lambda g: ((a, g.reshape(a.shape)),), "reshape")

    def transpose(self, *axes) -> "Tensor":
        a = self
        if len(axes) == 1 and isinstance(axes[0], (tuple, list)):
            axes = tuple(axes[0])
        inverse = tuple(np.argsort(axes))
        return self._child(
            a.data.transpose(axes), (a,), lambda g: ((a, g.transpose(inverse)),), "transpose")

    def swap_last(self) -> "Tensor":
        """Swap the two trailing axes."""
        axes = list(range(self.ndim))
        axes[-1], axes[-2] = axes[-2], axes[-1]
        return self.transpose(axes)

    # SECTION: elementwise nonlinearities
    def exp(self) -> "Tensor":
        a = self
        out = np.exp(a.data)
        return self._child(out, (a,), lambda g: ((a, g * out),), "exp")

    def log(self) -> "Tensor":
        a = self
        return self._child(np.log(a.data), (a,), lambda g: ((a, g / a.data),), "log")

    def tanh(self) -> "Tensor":
        a = self
        out = np.tanh(a.data)
        return self._child(out, (a,), lambda g: ((a, g * (1.0 - out * out)),), "tanh")

    def relu(self) -> "Tensor":
        a = self
        gate = (a.data > 0).astype(a.data.dtype)
        return self._child(a.data * gate, (a,), lambda g: ((a, g * gate),), "relu")

    def sigmoid(self) -> "Tensor":
        a = self
        out = np.empty_like(a.data)
        positive = a.data >= 0
        out[positive] = 1.0 / (1.0 + np.exp(-a.data[positive]))
        z = np.exp(a.data[~positive])
        out[~positive] = z / (1.0 + z)
        return self._child(out, (a,), lambda g: ((a, g * out * (1.0 - out)),), "sigmoid")

    def clip(self, low: float, high: float) -> "Tensor":
        """Clamp values; gradient passes only where no clamping happened."""
        a = self
        inside = ((a.data >= low) & (a.data <= high)).astype(a.data.dtype)
        return self._child(np.clip(a.data, low, high), (a,), lambda g: ((a, g * inside),), "clip")

    def softmax(self, axis: int = -1) -> "Tensor":
        a = self
        shifted = a.data - a.data.max(axis=axis, keepdims=True)
        e = np.exp(shifted)
        out = e / e.sum(axis=axis, keepdims=True)

        def grad_fn(g):
            return ((a, out * (g - (g * out).sum(axis=axis, keepdims=True))),)
        return self._child(out, (a,), grad_fn, "softmax")

    def gather_rows(self, ids: np.ndarray) -> "Tensor":
        """``self[ids]`` for a 2-D table; gradient scatters back to looked-up rows."""
        a = self
        ids = np.asarray(ids, dtype=np.int64)
        if a.ndim != 2:
            raise ShapeError(f"gather_rows needs a 2-D table, got {a.shape}")
        if ids.size and (ids.min() < 0 or ids.max() >= a.shape[0]):
            raise IndexError(
                f"row id out of range [0, {a.shape[0]}): min={ids.min()} max={ids.max()}")

        def grad_fn(g):
            full = np.zeros_like(a.data)
            np.add.at(full, ids.reshape(-1), g.reshape(-1, a.shape[1]))
            return ((a, full),)
        return self._child(a.data[ids], (a,), grad_fn, "gather")

    # SECTION: reverse pass
    def _topological_order(self) -> List["Tensor"]:
        order: List[Tensor] = []
        visited = set()
        stack: List[Tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if id(parent) not in visited:
                    stack.append((parent, False))
        return order

    def backward(self) -> None:
        """
        Populate ``grad`` on every leaf that requires it.

        Raises
        ------
        ShapeError
            The tensor is not a scalar.
        """
        if self.data.size != 1:
            raise ShapeError(f"backward needs a scalar loss, got shape {self.shape}")
        if not self.requires_grad:
            return

        grads = {id(self): np.ones_like(self.data)}
        for node in reversed(self._topological_order()):
            g = grads.pop(id(node), None)
            if g is None:
                continue
            if node.is_leaf:
                node.grad = g.copy() if node.grad is None else node.grad + g
                continue
            for parent, parent_grad in node._grad_fn(g):
                if not parent.requires_grad:
                    continue
                key = id(parent)
                if key in grads:
                    grads[key] = grads[key] + parent_grad
                else:
                    grads[key] = parent_grad


def backward(loss: Tensor) -> None:
    """Functional alias of ``Tensor.backward``."""
    loss.backward()


def concat(tensors: Sequence[Tensor], axis: int = -1) -> Tensor:
    """Concatenate along ``axis``; gradient is split back to the inputs."""
    if not tensors:
        raise ShapeError("concat of nothing")
    data = np.concatenate([t.data for t in tensors], axis=axis)
    bounds = np.cumsum([t.shape[axis] for t in tensors])[:-1]

    def grad_fn(g):
        return tuple(zip(tensors, np.split(g, bounds, axis=axis)))

    tracked = tuple(t for t in tensors if t.requires_grad)
    if not tracked:
        return Tensor(data)
    return Tensor(data, requires_grad=True, _parents=tracked, _grad_fn=grad_fn, _op="concat")
