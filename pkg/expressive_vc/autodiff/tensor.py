"""Reverse-mode automatic differentiation over dense float64 arrays.

Every operation records its parents and a closure that pushes the output
gradient back into them. ``backward`` walks the graph in reverse
topological order, so gradients accumulate additively over fan-out.

Broadcasting is limited to the forms the models need: a scalar against a
tensor, and per-channel affine terms whose shape broadcasts into the
other operand (the result must have the shape of one of the operands).
Any other shape mixing raises ShapeError.
"""
from typing import Any, Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from typing_extensions import Self

from expressive_vc.common.errors import PreconditionError, ShapeError

ArrayLike = Union["Tensor", np.ndarray, float, int, Sequence[Any]]
Axis = Optional[Union[int, Tuple[int, ...]]]


def _broadcast_shape(a: Tuple[int, ...], b: Tuple[int, ...], op: str) -> Tuple[int, ...]:
    try:
        shape = np.broadcast_shapes(a, b)
    except ValueError:
        raise ShapeError(f"{op}: shapes {a} and {b} are incompatible")
    if shape != a and shape != b:
        raise ShapeError(f"{op}: broadcasting {a} with {b} would create a new shape {shape}")
    return shape


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum a gradient back down to the shape of a broadcast operand"""
    if grad.shape == shape:
        return grad
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad.reshape(shape)


class Tensor:
    """Differentiable n-dimensional array"""

    __slots__ = ("data", "grad", "requires_grad", "name", "_parents", "_backward")

    def __init__(
        self,
        data: ArrayLike,
        requires_grad: bool = False,
        name: Optional[str] = None,
        _parents: Tuple["Tensor", ...] = (),
        _backward: Optional[Callable[[np.ndarray], None]] = None,
    ):
        if isinstance(data, Tensor):
            data = data.data
        self.data = np.array(data, dtype=np.float64)
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad or any(p.requires_grad for p in _parents)
        self.name = name
        self._parents = _parents
        self._backward = _backward

    # Construction helpers

    @classmethod
    def zeros(cls, *shape: int, requires_grad: bool = False) -> "Tensor":
        return cls(np.zeros(shape), requires_grad=requires_grad)

    @staticmethod
    def lift(value: ArrayLike) -> "Tensor":
        """Wrap constants; tensors pass through"""
        return value if isinstance(value, Tensor) else Tensor(value)

    def _child(
        self,
        data: np.ndarray,
        parents: Tuple["Tensor", ...],
        backward: Callable[[np.ndarray], None],
    ) -> "Tensor":
        if not any(p.requires_grad for p in parents):
            return Tensor(data)
        return Tensor(data, _parents=parents, _backward=backward)

    def _accumulate(self, grad: np.ndarray) -> None:
        if not self.requires_grad:
            return
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += grad

    # Introspection

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return int(self.data.size)

    def item(self) -> float:
        if self.size != 1:
            raise ShapeError(f"item() needs a single element, got shape {self.shape}")
        return float(self.data.reshape(()))

    def numpy(self) -> np.ndarray:
        return self.data.copy()

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    def zero_grad(self) -> Self:
        self.grad = None
        return self

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"Tensor{label}(shape={self.shape}, requires_grad={self.requires_grad})"

    def __len__(self) -> int:
        return int(self.shape[0])

    # Backward pass

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
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
        return order

    def backward(self) -> None:
        """Populate ``grad`` of every reachable leaf from this scalar"""
        if self.size != 1:
            raise PreconditionError(f"backward() needs a scalar, got shape {self.shape}")
        if not self.requires_grad:
            return
        order = self._topological_order()
        # Interior gradients are recomputed on every pass; leaves accumulate
        for node in order:
            if node._parents:
                node.grad = np.zeros_like(node.data)
        self._accumulate(np.ones_like(self.data))
        for node in reversed(order):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    # Elementwise arithmetic

    def __add__(self, other: ArrayLike) -> "Tensor":
        other = Tensor.lift(other)
        _broadcast_shape(self.shape, other.shape, "add")

        def backward(grad: np.ndarray) -> None:
            self._accumulate(_unbroadcast(grad, self.shape))
            other._accumulate(_unbroadcast(grad, other.shape))

        return self._child(self.data + other.data, (self, other), backward)

    def __radd__(self, other: ArrayLike) -> "Tensor":
        return Tensor.lift(other) + self

    def __neg__(self) -> "Tensor":
        def backward(grad: np.ndarray) -> None:
            self._accumulate(-grad)

        return self._child(-self.data, (self,), backward)

    def __sub__(self, other: ArrayLike) -> "Tensor":
        return self + (-Tensor.lift(other))

    def __rsub__(self, other: ArrayLike) -> "Tensor":
        return Tensor.lift(other) + (-self)

    def __mul__(self, other: ArrayLike) -> "Tensor":
        other = Tensor.lift(other)
        _broadcast_shape(self.shape, other.shape, "mul")

        def backward(grad: np.ndarray) -> None:
            self._accumulate(_unbroadcast(grad * other.data, self.shape))
            other._accumulate(_unbroadcast(grad * self.data, other.shape))

        return self._child(self.data * other.data, (self, other), backward)

    def __rmul__(self, other: ArrayLike) -> "Tensor":
        return Tensor.lift(other) * self

    def __truediv__(self, other: ArrayLike) -> "Tensor":
        other = Tensor.lift(other)
        _broadcast_shape(self.shape, other.shape, "div")

        def backward(grad: np.ndarray) -> None:
            self._accumulate(_unbroadcast(grad / other.data, self.shape))
            other._accumulate(
                _unbroadcast(-grad * self.data / np.square(other.data), other.shape)
            )

        return self._child(self.data / other.data, (self, other), backward)

    def __rtruediv__(self, other: ArrayLike) -> "Tensor":
        return Tensor.lift(other) / self

    def __matmul__(self, other: ArrayLike) -> "Tensor":
        other = Tensor.lift(other)
        a, b = self.data, other.data
        if a.ndim not in (1, 2) or b.ndim not in (1, 2) or (a.ndim == 1 and b.ndim == 1):
            raise ShapeError(f"matmul supports matrix-matrix and matrix-vector, got {a.shape} @ {b.shape}")
        if a.shape[-1] != b.shape[0]:
            raise ShapeError(f"matmul inner dimensions differ: {a.shape} @ {b.shape}")

        def backward(grad: np.ndarray) -> None:
            if a.ndim == 2 and b.ndim == 2:
                self._accumulate(grad @ b.T)
                other._accumulate(a.T @ grad)
            elif b.ndim == 1:
                self._accumulate(np.outer(grad, b))
                other._accumulate(a.T @ grad)
            else:
                self._accumulate(b @ grad)
                other._accumulate(np.outer(a, grad))

        return self._child(a @ b, (self, other), backward)

    # Reductions

    def sum(self, axis: Axis = None, keepdims: bool = False) -> "Tensor":
        def backward(grad: np.ndarray) -> None:
            if axis is not None and not keepdims:
                grad = np.expand_dims(grad, axis)
            self._accumulate(np.broadcast_to(grad, self.shape))

        return self._child(self.data.sum(axis=axis, keepdims=keepdims), (self,), backward)

    def mean(self, axis: Axis = None, keepdims: bool = False) -> "Tensor":
        if axis is None:
            count = self.size
        else:
            axes = (axis,) if isinstance(axis, int) else axis
            count = int(np.prod([self.shape[a] for a in axes]))
        if count == 0:
            raise PreconditionError(f"mean over an empty axis of shape {self.shape}")
        return self.sum(axis=axis, keepdims=keepdims) * (1.0 / count)

    # Unary functions

    def abs(self) -> "Tensor":
        def backward(grad: np.ndarray) -> None:
            self._accumulate(grad * np.sign(self.data))

        return self._child(np.abs(self.data), (self,), backward)

    def square(self) -> "Tensor":
        def backward(grad: np.ndarray) -> None:
            self._accumulate(2.0 * grad * self.data)

        return self._child(np.square(self.data), (self,), backward)

    def sqrt(self) -> "Tensor":
        out = np.sqrt(self.data)

        def backward(grad: np.ndarray) -> None:
            # Subgradient 0 at the origin
            safe = np.where(out > 0, out, 1.0)
            self._accumulate(np.where(out > 0, grad / (2.0 * safe), 0.0))

        return self._child(out, (self,), backward)

    def log(self) -> "Tensor":
        if np.any(self.data <= 0):
            raise PreconditionError("log of a non-positive value")

        def backward(grad: np.ndarray) -> None:
            self._accumulate(grad / self.data)

        return self._child(np.log(self.data), (self,), backward)

    def exp(self) -> "Tensor":
        out = np.exp(self.data)

        def backward(grad: np.ndarray) -> None:
            self._accumulate(grad * out)

        return self._child(out, (self,), backward)

    def tanh(self) -> "Tensor":
        out = np.tanh(self.data)

        def backward(grad: np.ndarray) -> None:
            self._accumulate(grad * (1.0 - np.square(out)))

        return self._child(out, (self,), backward)

    def relu(self) -> "Tensor":
        def backward(grad: np.ndarray) -> None:
            self._accumulate(grad * (self.data > 0))

        return self._child(np.maximum(self.data, 0.0), (self,), backward)

    def leaky_relu(self, slope: float = 0.1) -> "Tensor":
        scale = np.where(self.data > 0, 1.0, slope)

        def backward(grad: np.ndarray) -> None:
            self._accumulate(grad * scale)

        return self._child(self.data * scale, (self,), backward)

    def softmax(self, axis: int = -1) -> "Tensor":
        shifted = self.data - self.data.max(axis=axis, keepdims=True)
        weights = np.exp(shifted)
        out = weights / weights.sum(axis=axis, keepdims=True)

        def backward(grad: np.ndarray) -> None:
            inner = (grad * out).sum(axis=axis, keepdims=True)
            self._accumulate(out * (grad - inner))

        return self._child(out, (self,), backward)

    def layer_norm(self, axis: int = -1, eps: float = 1e-5) -> "Tensor":
        """Normalize to zero mean and unit variance along one axis (no affine)"""
        mean = self.data.mean(axis=axis, keepdims=True)
        centered = self.data - mean
        std = np.sqrt(np.square(centered).mean(axis=axis, keepdims=True) + eps)
        normed = centered / std

        def backward(grad: np.ndarray) -> None:
            g_mean = grad.mean(axis=axis, keepdims=True)
            gx_mean = (grad * normed).mean(axis=axis, keepdims=True)
            self._accumulate((grad - g_mean - normed * gx_mean) / std)

        return self._child(normed, (self,), backward)

    # Shape manipulation

    def reshape(self, *shape: int) -> "Tensor":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        try:
            out = self.data.reshape(shape)
        except ValueError:
            raise ShapeError(f"cannot reshape {self.shape} into {shape}")

        def backward(grad: np.ndarray) -> None:
            self._accumulate(grad.reshape(self.shape))

        return self._child(out, (self,), backward)

    def transpose(self, *axes: int) -> "Tensor":
        order = tuple(axes) if axes else tuple(reversed(range(self.ndim)))
        inverse = tuple(np.argsort(order))

        def backward(grad: np.ndarray) -> None:
            self._accumulate(grad.transpose(inverse))

        return self._child(self.data.transpose(order), (self,), backward)

    @property
    def T(self) -> "Tensor":
        return self.transpose()

    def __getitem__(self, index: Any) -> "Tensor":
        def backward(grad: np.ndarray) -> None:
            full = np.zeros_like(self.data)
            np.add.at(full, index, grad)
            self._accumulate(full)

        return self._child(self.data[index], (self,), backward)


def parameters(tensors: Iterable[Tensor]) -> List[Tensor]:
    """Tensors that take part in gradient updates"""
    return [t for t in tensors if t.requires_grad]
