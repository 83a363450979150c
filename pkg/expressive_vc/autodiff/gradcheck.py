"""Central-difference verification of analytic gradients."""
from typing import Callable, List, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from expressive_vc.common.errors import PreconditionError

from .tensor import Tensor

DEFAULT_EPS = 1e-5
# Below this gradient scale the absolute error is reported instead
DENOMINATOR_FLOOR = 1e-8


class GradCheckResult(BaseModel):
    """Outcome of one gradient check"""
    model_config = ConfigDict(frozen=True)

    max_error: float
    max_abs_error: float
    coordinates: int
    eps: float

    def passed(self, tolerance: float = 1e-4) -> bool:
        return self.max_error < tolerance


def _scalar(value: Tensor) -> float:
    if not isinstance(value, Tensor) or value.size != 1:
        shape = value.shape if isinstance(value, Tensor) else type(value).__name__
        raise PreconditionError(f"gradient check needs a scalar-valued function, got {shape}")
    return value.item()


def numerical_gradient(
    f: Callable[..., Tensor], inputs: Sequence[np.ndarray], position: int, eps: float
) -> np.ndarray:
    """(f(x + eps e_i) - f(x - eps e_i)) / 2 eps for every coordinate of one input"""
    values = [np.array(v, dtype=np.float64) for v in inputs]
    target = values[position]
    grad = np.zeros_like(target)
    for i in range(target.size):
        original = target.flat[i]
        target.flat[i] = original + eps
        upper = _scalar(f(*[Tensor(v) for v in values]))
        target.flat[i] = original - eps
        lower = _scalar(f(*[Tensor(v) for v in values]))
        target.flat[i] = original
        grad.flat[i] = (upper - lower) / (2.0 * eps)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """
    max|a - n| / max(|a|_inf, |n|_inf) over the whole gradient

    The error is normalized once by the inf-norm of the full gradient, not
    coordinate by coordinate. When both norms are at most DENOMINATOR_FLOOR the absolute
    error is returned.
    """
    if analytic.size == 0:
        return 0.0
    diff = float(np.max(np.abs(analytic - numeric)))
    scale = max(float(np.max(np.abs(analytic))), float(np.max(np.abs(numeric))))
    return diff / scale if scale > DENOMINATOR_FLOOR else diff


def check_gradients(
    f: Callable[..., Tensor],
    inputs: Union[Tensor, np.ndarray, Sequence[Union[Tensor, np.ndarray]]],
    eps: float = DEFAULT_EPS,
) -> GradCheckResult:
    """Compare backward() against central differences for every input of f

    Args:
        f: Function of one tensor per input returning a scalar tensor
        inputs: Point at which to check, one array per argument of f
        eps: Finite-difference step

    Returns:
        Largest error over all inputs

    Raises:
        PreconditionError: If f does not return a scalar
    """
    if eps <= 0:
        raise PreconditionError(f"eps must be positive, got {eps}")
    if isinstance(inputs, (Tensor, np.ndarray)):
        inputs = [inputs]
    arrays = [np.array(Tensor.lift(v).data, dtype=np.float64) for v in inputs]

    leaves = [Tensor(v, requires_grad=True) for v in arrays]
    output = f(*leaves)
    _scalar(output)
    output.backward()

    errors: List[float] = []
    abs_errors: List[float] = []
    for position, leaf in enumerate(leaves):
        analytic = leaf.grad if leaf.grad is not None else np.zeros_like(leaf.data)
        numeric = numerical_gradient(f, arrays, position, eps)
        errors.append(relative_error(analytic, numeric))
        abs_errors.append(float(np.max(np.abs(analytic - numeric))) if analytic.size else 0.0)

    return GradCheckResult(
        max_error=max(errors, default=0.0),
        max_abs_error=max(abs_errors, default=0.0),
        coordinates=sum(a.size for a in arrays),
        eps=eps,
    )


def grad_check(
    f: Callable[..., Tensor],
    x: Union[Tensor, np.ndarray, Sequence[Union[Tensor, np.ndarray]]],
    eps: float = DEFAULT_EPS,
) -> float:
    """Maximum relative error between analytic and central-difference gradients"""
    return check_gradients(f, x, eps).max_error
