import numpy as np
import pytest

from expressive_vc.autodiff import Tensor, check_gradients, grad_check
from expressive_vc.autodiff.gradcheck import numerical_gradient, relative_error
from expressive_vc.common.errors import PreconditionError


def test_correct_gradient_passes():
    result = check_gradients(lambda x: x.square().sum(), np.array([1.0, -2.0, 3.0]))
    assert result.passed()
    assert result.coordinates == 3
    assert result.eps == 1e-5


class WrongSquare:
    """x^2 whose backward reports 3x instead of 2x"""

    def __call__(self, x: Tensor) -> Tensor:
        def backward(grad):
            x._accumulate(grad * 3.0 * x.data)

        return x._child(x.data ** 2, (x,), backward).sum()


def test_wrong_gradient_is_caught():
    error = grad_check(WrongSquare(), np.array([1.0, 2.0]))
    # |3x - 2x| / max|3x| = 1/3
    assert error == pytest.approx(1.0 / 3.0, rel=1e-6)


def test_unused_input_has_zero_error():
    result = check_gradients(lambda a, b: a.sum(), [np.ones(2), np.ones(3)])
    assert result.max_error < 1e-8
    assert result.coordinates == 5


def test_non_scalar_output_is_rejected():
    with pytest.raises(PreconditionError):
        grad_check(lambda x: x * 2.0, np.ones(3))


def test_non_positive_eps_is_rejected():
    with pytest.raises(PreconditionError):
        grad_check(lambda x: x.sum(), np.ones(3), eps=0.0)


def test_numerical_gradient_of_cubic():
    x = np.array([0.5, -1.5])
    grad = numerical_gradient(lambda t: (t * t * t).sum(), [x], 0, 1e-5)
    assert np.allclose(grad, 3 * x ** 2, atol=1e-8)
    # The input is restored
    assert np.array_equal(x, [0.5, -1.5])


def test_relative_error_floor():
    assert relative_error(np.zeros(2), np.full(2, 1e-10)) == pytest.approx(1e-10)
    assert relative_error(np.array([2.0]), np.array([1.0])) == pytest.approx(0.5)
    assert relative_error(np.zeros(0), np.zeros(0)) == 0.0


def test_relative_error_uses_the_whole_gradient_scale():
    # 1e-3 off on an entry of 1e-3 is 100% per coordinate, 1e-3 over the gradient
    analytic = np.array([1.0, 1e-3])
    numeric = np.array([1.0, 2e-3])
    assert relative_error(analytic, numeric) == pytest.approx(1e-3)
