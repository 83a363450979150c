import numpy as np
import pytest

from expressive_vc.autodiff import (
    Tensor,
    avg_pool1d,
    concat,
    conv1d,
    conv_transpose1d,
    grad_check,
    linear,
    pad,
    stack,
    stft_magnitude,
)
from expressive_vc.autodiff.ops import analysis_window
from expressive_vc.common.errors import PreconditionError, ShapeError


def naive_conv1d(x, w, b, stride, left, right):
    x = np.pad(x, ((0, 0), (left, right)))
    out_len = (x.shape[1] - w.shape[2]) // stride + 1
    out = np.zeros((w.shape[0], out_len))
    for o in range(w.shape[0]):
        for t in range(out_len):
            for c in range(w.shape[1]):
                for k in range(w.shape[2]):
                    out[o, t] += w[o, c, k] * x[c, t * stride + k]
            out[o, t] += b[o]
    return out


def naive_conv_transpose1d(x, w, stride):
    steps = x.shape[1]
    out = np.zeros((w.shape[0], (steps - 1) * stride + w.shape[2]))
    for o in range(w.shape[0]):
        for c in range(w.shape[1]):
            for t in range(steps):
                for k in range(w.shape[2]):
                    out[o, t * stride + k] += x[c, t] * w[o, c, k]
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(11)


@pytest.mark.parametrize("stride,padding", [(1, (0, 0)), (1, (2, 2)), (3, (1, 2)), (2, (0, 1))])
def test_conv1d_matches_loops(rng, stride, padding):
    x = rng.standard_normal((3, 17))
    w = rng.standard_normal((4, 3, 5))
    b = rng.standard_normal(4)
    out = conv1d(Tensor(x), Tensor(w), Tensor(b), stride=stride, padding=padding).numpy()
    assert np.allclose(out, naive_conv1d(x, w, b, stride, *padding), atol=1e-12)


def test_conv1d_batched(rng):
    x = rng.standard_normal((2, 3, 12))
    w = rng.standard_normal((4, 3, 3))
    out = conv1d(Tensor(x), Tensor(w)).numpy()
    assert out.shape == (2, 4, 10)
    assert np.allclose(out[1], naive_conv1d(x[1], w, np.zeros(4), 1, 0, 0))


def test_conv1d_shape_errors(rng):
    with pytest.raises(ShapeError):
        conv1d(Tensor(np.ones((3, 10))), Tensor(np.ones((4, 2, 3))))
    with pytest.raises(ShapeError):
        conv1d(Tensor(np.ones((3, 2))), Tensor(np.ones((4, 3, 5))))
    with pytest.raises(ShapeError):
        conv1d(Tensor(np.ones(10)), Tensor(np.ones((4, 1, 3))))


def test_conv_transpose_matches_loops(rng):
    x = rng.standard_normal((3, 6))
    w = rng.standard_normal((2, 3, 4))
    out = conv_transpose1d(Tensor(x), Tensor(w), stride=2).numpy()
    assert out.shape == (2, 14)
    assert np.allclose(out, naive_conv_transpose1d(x, w, 2), atol=1e-12)


def test_pad_concat_stack():
    a, b = Tensor(np.ones((2, 2))), Tensor(np.zeros((2, 3)))
    assert concat([a, b], axis=1).shape == (2, 5)
    assert stack([a, a], axis=0).shape == (2, 2, 2)
    assert np.array_equal(pad(Tensor([1.0, 2.0]), 1, 2).numpy(), [0.0, 1.0, 2.0, 0.0, 0.0])
    with pytest.raises(ShapeError):
        concat([a, b], axis=0)
    with pytest.raises(ShapeError):
        stack([a, b])
    with pytest.raises(PreconditionError):
        pad(a, -1, 0)


def test_avg_pool_drops_tail():
    out = avg_pool1d(Tensor(np.arange(7.0).reshape(1, 7)), 3).numpy()
    assert np.array_equal(out, [[1.0, 4.0]])
    with pytest.raises(ShapeError):
        avg_pool1d(Tensor(np.ones(2)), 3)


def test_stft_magnitude_matches_direct_fft(rng):
    x = rng.standard_normal(300)
    magnitude = stft_magnitude(Tensor(x), 64, 16, 48).numpy()
    padded = np.pad(x, (32, 32))
    window = analysis_window(64, 48)
    frames = 1 + (len(padded) - 64) // 16
    assert magnitude.shape == (frames, 33)
    for t in (0, 5, frames - 1):
        direct = np.abs(np.fft.rfft(padded[t * 16:t * 16 + 64] * window))
        assert np.allclose(magnitude[t], direct, atol=1e-5)


def test_analysis_window_is_centered():
    window = analysis_window(8, 4)
    assert np.array_equal(window[:2], [0.0, 0.0])
    assert np.array_equal(window[-2:], [0.0, 0.0])


def test_stft_rejects_bad_resolution():
    with pytest.raises(PreconditionError):
        stft_magnitude(Tensor(np.ones(100)), 64, 80, 64)
    with pytest.raises(ShapeError):
        stft_magnitude(Tensor(np.ones((2, 100))), 64, 16, 64)


def test_linear_gradients(rng):
    x = rng.standard_normal((4, 3))
    w = rng.standard_normal((3, 2))
    b = rng.standard_normal(2)
    error = grad_check(lambda x, w, b: linear(x, w, b).tanh().sum(), [x, w, b])
    assert error < 1e-4


@pytest.mark.parametrize("stride,padding", [(1, (2, 2)), (3, (1, 1))])
def test_conv1d_gradients(rng, stride, padding):
    x = rng.standard_normal((2, 11))
    w = rng.standard_normal((3, 2, 4))
    b = rng.standard_normal(3)
    f = lambda x, w, b: conv1d(x, w, b, stride=stride, padding=padding).square().mean()
    assert grad_check(f, [x, w, b]) < 1e-4


def test_conv_transpose_gradients(rng):
    x = rng.standard_normal((2, 5))
    w = rng.standard_normal((3, 2, 4))
    b = rng.standard_normal(3)
    f = lambda x, w, b: conv_transpose1d(x, w, b, stride=2).tanh().sum()
    assert grad_check(f, [x, w, b]) < 1e-4


def test_structural_gradients(rng):
    a = rng.standard_normal((2, 3))
    b = rng.standard_normal((2, 3))
    f = lambda a, b: (concat([a, b], axis=1).square().sum() + stack([a, b], axis=0)[1].sum()
                      + avg_pool1d(pad(a, 1, 2), 2).square().sum())
    assert grad_check(f, [a, b]) < 1e-4


def test_stft_magnitude_gradient(rng):
    x = rng.standard_normal(160)
    reference = rng.standard_normal(160)
    ref_mag = stft_magnitude(Tensor(reference), 32, 8, 24).numpy()
    f = lambda x: (stft_magnitude(x, 32, 8, 24) - Tensor(ref_mag)).square().mean()
    assert grad_check(f, x) < 1e-4
