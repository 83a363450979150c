"""Structured operations built on Tensor: joins, padding, convolutions and |STFT|."""
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import signal

from expressive_vc.common.errors import PreconditionError, ShapeError

from .tensor import ArrayLike, Tensor

# Guard inside the magnitude square root; keeps the gradient finite at |z| = 0
STFT_EPS = 1e-12


def linear(x: Tensor, weight: Tensor, bias: Optional[Tensor] = None) -> Tensor:
    """x @ weight (+ bias); weight is (in, out), bias is (out,)"""
    out = x @ weight
    return out if bias is None else out + bias


def concat(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    if not tensors:
        raise PreconditionError("concat needs at least one tensor")
    tensors = [Tensor.lift(t) for t in tensors]
    try:
        data = np.concatenate([t.data for t in tensors], axis=axis)
    except ValueError as e:
        raise ShapeError(f"concat: {e}")
    bounds = np.cumsum([0] + [t.shape[axis] for t in tensors])

    def backward(grad: np.ndarray) -> None:
        for tensor, start, stop in zip(tensors, bounds[:-1], bounds[1:]):
            index = [slice(None)] * grad.ndim
            index[axis] = slice(start, stop)
            tensor._accumulate(grad[tuple(index)])

    return tensors[0]._child(data, tuple(tensors), backward)


def stack(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    if not tensors:
        raise PreconditionError("stack needs at least one tensor")
    tensors = [Tensor.lift(t) for t in tensors]
    try:
        data = np.stack([t.data for t in tensors], axis=axis)
    except ValueError as e:
        raise ShapeError(f"stack: {e}")

    def backward(grad: np.ndarray) -> None:
        for position, tensor in enumerate(tensors):
            tensor._accumulate(np.take(grad, position, axis=axis))

    return tensors[0]._child(data, tuple(tensors), backward)


def pad(x: Tensor, left: int, right: int, axis: int = -1) -> Tensor:
    """Zero padding along one axis"""
    if left < 0 or right < 0:
        raise PreconditionError(f"padding must be non-negative, got ({left}, {right})")
    widths = [(0, 0)] * x.ndim
    widths[axis] = (left, right)
    length = x.shape[axis]

    def backward(grad: np.ndarray) -> None:
        index = [slice(None)] * grad.ndim
        index[axis] = slice(left, left + length)
        x._accumulate(grad[tuple(index)])

    return x._child(np.pad(x.data, widths), (x,), backward)


def _batched(x: Tensor) -> Tuple[Tensor, bool]:
    if x.ndim == 2:
        return x.reshape(1, *x.shape), True
    if x.ndim == 3:
        return x, False
    raise ShapeError(f"expected (C, T) or (B, C, T), got {x.shape}")


def _frame_index(count: int, length: int, step: int) -> np.ndarray:
    return np.arange(count)[:, None] * step + np.arange(length)[None, :]


def conv1d(
    x: Tensor,
    weight: Tensor,
    bias: Optional[Tensor] = None,
    stride: int = 1,
    padding: Tuple[int, int] = (0, 0),
) -> Tensor:
    """1-D cross-correlation

    Args:
        x: (C, T) or (B, C, T)
        weight: (O, C, K)
        bias: (O,)
        stride: Step between output positions
        padding: Zeros added (left, right) before convolving

    Returns:
        (O, T_out) or (B, O, T_out) with T_out = (T + left + right - K) // stride + 1
    """
    x3, squeeze = _batched(x)
    if weight.ndim != 3 or weight.shape[1] != x3.shape[1]:
        raise ShapeError(f"conv1d weight {weight.shape} does not fit input {x.shape}")
    if stride < 1:
        raise PreconditionError(f"stride must be positive, got {stride}")
    left, right = padding
    padded = pad(x3, left, right) if (left or right) else x3
    kernel = weight.shape[2]
    length = padded.shape[2]
    if length < kernel:
        raise ShapeError(f"conv1d input of length {length} is shorter than kernel {kernel}")
    count = (length - kernel) // stride + 1
    index = _frame_index(count, kernel, stride)
    columns = padded.data[:, :, index]  # (B, C, T_out, K)
    out = np.einsum("bctk,ock->bot", columns, weight.data)

    def backward(grad: np.ndarray) -> None:
        weight._accumulate(np.einsum("bot,bctk->ock", grad, columns))
        if padded.requires_grad:
            grad_columns = np.einsum("bot,ock->bctk", grad, weight.data)
            full = np.zeros_like(padded.data)
            np.add.at(full, (slice(None), slice(None), index), grad_columns)
            padded._accumulate(full)

    result = padded._child(out, (padded, weight), backward)
    if bias is not None:
        result = result + bias.reshape(-1, 1)
    return result.reshape(*result.shape[1:]) if squeeze else result


def conv_transpose1d(
    x: Tensor,
    weight: Tensor,
    bias: Optional[Tensor] = None,
    stride: int = 1,
) -> Tensor:
    """Transposed 1-D convolution without cropping

    Args:
        x: (C, T) or (B, C, T)
        weight: (O, C, K)
        bias: (O,)
        stride: Upsampling factor

    Returns:
        (O, L) or (B, O, L) with L = (T - 1) * stride + K
    """
    x3, squeeze = _batched(x)
    if weight.ndim != 3 or weight.shape[1] != x3.shape[1]:
        raise ShapeError(f"conv_transpose1d weight {weight.shape} does not fit input {x.shape}")
    batch, _, steps = x3.shape
    out_channels, _, kernel = weight.shape
    total = (steps - 1) * stride + kernel
    index = _frame_index(steps, kernel, stride)
    contributions = np.einsum("bct,ock->botk", x3.data, weight.data)
    out = np.zeros((batch, out_channels, total))
    np.add.at(out, (slice(None), slice(None), index), contributions)

    def backward(grad: np.ndarray) -> None:
        grad_contrib = grad[:, :, index]  # (B, O, T, K)
        x3._accumulate(np.einsum("botk,ock->bct", grad_contrib, weight.data))
        weight._accumulate(np.einsum("botk,bct->ock", grad_contrib, x3.data))

    result = x3._child(out, (x3, weight), backward)
    if bias is not None:
        result = result + bias.reshape(-1, 1)
    return result.reshape(*result.shape[1:]) if squeeze else result


def avg_pool1d(x: Tensor, factor: int) -> Tensor:
    """Non-overlapping average pooling of the last axis; the tail is dropped"""
    if factor == 1:
        return x
    usable = (x.shape[-1] // factor) * factor
    if usable == 0:
        raise ShapeError(f"cannot pool length {x.shape[-1]} by {factor}")
    trimmed = x[..., :usable]
    return trimmed.reshape(*x.shape[:-1], usable // factor, factor).mean(axis=-1)


@lru_cache(maxsize=32)
def analysis_window(n_fft: int, win_length: int) -> np.ndarray:
    """Periodic Hann window of win_length, zero padded to n_fft and centered"""
    window = signal.get_window("hann", win_length, fftbins=True)
    left = (n_fft - win_length) // 2
    padded = np.zeros(n_fft)
    padded[left:left + win_length] = window
    padded.setflags(write=False)
    return padded


def stft_magnitude(x: ArrayLike, n_fft: int, hop: int, win_length: int) -> Tensor:
    """Magnitude spectrogram |STFT(x)| of a 1-D signal

    The signal is zero padded by n_fft // 2 on both sides so frames are
    centered on multiples of ``hop``. Magnitudes are sqrt(re^2 + im^2 + eps).

    Returns:
        (frames, n_fft // 2 + 1)
    """
    x = Tensor.lift(x)
    if x.ndim != 1:
        raise ShapeError(f"stft_magnitude expects a 1-D signal, got {x.shape}")
    if not 0 < hop <= win_length <= n_fft or n_fft % 2:
        raise PreconditionError(f"invalid STFT resolution ({n_fft}, {hop}, {win_length})")
    half = n_fft // 2
    padded = np.pad(x.data, (half, half))
    count = 1 + (padded.shape[0] - n_fft) // hop
    index = _frame_index(count, n_fft, hop)
    window = analysis_window(n_fft, win_length)
    spectrum = np.fft.rfft(padded[index] * window, axis=-1)
    magnitude = np.sqrt(spectrum.real ** 2 + spectrum.imag ** 2 + STFT_EPS)

    def backward(grad: np.ndarray) -> None:
        weighted = grad * spectrum / magnitude
        weighted[:, 0] *= 2.0
        weighted[:, -1] *= 2.0
        frames = (n_fft / 2.0) * np.fft.irfft(weighted, n=n_fft, axis=-1) * window
        full = np.zeros_like(padded)
        np.add.at(full, index, frames)
        x._accumulate(full[half:half + x.shape[0]])

    return x._child(magnitude, (x,), backward)
