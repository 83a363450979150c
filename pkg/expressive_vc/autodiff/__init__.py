from .tensor import Tensor, parameters
from .ops import (
    linear, concat, stack, pad, conv1d, conv_transpose1d, avg_pool1d, stft_magnitude
)
from .gradcheck import grad_check, check_gradients, GradCheckResult
from .serialization import save_tensors, load_tensors, encode_tensors, decode_tensors

__all__ = [
    'Tensor',
    'parameters',
    'linear',
    'concat',
    'stack',
    'pad',
    'conv1d',
    'conv_transpose1d',
    'avg_pool1d',
    'stft_magnitude',
    'grad_check',
    'check_gradients',
    'GradCheckResult',
    'save_tensors',
    'load_tensors',
    'encode_tensors',
    'decode_tensors'
]
