from .attention import fuse, fuse_tensor, fuse_concat_tensor, weight_trajectory, write_weight_csv

__all__ = [
    'fuse',
    'fuse_tensor',
    'fuse_concat_tensor',
    'weight_trajectory',
    'write_weight_csv'
]
