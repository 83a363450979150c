"""Prosody-queried fusion of the BNF and perturbed-waveform features.

For every frame the prosody feature scores both content features with a
scaled dot product; a two-way softmax turns the scores into the weights
(w_b, w_w) of a convex combination.
"""
import csv
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from expressive_vc.autodiff import Tensor, concat, linear, stack
from expressive_vc.common.errors import PreconditionError, ShapeError
from expressive_vc.domain.fusion import FusionOutput


def _check_shapes(h_b: Tensor, h_w: Tensor, h_p: Tensor) -> None:
    if h_b.ndim != 2 or h_b.shape != h_w.shape or h_b.shape != h_p.shape:
        raise ShapeError(
            f"fusion needs three T x F matrices of one shape, got "
            f"{h_b.shape}, {h_w.shape}, {h_p.shape}"
        )


def fuse_tensor(h_b: Tensor, h_w: Tensor, h_p: Tensor) -> Tuple[Tensor, Tensor]:
    """Differentiable fusion returning (H_f, weights) with weights T x 2"""
    _check_shapes(h_b, h_w, h_p)
    scale = 1.0 / np.sqrt(h_b.shape[1])
    scores = stack([(h_p * h_b).sum(axis=1), (h_p * h_w).sum(axis=1)], axis=1) * scale
    weights = scores.softmax(axis=1)
    h_f = h_b * weights[:, 0:1] + h_w * weights[:, 1:2]
    return h_f, weights


def fuse_concat_tensor(h_b: Tensor, h_w: Tensor, projection: Tensor, bias: Tensor) -> Tensor:
    """Ablation without attention: linear map of concat(H_b, H_w) from 2F to F"""
    if h_b.ndim != 2 or h_b.shape != h_w.shape:
        raise ShapeError(f"concat fusion needs equal T x F inputs, got {h_b.shape}, {h_w.shape}")
    if projection.shape != (2 * h_b.shape[1], h_b.shape[1]):
        raise ShapeError(f"projection {projection.shape} does not map 2F to F")
    return linear(concat([h_b, h_w], axis=1), projection, bias)


def fuse(h_b: np.ndarray, h_w: np.ndarray, h_p: np.ndarray) -> FusionOutput:
    """
    Fuse H_b and H_w under the prosody query H_p

    Raises:
        ShapeError: If the three matrices differ in shape
        PreconditionError: If any input is not finite
    """
    arrays = [np.asarray(a, dtype=np.float64) for a in (h_b, h_w, h_p)]
    if not all(np.all(np.isfinite(a)) for a in arrays):
        raise PreconditionError("fusion inputs must be finite")
    h_f, weights = fuse_tensor(*(Tensor(a) for a in arrays))
    return FusionOutput(h_f=h_f.numpy(), weights=weights.numpy())


def weight_trajectory(output: FusionOutput) -> List[Tuple[int, float]]:
    """(frame index, w_b) for every frame"""
    return [(index, float(w)) for index, w in enumerate(output.w_b)]


def write_weight_csv(path: Union[str, Path], output: FusionOutput) -> None:
    """Header "frame,w_b" and one row per frame"""
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["frame", "w_b"])
            for index, w_b in weight_trajectory(output):
                writer.writerow([index, f"{w_b:.9g}"])
    except OSError as e:
        raise OSError(f"Cannot write {path}: {e}") from e
