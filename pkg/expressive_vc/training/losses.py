"""Generator and discriminator objectives.

Least-squares adversarial terms, L1 feature matching and the multi-resolution
STFT loss (spectral convergence plus log-magnitude L1) are combined per
output path. The fused path always counts; the auxiliary path that decodes
H_w + H_p directly is added with its own weight.
"""
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from expressive_vc.autodiff import Tensor, stft_magnitude
from expressive_vc.common.errors import ShapeError
from expressive_vc.discriminators.bank import DiscriminatorBank
from expressive_vc.domain.config import LossWeights
from expressive_vc.domain.losses import DEFAULT_STFT_RESOLUTIONS, LossBreakdown, StftResolution

Features = List[List[Tensor]]


def _zero() -> Tensor:
    return Tensor(0.0)


def stft_loss(
    y: Tensor, y_hat: Tensor, resolutions: Sequence[StftResolution] = DEFAULT_STFT_RESOLUTIONS
) -> Tensor:
    """
    Sum over resolutions of ||M - M_hat||_F / ||M||_F + mean|log M - log M_hat|

    Raises:
        ShapeError: If the signals differ in length
    """
    if y.shape != y_hat.shape or y.ndim != 1:
        raise ShapeError(f"STFT loss needs equal-length waveforms, got {y.shape} and {y_hat.shape}")
    total = _zero()
    for n_fft, hop, win in resolutions:
        m = stft_magnitude(y, n_fft, hop, win)
        m_hat = stft_magnitude(y_hat, n_fft, hop, win)
        convergence = (m - m_hat).square().sum().sqrt() / m.square().sum().sqrt()
        log_magnitude = (m.log() - m_hat.log()).abs().mean()
        total = total + convergence + log_magnitude
    return total


def feature_matching_loss(real: Features, fake: Features) -> Tensor:
    """
    Mean over discriminators (with features) of the mean layer-wise L1 distance

    Raises:
        ShapeError: If the two feature structures differ
    """
    if len(real) != len(fake):
        raise ShapeError(f"feature lists cover {len(real)} and {len(fake)} discriminators")
    per_discriminator: List[Tensor] = []
    for index, (layers_real, layers_fake) in enumerate(zip(real, fake)):
        if len(layers_real) != len(layers_fake):
            raise ShapeError(
                f"discriminator {index}: {len(layers_real)} real vs {len(layers_fake)} fake layers"
            )
        if not layers_real:
            continue
        distance = _zero()
        for r, f in zip(layers_real, layers_fake):
            if r.shape != f.shape:
                raise ShapeError(f"discriminator {index}: feature shapes {r.shape} and {f.shape} differ")
            distance = distance + (r.detach() - f).abs().mean()
        per_discriminator.append(distance / len(layers_real))
    if not per_discriminator:
        return _zero()
    total = per_discriminator[0]
    for term in per_discriminator[1:]:
        total = total + term
    return total / len(per_discriminator)


def adversarial_losses(d_real: Sequence[Tensor], d_fake: Sequence[Tensor]) -> Tuple[Tensor, Tensor]:
    """
    Least-squares objectives summed over discriminators

    Returns:
        (generator term sum (D(y_hat) - 1)^2, discriminator term
        sum (D(y) - 1)^2 + D(y_hat)^2), each averaged over score elements
    """
    if len(d_real) != len(d_fake):
        raise ShapeError(f"{len(d_real)} real scores vs {len(d_fake)} fake scores")
    adv_g, adv_d = _zero(), _zero()
    for real, fake in zip(d_real, d_fake):
        adv_g = adv_g + (fake - 1.0).square().mean()
        adv_d = adv_d + (real - 1.0).square().mean() + fake.square().mean()
    return adv_g, adv_d


class PathLosses(BaseModel):
    """Differentiable terms of one output path"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    adv_g: Tensor
    adv_d: Tensor
    fm: Tensor
    stft: Tensor

    def generator_total(self, weights: LossWeights) -> Tensor:
        return self.adv_g * weights.adv + self.fm * weights.fm + self.stft * weights.stft


def path_losses(
    y: Tensor,
    y_hat: Tensor,
    discriminators: DiscriminatorBank,
    resolutions: Sequence[StftResolution],
) -> PathLosses:
    """Every term for one generated waveform

    The discriminator term scores a detached copy of y_hat so it only
    trains the discriminators; the generator terms keep the graph.
    """
    if y.shape != y_hat.shape:
        raise ShapeError(f"target {y.shape} and generated {y_hat.shape} lengths differ")
    target = y.detach()
    real_scores, real_features = discriminators(target)
    fake_scores, fake_features = discriminators(y_hat)
    detached_scores, _ = discriminators(y_hat.detach())
    adv_g, _ = adversarial_losses(real_scores, fake_scores)
    _, adv_d = adversarial_losses(real_scores, detached_scores)
    return PathLosses(
        adv_g=adv_g,
        adv_d=adv_d,
        fm=feature_matching_loss(real_features, fake_features),
        stft=stft_loss(target, y_hat, resolutions),
    )


class LossTerms(BaseModel):
    """Weighted totals ready for backward, plus their float breakdown"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    total_g: Tensor
    total_d: Tensor
    breakdown: LossBreakdown


def compute_losses(
    y: Tensor,
    y_hat_f: Tensor,
    y_hat_w: Optional[Tensor],
    discriminators: DiscriminatorBank,
    resolutions: Sequence[StftResolution] = DEFAULT_STFT_RESOLUTIONS,
    loss_weights: Optional[LossWeights] = None,
    aux_weight: float = 1.0,
) -> LossTerms:
    """
    Two-path composition: L_G = L_G(y_hat_f) + aux_weight * L_G(y_hat_w), same for L_D

    Component fields of the breakdown carry the same path weighting, so with
    unit loss weights total_g = adv_g + fm + stft.
    """
    loss_weights = loss_weights or LossWeights()
    paths = [(y_hat_f, 1.0)]
    if y_hat_w is not None and aux_weight > 0:
        paths.append((y_hat_w, aux_weight))

    total_g, total_d = _zero(), _zero()
    adv_g = adv_d = fm = stft = 0.0
    for y_hat, weight in paths:
        terms = path_losses(y, y_hat, discriminators, resolutions)
        total_g = total_g + terms.generator_total(loss_weights) * weight
        total_d = total_d + terms.adv_d * weight
        adv_g += weight * terms.adv_g.item()
        adv_d += weight * terms.adv_d.item()
        fm += weight * terms.fm.item()
        stft += weight * terms.stft.item()

    breakdown = LossBreakdown(
        adv_g=adv_g, adv_d=adv_d, fm=fm, stft=stft,
        total_g=total_g.item(), total_d=total_d.item(),
    )
    return LossTerms(total_g=total_g, total_d=total_d, breakdown=breakdown)


def total_losses(
    y: Tensor,
    y_hat_f: Tensor,
    y_hat_w: Optional[Tensor],
    discriminators: DiscriminatorBank,
    resolutions: Sequence[StftResolution] = DEFAULT_STFT_RESOLUTIONS,
    loss_weights: Optional[LossWeights] = None,
    aux_weight: float = 1.0,
) -> LossBreakdown:
    """Float breakdown of compute_losses"""
    return compute_losses(
        y, y_hat_f, y_hat_w, discriminators, resolutions, loss_weights, aux_weight
    ).breakdown
