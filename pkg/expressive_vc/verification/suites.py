"""Named gradient-check suites over the differentiable building blocks.

Each suite checks small random instances at 64-bit and returns one result
per case. Suites are registered by name so the CLI can run them one at a
time or all together.
"""
from typing import Callable, List, Tuple

import numpy as np

from expressive_vc.autodiff import GradCheckResult, Tensor, check_gradients
from expressive_vc.autodiff.gradcheck import DEFAULT_EPS
from expressive_vc.common.logging import get_logger
from expressive_vc.common.registry import ComponentRegistry, ComponentType
from expressive_vc.common.seeding import make_rng
from expressive_vc.features.encoders import ConvBlock, bnf_forward, pwav_forward
from expressive_vc.fusion.attention import fuse_concat_tensor, fuse_tensor
from expressive_vc.prosody.encoder import prosody_forward
from expressive_vc.prosody.normalize import cln_tensor
from expressive_vc.training.losses import adversarial_losses, feature_matching_loss, stft_loss

logger = get_logger("verification.suites")

SuiteCase = Tuple[str, GradCheckResult]
Suite = Callable[[float, int], List[SuiteCase]]

# Small resolutions keep the finite-difference sweep over a 480-sample signal quick
LOSS_RESOLUTIONS = [(64, 16, 64), (128, 32, 96), (256, 64, 256)]


def _projection(rng: np.random.Generator, shape: Tuple[int, ...]) -> Tensor:
    """Fixed random weighting that turns a tensor output into a scalar"""
    return Tensor(rng.standard_normal(shape))


def _block(rng: np.random.Generator, c_in: int, c_out: int, kernel: int) -> List[np.ndarray]:
    return [
        rng.standard_normal((c_out, c_in, kernel)) * 0.5,
        rng.standard_normal(c_out) * 0.1,
        1.0 + rng.standard_normal(c_out) * 0.1,
        rng.standard_normal(c_out) * 0.1 + 0.5,
    ]


@ComponentRegistry.register(ComponentType.GRADCHECK_SUITE, "fusion")
def fusion_suite(eps: float = DEFAULT_EPS, seed: int = 0) -> List[SuiteCase]:
    rng = make_rng(seed, "gradcheck.fusion")
    frames, dim = 6, 4
    inputs = [rng.standard_normal((frames, dim)) for _ in range(3)]
    proj_f = _projection(rng, (frames, dim))
    proj_w = _projection(rng, (frames, 2))

    def attention(h_b: Tensor, h_w: Tensor, h_p: Tensor) -> Tensor:
        h_f, weights = fuse_tensor(h_b, h_w, h_p)
        return (h_f * proj_f).sum() + (weights * proj_w).sum()

    projection = rng.standard_normal((2 * dim, dim)) * 0.3
    bias = rng.standard_normal(dim) * 0.1

    def concat(h_b: Tensor, h_w: Tensor, w: Tensor, b: Tensor) -> Tensor:
        return (fuse_concat_tensor(h_b, h_w, w, b) * proj_f).sum()

    return [
        ("fusion.attention", check_gradients(attention, inputs, eps)),
        ("fusion.concat", check_gradients(concat, inputs[:2] + [projection, bias], eps)),
    ]


@ComponentRegistry.register(ComponentType.GRADCHECK_SUITE, "cln")
def cln_suite(eps: float = DEFAULT_EPS, seed: int = 0) -> List[SuiteCase]:
    rng = make_rng(seed, "gradcheck.cln")
    frames, channels, speaker_dim, dim = 5, 3, 4, 4
    x = rng.standard_normal((frames, channels))
    spk = rng.standard_normal(speaker_dim)
    w_gamma = rng.standard_normal((channels, speaker_dim)) * 0.3
    w_beta = rng.standard_normal((channels, speaker_dim)) * 0.3
    proj = _projection(rng, (frames, channels))

    def layer(x: Tensor, spk: Tensor, w_gamma: Tensor, w_beta: Tensor) -> Tensor:
        return (cln_tensor(x, spk, w_gamma, w_beta) * proj).sum()

    f0 = rng.standard_normal(frames)
    energy = rng.uniform(0.1, 1.0, frames)
    g1 = rng.standard_normal((1, speaker_dim)) * 0.3
    b1 = rng.standard_normal((1, speaker_dim)) * 0.3
    projection = rng.standard_normal((2, dim))
    bias = rng.standard_normal(dim) * 0.1
    proj_p = _projection(rng, (frames, dim))

    def encoder(f0: Tensor, energy: Tensor, spk: Tensor, g: Tensor, b: Tensor, w: Tensor, c: Tensor) -> Tensor:
        return (prosody_forward(f0, energy, spk, g, b, w, c) * proj_p).sum()

    return [
        ("cln.layer", check_gradients(layer, [x, spk, w_gamma, w_beta], eps)),
        ("cln.prosody_encoder", check_gradients(encoder, [f0, energy, spk, g1, b1, projection, bias], eps)),
    ]


@ComponentRegistry.register(ComponentType.GRADCHECK_SUITE, "encoders")
def encoders_suite(eps: float = DEFAULT_EPS, seed: int = 0) -> List[SuiteCase]:
    rng = make_rng(seed, "gradcheck.encoders")
    frames, bnf_dim, dim = 6, 3, 4
    bnf = rng.standard_normal((frames, bnf_dim))
    bnf_weights = _block(rng, bnf_dim, dim, 3)
    proj_b = _projection(rng, (frames, dim))

    def bnf_encoder(x: Tensor, kernel: Tensor, bias: Tensor, scale: Tensor, shift: Tensor) -> Tensor:
        return (bnf_forward(x, [ConvBlock(kernel, bias, scale, shift)]) * proj_b).sum()

    strides = (2, 3)
    samples = rng.standard_normal(frames * strides[0] * strides[1])
    first = _block(rng, 1, 3, 2 * strides[0])
    second = _block(rng, 3, dim, 2 * strides[1])
    proj_w = _projection(rng, (frames, dim))

    def pwav_encoder(x: Tensor, k1: Tensor, k2: Tensor, s2: Tensor) -> Tensor:
        blocks = [
            ConvBlock(k1, Tensor(first[1]), Tensor(first[2]), Tensor(first[3]), strides[0]),
            ConvBlock(k2, Tensor(second[1]), s2, Tensor(second[3]), strides[1]),
        ]
        return (pwav_forward(x, blocks, frames) * proj_w).sum()

    return [
        ("encoders.bnf", check_gradients(bnf_encoder, [bnf] + bnf_weights, eps)),
        ("encoders.pwav", check_gradients(pwav_encoder, [samples, first[0], second[0], second[2]], eps)),
    ]


@ComponentRegistry.register(ComponentType.GRADCHECK_SUITE, "losses")
def losses_suite(eps: float = DEFAULT_EPS, seed: int = 0) -> List[SuiteCase]:
    rng = make_rng(seed, "gradcheck.losses")
    length = 480
    t = np.arange(length) / 24000.0
    y = Tensor(0.5 * np.sin(2 * np.pi * 220.0 * t) + 0.05 * rng.standard_normal(length))
    y_hat = 0.3 * np.sin(2 * np.pi * 330.0 * t) + 0.05 * rng.standard_normal(length)

    def spectral(y_hat: Tensor) -> Tensor:
        return stft_loss(y, y_hat, LOSS_RESOLUTIONS)

    shapes = [[(4, 7), (6, 3)], [(5,)]]
    real = [[Tensor(rng.standard_normal(s)) for s in layers] for layers in shapes]
    fake = [rng.standard_normal(s) for layers in shapes for s in layers]

    def matching(a: Tensor, b: Tensor, c: Tensor) -> Tensor:
        return feature_matching_loss(real, [[a, b], [c]])

    d_real = [Tensor(rng.standard_normal((2, 5))), Tensor(rng.standard_normal(3))]
    d_fake = [rng.standard_normal((2, 5)), rng.standard_normal(3)]

    def adversarial(a: Tensor, b: Tensor) -> Tensor:
        adv_g, adv_d = adversarial_losses(d_real, [a, b])
        return adv_g + adv_d * 0.5

    return [
        ("losses.stft", check_gradients(spectral, [y_hat], eps)),
        ("losses.feature_matching", check_gradients(matching, fake, eps)),
        ("losses.adversarial", check_gradients(adversarial, d_fake, eps)),
    ]


def suite_names() -> List[str]:
    return ComponentRegistry.names(ComponentType.GRADCHECK_SUITE)


def run_suites(names: List[str], eps: float = DEFAULT_EPS, seed: int = 0) -> List[SuiteCase]:
    """
    Run suites in order

    Raises:
        KeyError: If a suite name is unknown
    """
    results: List[SuiteCase] = []
    for name in names:
        suite = ComponentRegistry.get(ComponentType.GRADCHECK_SUITE, name)
        if suite is None:
            raise KeyError(f"unknown gradient-check suite '{name}'; choose from {suite_names()}")
        cases = suite(eps, seed)
        for case, result in cases:
            logger.debug(f"{case}: max relative error {result.max_error:.3e}")
        results.extend(cases)
    return results


def format_table(results: List[SuiteCase], eps: float, tolerance: float = 1e-4) -> str:
    """Fixed-width table with an eps header and a PASS/FAIL column"""
    lines = [f"gradcheck eps = {eps:g} tolerance = {tolerance:g}", f"{'case':<28} {'max_rel_err':>12} status"]
    for case, result in results:
        status = "PASS" if result.passed(tolerance) else "FAIL"
        lines.append(f"{case:<28} {result.max_error:>12.3e} {status}")
    return "\n".join(lines) + "\n"
