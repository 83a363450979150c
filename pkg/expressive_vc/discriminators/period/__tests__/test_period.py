import numpy as np
import pytest

from expressive_vc.autodiff import Tensor
from expressive_vc.common.errors import ShapeError
from expressive_vc.discriminators.period.adapter import PeriodDiscriminator
from expressive_vc.discriminators.period.config import PeriodConfig


@pytest.fixture
def discriminator():
    config = PeriodConfig(name="mpd.3", period=3)
    return PeriodDiscriminator(config, np.random.default_rng(0))


def test_fold_interleaves_samples(discriminator):
    """Row r of the folded view holds samples r, r + p, r + 2p, ..."""
    y = Tensor(np.arange(9.0))
    folded = discriminator.fold(y).numpy()
    assert folded.shape == (3, 1, 3)
    np.testing.assert_array_equal(folded[1, 0], [1.0, 4.0, 7.0])


def test_fold_zero_pads_to_a_multiple_of_the_period(discriminator):
    folded = discriminator.fold(Tensor(np.ones(10))).numpy()
    assert folded.shape == (3, 1, 4)
    assert folded.sum() == 10.0


def test_forward_returns_two_hidden_features(discriminator):
    score, features = discriminator.forward(Tensor(np.random.default_rng(1).standard_normal(300)))
    assert score.shape[0] == 3
    assert score.shape[1] == 1
    assert [f.shape[1] for f in features] == [8, 16]


def test_gradients_reach_every_parameter(discriminator):
    y = Tensor(np.random.default_rng(2).standard_normal(120), requires_grad=True)
    score, features = discriminator.forward(y)
    (score.square().mean() + features[0].mean()).backward()
    assert y.grad is not None
    assert all(p.grad is not None for p in discriminator.parameters())


def test_state_round_trip_restores_weights(discriminator):
    other = PeriodDiscriminator(PeriodConfig(name="mpd.3", period=3), np.random.default_rng(9))
    other.load_state(discriminator.state())
    y = Tensor(np.linspace(-1, 1, 90))
    np.testing.assert_array_equal(other.forward(y)[0].numpy(), discriminator.forward(y)[0].numpy())


def test_rejects_empty_waveform(discriminator):
    with pytest.raises(ShapeError):
        discriminator.forward(Tensor(np.zeros(0)))
