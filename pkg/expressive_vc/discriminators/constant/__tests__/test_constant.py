import numpy as np

from expressive_vc.autodiff import Tensor
from expressive_vc.common.registry import ComponentRegistry, ComponentType
from expressive_vc.discriminators.constant.adapter import ConstantDiscriminator
from expressive_vc.discriminators.constant.config import ConstantConfig


def test_constant_score_ignores_input():
    constant = ConstantDiscriminator(ConstantConfig(score=0.25, shape=(2, 3)))
    score, features = constant.forward(Tensor(np.random.default_rng(0).standard_normal(50)))
    np.testing.assert_array_equal(score.numpy(), np.full((2, 3), 0.25))
    assert features == []
    assert constant.parameters() == []
    assert constant.calls == 1


def test_registered_by_name():
    import expressive_vc.discriminators  # noqa: F401
    constant = ComponentRegistry.create(ComponentType.DISCRIMINATOR, "constant")
    assert isinstance(constant, ConstantDiscriminator)
