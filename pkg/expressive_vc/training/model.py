"""Generator parameters, forward pass and weight files."""
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from expressive_vc.autodiff import Tensor, load_tensors, save_tensors
from expressive_vc.common.errors import AudioFormatError, ShapeError
from expressive_vc.common.logging import get_logger
from expressive_vc.common.seeding import make_rng
from expressive_vc.domain.config import EncoderConfig
from expressive_vc.domain.features import EncoderWeights
from expressive_vc.domain.prosody import ProsodyEncoderWeights, SpeakerEmbedding
from expressive_vc.features.encoders import ConvBlock, blocks_of, bnf_forward, pwav_forward
from expressive_vc.features.weights import (
    encoder_from_tensors,
    encoder_to_tensors,
    he_uniform,
    init_bnf_encoder,
    init_prosody_encoder,
    init_pwav_encoder,
    prosody_from_tensors,
    prosody_to_tensors,
)
from expressive_vc.fusion.attention import fuse_concat_tensor, fuse_tensor
from expressive_vc.prosody.encoder import Activation, prosody_forward

from .decoder import ToyDecoder

logger = get_logger("training.model")


class GeneratorOutput(BaseModel):
    """Tensors produced by one generator forward pass"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    y_hat_f: Tensor
    y_hat_w: Optional[Tensor] = None
    h_b: Tensor
    h_w: Tensor
    h_p: Tensor
    h_f: Tensor
    weights: Optional[Tensor] = None


class GeneratorModel:
    """BNF and waveform encoders, prosody encoder, fusion and decoder"""

    def __init__(
        self,
        bnf_blocks: List[ConvBlock],
        pwav_blocks: List[ConvBlock],
        prosody: Dict[str, Tensor],
        fusion_projection: Tensor,
        fusion_bias: Tensor,
        decoder: ToyDecoder,
        fusion_mode: str = "attention",
        activation: Activation = "tanh",
    ):
        self.bnf_blocks = bnf_blocks
        self.pwav_blocks = pwav_blocks
        self.prosody = prosody
        self.fusion_projection = fusion_projection
        self.fusion_bias = fusion_bias
        self.decoder = decoder
        self.fusion_mode = fusion_mode
        self.activation = activation

    @classmethod
    def init(
        cls,
        config: EncoderConfig,
        seed: int,
        fusion_mode: str = "attention",
        activation: Activation = "tanh",
    ) -> "GeneratorModel":
        """Seeded He-uniform initialization; every part draws from its own stream"""
        bnf = init_bnf_encoder(
            make_rng(seed, "init.bnf"), config.bnf_dim, config.feature_dim,
            config.bnf_kernel_size, config.bnf_layers,
        )
        pwav = init_pwav_encoder(
            make_rng(seed, "init.pwav"), config.pwav_strides, config.pwav_channels, config.feature_dim
        )
        prosody = init_prosody_encoder(make_rng(seed, "init.prosody"), config.speaker_dim, config.feature_dim)
        fusion_rng = make_rng(seed, "init.fusion")
        dim = config.feature_dim
        decoder = ToyDecoder.init(
            make_rng(seed, "init.decoder"), dim, config.decoder_strides, config.decoder_channels
        )
        return cls(
            blocks_of(bnf, requires_grad=True),
            blocks_of(pwav, requires_grad=True),
            _prosody_tensors(prosody),
            Tensor(he_uniform(fusion_rng, (2 * dim, dim), 2 * dim), requires_grad=True),
            Tensor(np.zeros(dim), requires_grad=True),
            decoder,
            fusion_mode,
            activation,
        )

    @property
    def feature_dim(self) -> int:
        return self.fusion_bias.shape[0]

    @property
    def speaker_dim(self) -> int:
        return self.prosody["w_gamma"].shape[1]

    @property
    def bnf_dim(self) -> int:
        return self.bnf_blocks[0].kernel.shape[1]

    def encode(
        self, bnf: Tensor, samples: Tensor, f0_norm: Tensor, energy: Tensor, spk: SpeakerEmbedding
    ) -> Tuple[Tensor, Tensor, Tensor]:
        """(H_b, H_w, H_p), all T x F"""
        frames = bnf.shape[0]
        if f0_norm.shape[0] != frames or energy.shape[0] != frames:
            raise ShapeError(
                f"prosody tracks have {f0_norm.shape[0]} frames, BNFs have {frames}"
            )
        h_b = bnf_forward(bnf, self.bnf_blocks)
        h_w = pwav_forward(samples, self.pwav_blocks, frames)
        h_p = prosody_forward(
            f0_norm, energy, Tensor(spk.values),
            self.prosody["w_gamma"], self.prosody["w_beta"],
            self.prosody["projection"], self.prosody["bias"],
            self.activation,
        )
        return h_b, h_w, h_p

    def fuse(self, h_b: Tensor, h_w: Tensor, h_p: Tensor) -> Tuple[Tensor, Optional[Tensor]]:
        if self.fusion_mode == "concat":
            return fuse_concat_tensor(h_b, h_w, self.fusion_projection, self.fusion_bias), None
        return fuse_tensor(h_b, h_w, h_p)

    def __call__(
        self,
        bnf: Tensor,
        samples: Tensor,
        f0_norm: Tensor,
        energy: Tensor,
        spk: SpeakerEmbedding,
        aux_path: bool = True,
    ) -> GeneratorOutput:
        h_b, h_w, h_p = self.encode(bnf, samples, f0_norm, energy, spk)
        h_f, weights = self.fuse(h_b, h_w, h_p)
        y_hat_w = self.decoder(h_w, h_p) if aux_path else None
        return GeneratorOutput(
            y_hat_f=self.decoder(h_f, h_p), y_hat_w=y_hat_w,
            h_b=h_b, h_w=h_w, h_p=h_p, h_f=h_f, weights=weights,
        )

    def parameters(self) -> List[Tensor]:
        params: List[Tensor] = []
        for block in self.bnf_blocks + self.pwav_blocks:
            params.extend(block.tensors())
        params.extend(self.prosody[key] for key in PROSODY_KEYS)
        params.extend([self.fusion_projection, self.fusion_bias])
        params.extend(self.decoder.parameters())
        return params

    def bnf_weights(self) -> EncoderWeights:
        return EncoderWeights(layers=[block.to_weights() for block in self.bnf_blocks])

    def pwav_weights(self) -> EncoderWeights:
        return EncoderWeights(layers=[block.to_weights() for block in self.pwav_blocks])

    def prosody_weights(self) -> ProsodyEncoderWeights:
        return prosody_from_tensors("prosody", {
            f"prosody.{key}": tensor.numpy() for key, tensor in self.prosody.items()
        })

    def state(self) -> Dict[str, np.ndarray]:
        state: Dict[str, np.ndarray] = {}
        state.update(encoder_to_tensors("bnf", self.bnf_weights()))
        state.update(encoder_to_tensors("pwav", self.pwav_weights()))
        state.update(prosody_to_tensors("prosody", self.prosody_weights()))
        state["fusion.projection"] = self.fusion_projection.numpy()
        state["fusion.bias"] = self.fusion_bias.numpy()
        state.update(self.decoder.state("decoder"))
        return state

    @classmethod
    def from_state(
        cls,
        state: Mapping[str, np.ndarray],
        fusion_mode: str = "attention",
        activation: Activation = "tanh",
    ) -> "GeneratorModel":
        """
        Rebuild a model from named arrays

        Raises:
            AudioFormatError: If a part is missing or inconsistent
        """
        state = {key: np.asarray(value, dtype=np.float64) for key, value in state.items()}
        bnf = encoder_from_tensors("bnf", state)
        pwav = encoder_from_tensors("pwav", state)
        prosody = prosody_from_tensors("prosody", state)
        try:
            projection = state["fusion.projection"]
            bias = state["fusion.bias"]
        except KeyError as e:
            raise AudioFormatError(f"fusion weights are incomplete: missing {e}") from e
        decoder = ToyDecoder.from_state(state, "decoder")
        model = cls(
            blocks_of(bnf, requires_grad=True),
            blocks_of(pwav, requires_grad=True),
            _prosody_tensors(prosody),
            Tensor(projection, requires_grad=True),
            Tensor(bias, requires_grad=True),
            decoder,
            fusion_mode,
            activation,
        )
        if pwav.out_channels != bnf.out_channels or prosody.feature_dim != bnf.out_channels:
            raise AudioFormatError(
                f"feature widths disagree: bnf {bnf.out_channels}, pwav {pwav.out_channels}, "
                f"prosody {prosody.feature_dim}"
            )
        return model

    def save(self, path: Union[str, Path], extra: Optional[Mapping[str, np.ndarray]] = None) -> None:
        """Write the generator (and any extra entries, e.g. discriminators) as TSR1"""
        tensors = self.state()
        if extra:
            tensors.update(extra)
        save_tensors(path, tensors)
        logger.info(f"Saved {len(tensors)} tensors to {path}")

    @classmethod
    def load(
        cls, path: Union[str, Path], fusion_mode: str = "attention", activation: Activation = "tanh"
    ) -> "GeneratorModel":
        """
        Raises:
            FileNotFoundError: If the file does not exist
            AudioFormatError: If the file is not a complete model
        """
        return cls.from_state(load_tensors(path), fusion_mode, activation)


PROSODY_KEYS = ("w_gamma", "w_beta", "projection", "bias")


def _prosody_tensors(weights: ProsodyEncoderWeights) -> Dict[str, Tensor]:
    arrays = {
        "w_gamma": weights.cln.w_gamma,
        "w_beta": weights.cln.w_beta,
        "projection": weights.projection,
        "bias": weights.bias,
    }
    return {key: Tensor(value, requires_grad=True) for key, value in arrays.items()}
