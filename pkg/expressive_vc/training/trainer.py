"""Plain-SGD smoke training of the generator against the discriminator bank.

Each step reconstructs one clip from its BNFs, its perturbed waveform and its
prosody. Odd steps use a speed-augmented copy of the clip when augmentation
is on. The discriminators step first on detached outputs, then the generator
steps against the updated discriminators.
"""
import csv
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from expressive_vc.audio.resample import resample
from expressive_vc.autodiff import Tensor
from expressive_vc.common.errors import DivergenceError, PreconditionError
from expressive_vc.common.logging import get_logger
from expressive_vc.common.seeding import derive_seed, make_rng
from expressive_vc.discriminators.bank import DiscriminatorBank
from expressive_vc.domain.audio import AudioBuffer
from expressive_vc.domain.config import PipelineConfig
from expressive_vc.domain.features import BnfMatrix
from expressive_vc.domain.losses import LossBreakdown
from expressive_vc.domain.prosody import SpeakerEmbedding
from expressive_vc.features.bnf import align_bnf
from expressive_vc.features.spectral import spectral_bnf
from expressive_vc.features.weights import init_speaker_embedding
from expressive_vc.perturbation.chain import perturb, sample_perturb_config
from expressive_vc.perturbation.speed import sample_speed_factor, speed_augment
from expressive_vc.prosody import extract_prosody, znorm_f0

from .losses import compute_losses
from .model import GeneratorModel

logger = get_logger("training.trainer")

LOSS_HISTORY_HEADER = ["step", "adv_g", "adv_d", "fm", "stft", "total_g", "total_d"]


class TrainingExample(BaseModel):
    """Aligned inputs and target of one step"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    bnf: np.ndarray
    perturbed: np.ndarray
    f0_norm: np.ndarray
    energy: np.ndarray
    target: np.ndarray
    speed_factor: float = 1.0


def sgd_step(params: Sequence[Tensor], learning_rate: float) -> None:
    for param in params:
        if param.grad is not None:
            param.data -= learning_rate * param.grad


def zero_grads(params: Sequence[Tensor]) -> None:
    for param in params:
        param.zero_grad()


class SmokeTrainer:
    """Runs a fixed number of steps over a small clip set"""

    def __init__(
        self,
        config: PipelineConfig,
        seed: int,
        model: Optional[GeneratorModel] = None,
        speaker: Optional[SpeakerEmbedding] = None,
        discriminators: Optional[DiscriminatorBank] = None,
    ):
        self.config = config
        self.seed = seed
        self.model = model or GeneratorModel.init(
            config.encoders, seed, config.fusion.mode, config.prosody.activation
        )
        self.speaker = speaker or init_speaker_embedding(
            make_rng(seed, "init.speaker"), config.encoders.speaker_dim
        )
        if self.speaker.dim != self.model.speaker_dim:
            raise PreconditionError(
                f"speaker embedding has {self.speaker.dim} dims, model expects {self.model.speaker_dim}"
            )
        self.discriminators = discriminators or DiscriminatorBank.from_set(config.discriminators, seed)

    def prepare(self, clip: AudioBuffer, step: int, bnf: Optional[BnfMatrix] = None) -> TrainingExample:
        """Perturb, analyse and align one clip for a step"""
        audio_config = self.config.audio
        training = self.config.training
        frame = audio_config.frame
        if clip.sample_rate != audio_config.sample_rate:
            clip = resample(clip, audio_config.sample_rate)

        factor = 1.0
        if training.speed_augment and step % 2 == 1:
            factor = sample_speed_factor(
                make_rng(self.seed, f"speed.{step}"), self.config.perturbation.speed_factor
            )
            clip = speed_augment(clip, factor)

        frames = frame.num_frames(len(clip), clip.sample_rate)
        hop = audio_config.hop_samples
        prosody = self.config.prosody
        track = extract_prosody(
            clip, frame, prosody.f_min, prosody.f_max,
            threshold=prosody.yin_threshold, silence_rms=prosody.silence_rms,
        )
        perturb_config = sample_perturb_config(
            derive_seed(self.seed, f"perturb.{step}"), clip.sample_rate, self.config.perturbation
        )
        perturbed = perturb(clip, perturb_config, frame, prosody.f_min, prosody.f_max)

        if bnf is None:
            content = spectral_bnf(clip, self.config.encoders.bnf_dim, frame).values
        else:
            content = bnf.values
        target = np.zeros(frames * hop)
        target[:len(clip)] = clip.samples[:frames * hop]
        return TrainingExample(
            bnf=align_bnf(content, frames),
            perturbed=perturbed.samples,
            f0_norm=znorm_f0(track.f0),
            energy=track.energy,
            target=target,
            speed_factor=factor,
        )

    def step(self, example: TrainingExample, step: int) -> LossBreakdown:
        """
        One discriminator update followed by one generator update

        Raises:
            DivergenceError: If any loss is not finite
        """
        training = self.config.training
        output = self.model(
            Tensor(example.bnf),
            Tensor(example.perturbed),
            Tensor(example.f0_norm),
            Tensor(example.energy),
            self.speaker,
            aux_path=training.aux_path,
        )
        y = Tensor(example.target)
        d_params = self.discriminators.parameters()
        g_params = self.model.parameters()

        terms = compute_losses(
            y, output.y_hat_f, output.y_hat_w, self.discriminators,
            self.config.discriminators.stft_resolutions, training.loss_weights, training.aux_weight,
        )
        if not terms.breakdown.is_finite():
            raise DivergenceError(step, str(terms.breakdown.model_dump()))

        zero_grads(d_params)
        if d_params:
            terms.total_d.backward()
            sgd_step(d_params, training.learning_rate)

        # Generator terms against the updated discriminators
        generator_terms = compute_losses(
            y, output.y_hat_f, output.y_hat_w, self.discriminators,
            self.config.discriminators.stft_resolutions, training.loss_weights, training.aux_weight,
        )
        if not generator_terms.breakdown.is_finite():
            raise DivergenceError(step, str(generator_terms.breakdown.model_dump()))
        zero_grads(g_params + d_params)
        generator_terms.total_g.backward()
        sgd_step(g_params, training.learning_rate)

        breakdown = generator_terms.breakdown
        return LossBreakdown(
            adv_g=breakdown.adv_g,
            adv_d=terms.breakdown.adv_d,
            fm=breakdown.fm,
            stft=breakdown.stft,
            total_g=breakdown.total_g,
            total_d=terms.breakdown.total_d,
        )

    def run(
        self,
        clips: Sequence[AudioBuffer],
        steps: Optional[int] = None,
        bnfs: Optional[Sequence[Optional[BnfMatrix]]] = None,
    ) -> List[LossBreakdown]:
        """
        Train for ``steps`` steps cycling through the clips

        Raises:
            PreconditionError: If there are no clips or one is too short
            DivergenceError: If a loss becomes non-finite
        """
        if not clips:
            raise PreconditionError("smoke training needs at least one clip")
        minimum = self.config.training.min_clip_seconds
        for index, clip in enumerate(clips):
            if clip.duration < minimum:
                raise PreconditionError(
                    f"clip {index} lasts {clip.duration:.3f} s, at least {minimum} s is required"
                )
        if bnfs is not None and len(bnfs) != len(clips):
            raise PreconditionError(f"{len(bnfs)} BNF matrices for {len(clips)} clips")
        steps = steps or self.config.training.steps

        history: List[LossBreakdown] = []
        for step in range(steps):
            index = step % len(clips)
            example = self.prepare(clips[index], step, bnfs[index] if bnfs else None)
            breakdown = self.step(example, step)
            history.append(breakdown)
            logger.debug(
                f"Step {step}: total_g={breakdown.total_g:.6f} total_d={breakdown.total_d:.6f} "
                f"speed={example.speed_factor:.3f}"
            )
            if step == 0 or (step + 1) % 10 == 0 or step + 1 == steps:
                logger.info(
                    f"Step {step + 1}/{steps}: stft={breakdown.stft:.4f} "
                    f"total_g={breakdown.total_g:.4f} total_d={breakdown.total_d:.4f}"
                )
        return history


def smoke_train(
    clips: Sequence[AudioBuffer],
    config: Optional[PipelineConfig] = None,
    seed: int = 0,
    steps: Optional[int] = None,
    bnfs: Optional[Sequence[Optional[BnfMatrix]]] = None,
    model: Optional[GeneratorModel] = None,
    speaker: Optional[SpeakerEmbedding] = None,
) -> List[LossBreakdown]:
    """Build a trainer from the configuration and run it"""
    trainer = SmokeTrainer(config or PipelineConfig(), seed, model, speaker)
    return trainer.run(clips, steps, bnfs)


def write_loss_history(path: Union[str, Path], history: Sequence[LossBreakdown]) -> None:
    """CSV with one row per step"""
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(LOSS_HISTORY_HEADER)
            for step, losses in enumerate(history):
                writer.writerow([step] + [
                    f"{getattr(losses, key):.9g}" for key in LOSS_HISTORY_HEADER[1:]
                ])
    except OSError as e:
        raise OSError(f"Cannot write {path}: {e}") from e
