from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from expressive_vc.audio import read_wav, resample, write_wav
from expressive_vc.autodiff import Tensor, load_tensors, save_tensors
from expressive_vc.common.errors import AudioFormatError, PreconditionError
from expressive_vc.common.logging import get_logger
from expressive_vc.common.seeding import make_rng
from expressive_vc.domain.audio import AudioBuffer
from expressive_vc.domain.config import PipelineConfig
from expressive_vc.domain.features import BnfMatrix
from expressive_vc.domain.fusion import FusionOutput
from expressive_vc.domain.losses import LossBreakdown
from expressive_vc.domain.metrics import CorrelationReport
from expressive_vc.domain.perturbation import PerturbConfig
from expressive_vc.domain.prosody import ProsodyTrack, SpeakerEmbedding
from expressive_vc.features.bnf import align_bnf, read_bnf, write_bnf
from expressive_vc.features.weights import init_speaker_embedding
from expressive_vc.fusion.attention import write_weight_csv
from expressive_vc.metrics import correlate_prosody
from expressive_vc.perturbation import perturb, sample_perturb_config
from expressive_vc.prosody import extract_prosody, f0_channel, write_prosody_csv
from expressive_vc.training import GeneratorModel, SmokeTrainer, write_loss_history

SPEAKER_TENSOR = "speaker_embedding"

PathLike = Union[str, Path]


class VoiceConversionPipeline:
    """
    File-level operations behind every CLI command.

    This class owns:
    - Reading input audio and bringing it to the working sample rate
    - Running perturbation, analysis, fusion and training on it
    - Writing the resulting artifacts
    """

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.logger = get_logger("pipeline")
        self.frame = config.audio.frame

    # Inputs

    def load_audio(self, path: PathLike) -> AudioBuffer:
        """Read a WAV file and resample it to the configured rate"""
        audio = read_wav(path)
        target = self.config.audio.sample_rate
        if audio.sample_rate != target:
            self.logger.info(f"Resampling {path} from {audio.sample_rate} Hz to {target} Hz")
            audio = resample(audio, target)
        return audio

    def load_speaker(self, path: PathLike) -> SpeakerEmbedding:
        """
        Raises:
            AudioFormatError: If the file holds no speaker embedding
        """
        tensors = load_tensors(path)
        if SPEAKER_TENSOR not in tensors:
            raise AudioFormatError(f"{path}: no '{SPEAKER_TENSOR}' tensor")
        return SpeakerEmbedding(values=np.asarray(tensors[SPEAKER_TENSOR], dtype=np.float64).ravel())

    def load_model(self, path: PathLike) -> GeneratorModel:
        return GeneratorModel.load(path, self.config.fusion.mode, self.config.prosody.activation)

    def analyse(self, audio: AudioBuffer) -> ProsodyTrack:
        prosody = self.config.prosody
        return extract_prosody(
            audio, self.frame, prosody.f_min, prosody.f_max,
            threshold=prosody.yin_threshold, silence_rms=prosody.silence_rms,
        )

    # Commands

    def perturb_file(
        self, input_path: PathLike, output_path: PathLike, seed: int, neutral: bool = False
    ) -> PerturbConfig:
        """Write pr(fs(peq(x))) of one file; returns the configuration used"""
        audio = self.load_audio(input_path)
        if neutral:
            config = PerturbConfig.neutral(seed)
        else:
            config = sample_perturb_config(seed, audio.sample_rate, self.config.perturbation)
        prosody = self.config.prosody
        result = perturb(audio, config, self.frame, prosody.f_min, prosody.f_max)
        write_wav(output_path, result)
        self.logger.info(f"Perturbed {input_path} -> {output_path} (seed {seed})")
        return config

    def features_file(self, input_path: PathLike, output_path: PathLike) -> ProsodyTrack:
        track = self.analyse(self.load_audio(input_path))
        write_prosody_csv(output_path, track)
        self.logger.info(f"Wrote {len(track)} prosody frames to {output_path}")
        return track

    def fuse_files(
        self,
        bnf_path: PathLike,
        audio_path: PathLike,
        speaker_path: PathLike,
        weights_path: PathLike,
        seed: int,
        emit_weights: Optional[PathLike] = None,
        emit_hf: Optional[PathLike] = None,
        emit_wav: Optional[PathLike] = None,
        neutral: bool = False,
    ) -> FusionOutput:
        """
        Content extraction, prosody encoding and fusion for one utterance

        The waveform branch sees the perturbed audio, drawn from ``seed``.
        """
        audio = self.load_audio(audio_path)
        bnf = read_bnf(bnf_path)
        speaker = self.load_speaker(speaker_path)
        model = self.load_model(weights_path)
        if speaker.dim != model.speaker_dim:
            raise PreconditionError(
                f"speaker embedding has {speaker.dim} dims, weights expect {model.speaker_dim}"
            )

        frames = self.frame.num_frames(len(audio), audio.sample_rate)
        track = self.analyse(audio)
        if neutral:
            config = PerturbConfig.neutral(seed)
        else:
            config = sample_perturb_config(seed, audio.sample_rate, self.config.perturbation)
        prosody = self.config.prosody
        perturbed = perturb(audio, config, self.frame, prosody.f_min, prosody.f_max)

        h_b, h_w, h_p = model.encode(
            Tensor(align_bnf(bnf, frames)),
            Tensor(perturbed.samples),
            Tensor(f0_channel(track.f0)),
            Tensor(track.energy),
            speaker,
        )
        h_f, weights = model.fuse(h_b, h_w, h_p)
        if weights is None:
            # Concat fusion has no attention weights
            weights = Tensor(np.full((frames, 2), np.nan))
        output = FusionOutput(h_f=h_f.numpy(), weights=weights.numpy())

        if emit_weights is not None:
            write_weight_csv(emit_weights, output)
            self.logger.info(f"Wrote fusion weights for {frames} frames to {emit_weights}")
        if emit_hf is not None:
            write_bnf(emit_hf, BnfMatrix(values=output.h_f))
            self.logger.info(f"Wrote fused features to {emit_hf}")
        if emit_wav is not None:
            samples = model.decoder(h_f, h_p).numpy()[:len(audio)]
            write_wav(emit_wav, audio.with_samples(samples))
            self.logger.info(f"Wrote decoded waveform to {emit_wav}")
        return output

    def correlate_files(self, path_a: PathLike, path_b: PathLike) -> CorrelationReport:
        return correlate_prosody(
            self.analyse(self.load_audio(path_a)), self.analyse(self.load_audio(path_b))
        )

    def smoketrain_files(
        self,
        clip_paths: Sequence[PathLike],
        output_path: PathLike,
        seed: int,
        steps: Optional[int] = None,
        bnf_paths: Optional[Sequence[PathLike]] = None,
        weights_path: Optional[PathLike] = None,
        save_weights: Optional[PathLike] = None,
    ) -> List[LossBreakdown]:
        clips = [self.load_audio(path) for path in clip_paths]
        bnfs = [read_bnf(path) for path in bnf_paths] if bnf_paths else None
        model = self.load_model(weights_path) if weights_path is not None else None
        trainer = SmokeTrainer(self.config, seed, model=model)
        history = trainer.run(clips, steps, bnfs)
        write_loss_history(output_path, history)
        self.logger.info(f"Wrote {len(history)} loss rows to {output_path}")
        if save_weights is not None:
            trainer.model.save(save_weights)
        return history

    def init_weights(self, output_path: PathLike, seed: int) -> GeneratorModel:
        model = GeneratorModel.init(
            self.config.encoders, seed, self.config.fusion.mode, self.config.prosody.activation
        )
        model.save(output_path)
        return model

    def init_speaker(self, output_path: PathLike, seed: int, dim: Optional[int] = None) -> SpeakerEmbedding:
        speaker = init_speaker_embedding(make_rng(seed, "init.speaker"), dim or self.config.encoders.speaker_dim)
        save_tensors(output_path, {SPEAKER_TENSOR: speaker.values})
        self.logger.info(f"Wrote {speaker.dim}-dim speaker embedding to {output_path}")
        return speaker
