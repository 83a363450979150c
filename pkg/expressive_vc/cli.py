import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from expressive_vc.common.errors import (
    AudioFormatError,
    ExpressiveVCError,
    UnsupportedFormatError,
)
from expressive_vc.common.logging import get_logger
from expressive_vc.common.seeding import derive_seed
from expressive_vc.config import default_config, load_config
from expressive_vc.domain.config import PipelineConfig
from expressive_vc.services.pipeline import VoiceConversionPipeline
from expressive_vc.verification import format_table, run_suites, suite_names

logger = get_logger("cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

GRADCHECK_TOLERANCE = 1e-4


class UsageError(Exception):
    """Bad flags or arguments detected after parsing"""


def exit_code_for(error: BaseException) -> int:
    """2 for usage and file problems, 1 for computation failures"""
    if isinstance(error, (UsageError, FileNotFoundError, AudioFormatError, UnsupportedFormatError)):
        return EXIT_USAGE
    if isinstance(error, ExpressiveVCError):
        return EXIT_FAILURE
    if isinstance(error, OSError):
        return EXIT_USAGE
    return EXIT_FAILURE


def _require_seed(args: argparse.Namespace, config: PipelineConfig) -> int:
    seed = args.seed if args.seed is not None else config.runtime.seed
    if seed is None:
        raise UsageError(f"'{args.command}' is randomized: pass --seed or set runtime.seed")
    return seed


def _neutral_seed(args: argparse.Namespace, config: PipelineConfig) -> int:
    """The identity perturbation only records the seed"""
    if args.seed is not None:
        return args.seed
    return config.runtime.seed if config.runtime.seed is not None else 0


def _batch_targets(inputs: Sequence[str], output: str, suffix: str) -> List[Tuple[Path, Path]]:
    """One input writes to ``output``; several write <output>/<stem><suffix>"""
    if len(inputs) == 1:
        return [(Path(inputs[0]), Path(output))]
    directory = Path(output)
    directory.mkdir(parents=True, exist_ok=True)
    return [(Path(name), directory / f"{Path(name).stem}{suffix}") for name in inputs]


# Workers run in child processes when --jobs > 1, so they take plain arguments

def _perturb_one(config: PipelineConfig, source: Path, target: Path, seed: int, neutral: bool) -> str:
    return VoiceConversionPipeline(config).perturb_file(source, target, seed, neutral).to_text()


def _features_one(config: PipelineConfig, source: Path, target: Path) -> int:
    return len(VoiceConversionPipeline(config).features_file(source, target))


def _run_batch(jobs: int, worker: Callable, calls: List[tuple]) -> list:
    if jobs <= 1 or len(calls) <= 1:
        return [worker(*call) for call in calls]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(worker, *call) for call in calls]
        return [future.result() for future in futures]


def cmd_perturb(args: argparse.Namespace, config: PipelineConfig) -> int:
    seed = _neutral_seed(args, config) if args.neutral else _require_seed(args, config)
    targets = _batch_targets(args.inputs, args.output, ".wav")
    calls = []
    for source, target in targets:
        file_seed = seed if len(targets) == 1 else derive_seed(seed, f"file.{source.name}")
        calls.append((config, source, target, file_seed, args.neutral))
    blocks = _run_batch(args.jobs, _perturb_one, calls)
    for (source, _), block in zip(targets, blocks):
        if len(targets) > 1:
            sys.stdout.write(f"# {source}\n")
        sys.stdout.write(block)
    return EXIT_OK


def cmd_features(args: argparse.Namespace, config: PipelineConfig) -> int:
    targets = _batch_targets(args.inputs, args.output, ".csv")
    _run_batch(args.jobs, _features_one, [(config, s, t) for s, t in targets])
    return EXIT_OK


def cmd_fuse(args: argparse.Namespace, config: PipelineConfig) -> int:
    seed = _neutral_seed(args, config) if args.neutral else _require_seed(args, config)
    output = VoiceConversionPipeline(config).fuse_files(
        args.bnf, args.wav, args.speaker, args.weights, seed,
        emit_weights=args.emit_weights, emit_hf=args.emit_hf, emit_wav=args.emit_wav,
        neutral=args.neutral,
    )
    sys.stdout.write(f"frames = {output.num_frames}\n")
    return EXIT_OK


def cmd_correlate(args: argparse.Namespace, config: PipelineConfig) -> int:
    report = VoiceConversionPipeline(config).correlate_files(args.a, args.b)
    sys.stdout.write(report.to_csv_row() if args.csv else report.to_text())
    if report.lf0_r is None:
        logger.error("Log-f0 correlation is undefined: fewer than two jointly voiced frames")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_gradcheck(args: argparse.Namespace, config: PipelineConfig) -> int:
    available = suite_names()
    names = available if args.suite == "all" else [args.suite]
    unknown = [name for name in names if name not in available]
    if unknown:
        raise UsageError(f"unknown suite '{unknown[0]}'; choose from {available + ['all']}")
    results = run_suites(names, args.eps, args.seed or 0)
    sys.stdout.write(format_table(results, args.eps, GRADCHECK_TOLERANCE))
    failed = [case for case, result in results if not result.passed(GRADCHECK_TOLERANCE)]
    if failed:
        logger.error(f"Gradient check failed for: {', '.join(failed)}")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_smoketrain(args: argparse.Namespace, config: PipelineConfig) -> int:
    seed = _require_seed(args, config)
    if args.bnf and len(args.bnf) != len(args.clips):
        raise UsageError(f"{len(args.bnf)} --bnf files for {len(args.clips)} clips")
    weights = args.weights or config.weights.model
    VoiceConversionPipeline(config).smoketrain_files(
        args.clips, args.output, seed, args.steps, args.bnf, weights, args.save_weights
    )
    return EXIT_OK


def cmd_init_weights(args: argparse.Namespace, config: PipelineConfig) -> int:
    VoiceConversionPipeline(config).init_weights(args.output, _require_seed(args, config))
    return EXIT_OK


def cmd_init_speaker(args: argparse.Namespace, config: PipelineConfig) -> int:
    VoiceConversionPipeline(config).init_speaker(args.output, _require_seed(args, config), args.dim)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, PipelineConfig], int]] = {
    "perturb": cmd_perturb,
    "features": cmd_features,
    "fuse": cmd_fuse,
    "correlate": cmd_correlate,
    "gradcheck": cmd_gradcheck,
    "smoketrain": cmd_smoketrain,
    "init-weights": cmd_init_weights,
    "init-speaker": cmd_init_speaker,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evc", description="Expressive voice conversion building blocks"
    )
    parser.add_argument("-c", "--config", type=Path, help="Pipeline configuration file")
    parser.add_argument("--log-level", help="Override the configured log level")
    parser.add_argument(
        "--jobs", type=int, default=1, help="Worker processes across input files (default: 1)"
    )
    # Also accepted after the subcommand; SUPPRESS keeps the global value when absent
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", type=Path, default=argparse.SUPPRESS)
    common.add_argument("--log-level", default=argparse.SUPPRESS)
    commands = parser.add_subparsers(dest="command", required=True)

    perturb = commands.add_parser("perturb", help="Apply pr(fs(peq(x))) to audio files", parents=[common])
    perturb.add_argument("inputs", nargs="+", help="Input WAV files")
    perturb.add_argument("output", help="Output WAV, or a directory for several inputs")
    perturb.add_argument("--seed", type=int, help="Seed of the sampled perturbation")
    perturb.add_argument("--neutral", action="store_true", help="Use the identity perturbation")

    features = commands.add_parser("features", help="Extract f0 and energy tracks as CSV", parents=[common])
    features.add_argument("inputs", nargs="+", help="Input WAV files")
    features.add_argument("output", help="Output CSV, or a directory for several inputs")

    fuse = commands.add_parser("fuse", help="Run content extraction, prosody encoding and fusion", parents=[common])
    fuse.add_argument("bnf", help="BNF1 (or .csv) bottleneck features")
    fuse.add_argument("wav", help="Source WAV")
    fuse.add_argument("speaker", help="TSR1 file with the speaker embedding")
    fuse.add_argument("weights", help="TSR1 model weights")
    fuse.add_argument("--seed", type=int, help="Seed of the waveform perturbation")
    fuse.add_argument("--neutral", action="store_true", help="Feed the unperturbed waveform")
    fuse.add_argument("--emit-weights", type=Path, help="Write the per-frame w_b CSV")
    fuse.add_argument("--emit-hf", type=Path, help="Write H_f in BNF1 layout")
    fuse.add_argument("--emit-wav", type=Path, help="Also decode H_f to a waveform")

    correlate = commands.add_parser("correlate", help="Pearson correlation of log-f0 and energy", parents=[common])
    correlate.add_argument("a", help="First WAV")
    correlate.add_argument("b", help="Second WAV")
    correlate.add_argument("--csv", action="store_true", help="Print one CSV row instead")

    gradcheck = commands.add_parser("gradcheck", help="Central-difference gradient checks", parents=[common])
    gradcheck.add_argument("--suite", default="all", help="fusion, cln, encoders, losses or all")
    gradcheck.add_argument("--eps", type=float, default=1e-5, help="Finite-difference step")
    gradcheck.add_argument("--seed", type=int, help="Seed of the random test points")

    smoketrain = commands.add_parser("smoketrain", help="Short deterministic training run", parents=[common])
    smoketrain.add_argument("clips", nargs="+", help="Training WAV clips")
    smoketrain.add_argument("output", help="Loss history CSV")
    smoketrain.add_argument("--steps", type=int, help="Number of steps (default from config)")
    smoketrain.add_argument("--seed", type=int, help="Training seed")
    smoketrain.add_argument("--bnf", nargs="+", help="BNF files, one per clip")
    smoketrain.add_argument("--weights", type=Path, help="Start from these TSR1 weights")
    smoketrain.add_argument("--save-weights", type=Path, help="Write trained weights as TSR1")

    init_weights = commands.add_parser("init-weights", help="Write seeded model weights", parents=[common])
    init_weights.add_argument("output", help="TSR1 output")
    init_weights.add_argument("--seed", type=int, help="Initialization seed")

    init_speaker = commands.add_parser("init-speaker", help="Write a seeded speaker embedding", parents=[common])
    init_speaker.add_argument("output", help="TSR1 output")
    init_speaker.add_argument("--seed", type=int, help="Initialization seed")
    init_speaker.add_argument("--dim", type=int, help="Embedding size (default from config)")
    return parser


def _load(args: argparse.Namespace) -> PipelineConfig:
    if args.config is None:
        return default_config(args.log_level)
    config = load_config(args.config, args.log_level)
    missing = config.weights.missing()
    if missing:
        raise FileNotFoundError(f"Configured weight file not found: {missing[0]}")
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the evc command"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")

    try:
        config = _load(args)
    except (ValidationError, ValueError, OSError) as e:
        sys.stderr.write(f"error: failed to load configuration: {e}\n")
        return EXIT_USAGE

    try:
        return COMMANDS[args.command](args, config)
    except KeyboardInterrupt:
        return EXIT_FAILURE
    except Exception as e:
        code = exit_code_for(e)
        logger.debug(f"{args.command} failed with {type(e).__name__}")
        sys.stderr.write(f"error: {e}\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
