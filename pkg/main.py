"""
Main entry point for the tvpinn toolkit
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from cli.commands import FitCommand, SimulateCommand, VerifyCommand
from core.dependencies import get_observer, get_settings
from core.exceptions import (
    CheckpointError,
    ConfigurationError,
    DataFormatError,
    EnsembleFailedError,
    InvalidInputError,
    RangeError,
    TrainingAbortedError,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_DATA_FORMAT = 2
EXIT_CONFIGURATION = 3
EXIT_TRAINING = 4

logger = logging.getLogger("tvpinn")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tvpinn",
        description="Infer unobserved tumor subpopulations and a time-varying interaction "
                    "coefficient from sparse volume measurements",
    )
    parser.add_argument("--log-level", default=get_settings().log_level, help="Logging level")
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="Train the ensemble and write a result bundle")
    fit.add_argument("config", help="Run configuration JSON")
    fit.add_argument("--seed-override", type=int, default=None, help="Train this single seed only")
    fit.add_argument("--epochs-override", type=int, default=None, help="Replace training.epochs")
    fit.add_argument("--out", default=None, help="Bundle directory (default: config output_dir)")
    fit.add_argument("--resume", action="store_true", help="Continue each seed from its checkpoint")

    simulate = sub.add_parser("simulate", help="Generate synthetic ground truth and observations")
    simulate.add_argument("config", help="Simulation configuration JSON")
    simulate.add_argument("--out", default=None, help="Output directory (default: config output_dir)")

    verify = sub.add_parser("verify", help="Compare a fit bundle with an oracle trajectory")
    verify.add_argument("bundle_dir")
    verify.add_argument("oracle_csv")
    verify.add_argument("--smt-window", type=float, nargs=2, default=[8.0, 21.0],
                        metavar=("START", "END"), help="Days over which s_MT recovery is scored")
    return parser


def run_command(args: argparse.Namespace) -> None:
    settings = get_settings()
    observer = get_observer()
    if args.command == "fit":
        FitCommand(observer=observer, max_workers=settings.max_workers).run(
            config_path=args.config,
            seed_override=args.seed_override,
            epochs_override=args.epochs_override,
            out_dir=args.out,
            resume=args.resume,
        )
    elif args.command == "simulate":
        SimulateCommand(observer=observer).run(config_path=args.config, out_dir=args.out)
    else:
        VerifyCommand(observer=observer).run(
            bundle_dir=args.bundle_dir, oracle_csv=args.oracle_csv,
            smt_window=tuple(args.smt_window),
        )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        run_command(args)
    except DataFormatError as e:
        logger.error(f"Data format error: {e}")
        return EXIT_DATA_FORMAT
    except (InvalidInputError, RangeError) as e:
        # too few points, duplicate days, observations outside the window
        logger.error(f"Invalid input data: {e}")
        return EXIT_DATA_FORMAT
    except (ConfigurationError, ValidationError, CheckpointError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIGURATION
    except (EnsembleFailedError, TrainingAbortedError) as e:
        logger.error(f"Training failed: {e}")
        return EXIT_TRAINING
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
