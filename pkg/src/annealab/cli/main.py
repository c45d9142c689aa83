# -*- coding: utf-8 -*-
"""
Command line entry point::

    annealab <experiment-kind> --config <path> [--out <dir>] [--seed <u64>] [--quiet]

Exit codes: ``0`` on success, ``2`` when the configuration cannot be parsed or
validated, ``3`` on any other failure.
"""
import argparse
import logging
import sys
from typing import List, Optional

from .. import __version__
from ..config import env
from ..config.experiment import EXPERIMENT_KINDS, load_config
from ..exceptions import ParseError, ValidationError
from .experiments import run_experiment

logger = logging.getLogger(__name__)

EXIT_OK: int = 0
EXIT_INVALID: int = 2
EXIT_FAILED: int = 3

LOG_FORMAT: str = "%(asctime)s level=%(levelname)s logger=%(name)s %(message)s"


def build_parser() -> argparse.ArgumentParser:
    _parser = argparse.ArgumentParser(
        prog="annealab",
        description=(
            "Annealed Langevin dynamics of contrastive embeddings: run one "
            "experiment described by a JSON configuration."
        ),
    )
    _parser.add_argument("experiment", choices=EXPERIMENT_KINDS)
    _parser.add_argument("--config", required=True, help="Experiment JSON file.")
    _parser.add_argument("--out", default=None, help="Output directory override.")
    _parser.add_argument(
        "--seed", type=int, default=None, help="Master seed override, in [0, 2**64)."
    )
    _parser.add_argument(
        "--quiet",
        action="store_true",
        help="Only log warnings and errors; hide progress bars.",
    )
    _parser.add_argument("--version", action="version", version=__version__)

    return _parser


def configure_logging(quiet: bool = False):
    """
    Configure the root handler once, at :data:`~annealab.config.env.LOG_LEVEL`, or
    ``WARNING`` under ``--quiet``.
    """
    logging.basicConfig(
        level=logging.WARNING if quiet else env.LOG_LEVEL,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    _args = build_parser().parse_args(argv)
    configure_logging(_args.quiet)

    try:
        _config = load_config(_args.config).with_overrides(
            seed=_args.seed, out=_args.out
        )

        if _config.kind != _args.experiment:
            raise ValidationError(
                [
                    f"experiment: the command asks for {_args.experiment!r} but "
                    f"{_args.config} describes {_config.kind!r}."
                ]
            )
    except (ParseError, ValidationError) as e:
        logger.error("config_rejected path=%s", _args.config)
        print(e, file=sys.stderr)
        return EXIT_INVALID

    try:
        _manifest = run_experiment(_config, progress=not _args.quiet)
    except (ParseError, ValidationError) as e:
        print(e, file=sys.stderr)
        return EXIT_INVALID
    except Exception as e:
        logger.exception(
            "run_failed kind=%s config=%s error=%s", _config.kind, _args.config, e
        )
        return EXIT_FAILED

    logger.info(
        "run_complete kind=%s out=%s files=%d",
        _manifest.experiment,
        _config.out,
        len(_manifest.files),
    )

    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
