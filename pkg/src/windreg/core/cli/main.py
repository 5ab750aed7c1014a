"""windreg command-line entry point: ``windreg`` or ``python -m windreg``."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence

from pydantic import ValidationError

from windreg.core.config.settings import get_settings
from windreg.core.errors import DataError, ModelError, UsageError, WindRegError
from windreg.core.log.setup import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_MODEL = 4


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting on bad input."""

    def __init__(self, *args, **kwargs) -> None:
        kwargs.setdefault("formatter_class", argparse.ArgumentDefaultsHelpFormatter)
        super().__init__(*args, **kwargs)

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def exit_code(error: WindRegError) -> int:
    if isinstance(error, UsageError):
        return EXIT_USAGE
    if isinstance(error, DataError):
        return EXIT_DATA
    if isinstance(error, ModelError):
        return EXIT_MODEL
    return 1


def run(argv: Sequence[str]) -> int:
    """Parse ``argv``, dispatch the subcommand and return its exit code."""
    from windreg.core.cli.commands import build_parser

    try:
        settings = get_settings()
    except ValidationError as exc:
        print(f"error: invalid WINDREG_ environment settings: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        parser = build_parser(settings)
        args = parser.parse_args(list(argv))
        configure_logging(args.log_level)
        return args.handler(args, settings)
    except WindRegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        logger.debug("Command failed", exc_info=exc)
        return exit_code(exc)
    except SystemExit as exc:
        # --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    raise SystemExit(main())
