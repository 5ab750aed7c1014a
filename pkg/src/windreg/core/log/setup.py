"""Log output configuration for command-line runs.

Library modules log through ``logging.getLogger(__name__)``; this module
routes those records through structlog's formatter onto stderr so stdout
stays reserved for command results.
"""

from __future__ import annotations

import logging
import sys

import structlog

_HANDLER_NAME = "windreg-stderr"


def configure_logging(level: str = "warning") -> None:
    """Install a single stderr handler rendering stdlib records with structlog.

    Calling this more than once replaces the previously installed handler.
    """
    numeric_level = getattr(logging, level.upper(), None)
    if not isinstance(numeric_level, int):
        numeric_level = logging.WARNING

    formatter = structlog.stdlib.ProcessorFormatter(
        foreign_pre_chain=[
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso"),
        ],
        processors=[
            structlog.stdlib.ProcessorFormatter.remove_processors_meta,
            structlog.dev.ConsoleRenderer(colors=False),
        ],
    )

    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(_HANDLER_NAME)
    handler.setFormatter(formatter)

    root = logging.getLogger()
    for existing in list(root.handlers):
        if existing.get_name() == _HANDLER_NAME:
            root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(numeric_level)
