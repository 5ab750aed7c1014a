"""Versioned wind-turbine dataset profiles."""

from __future__ import annotations

from pathlib import Path

from windreg.domains.wind.constants import PROFILE_FILE

PROFILE_DIR = Path(__file__).resolve().parent


def default_profile_path() -> Path:
    return PROFILE_DIR / PROFILE_FILE
