"""Dataset profile loader. Reads versioned YAML profiles from disk."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from windreg.core.errors import DataError

logger = logging.getLogger(__name__)


class ProfileError(DataError):
    """Raised when a profile file is missing, unparseable or incomplete."""


@dataclass(frozen=True)
class ColumnProfile:
    name: str
    role: str           # "feature" or "target"
    mean: float
    std: float
    min: float
    max: float


@dataclass(frozen=True)
class ReferenceResults:
    """Published benchmark figures kept alongside a profile."""

    cv_scores: dict[str, tuple[float, ...]] = field(default_factory=dict)
    cv_average: dict[str, float] = field(default_factory=dict)
    test_errors: dict[str, dict[str, float]] = field(default_factory=dict)
    importance: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class Profile:
    name: str
    version: str
    display_name: str
    description: str
    rows: int
    interval_minutes: float
    columns: dict[str, ColumnProfile]
    synthetic: dict[str, Any] = field(default_factory=dict)
    reference: ReferenceResults = field(default_factory=ReferenceResults)

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(name for name, col in self.columns.items() if col.role == "feature")

    @property
    def target_name(self) -> str:
        return next(name for name, col in self.columns.items() if col.role == "target")


def load_profile(path: str | Path) -> Profile:
    """Parse a YAML profile into a :class:`Profile`."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            data: dict[str, Any] = yaml.safe_load(f)
    except FileNotFoundError:
        raise ProfileError(f"Profile not found: {path}") from None
    except yaml.YAMLError as exc:
        raise ProfileError(f"Profile {path} is not valid YAML: {exc}") from None

    if not isinstance(data, dict):
        raise ProfileError(f"Profile {path} must be a mapping")
    try:
        columns = {
            name: ColumnProfile(
                name=name,
                role=str(spec.get("role", "feature")),
                mean=float(spec["mean"]),
                std=float(spec["std"]),
                min=float(spec["min"]),
                max=float(spec["max"]),
            )
            for name, spec in data["columns"].items()
        }
        reference_data = data.get("reference", {}) or {}
        reference = ReferenceResults(
            cv_scores={
                model: tuple(float(v) for v in scores)
                for model, scores in reference_data.get("cv_scores", {}).items()
            },
            cv_average={k: float(v) for k, v in reference_data.get("cv_average", {}).items()},
            test_errors={
                model: {metric: float(v) for metric, v in errors.items()}
                for model, errors in reference_data.get("test_errors", {}).items()
            },
            importance={k: float(v) for k, v in reference_data.get("importance", {}).items()},
        )
        profile = Profile(
            name=data["name"],
            version=str(data["version"]),
            display_name=data.get("display_name", data["name"]),
            description=str(data.get("description", "")).strip(),
            rows=int(data.get("rows", 0)),
            interval_minutes=float(data.get("interval_minutes", 10)),
            columns=columns,
            synthetic=dict(data.get("synthetic", {}) or {}),
            reference=reference,
        )
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ProfileError(f"Profile {path} is incomplete or malformed: {exc!r}") from None

    if sum(1 for c in columns.values() if c.role == "target") != 1:
        raise ProfileError(f"Profile {path} must declare exactly one target column")
    logger.info("Loaded profile: %s (v%s)", profile.name, profile.version)
    return profile
