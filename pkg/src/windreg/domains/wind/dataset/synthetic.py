"""Seeded synthetic wind-measurement generator.

Each feature is an independent normal draw clipped to the calibration range.
Power follows a logistic curve in wind speed plus Gaussian noise:

    P(v) = rated / (1 + exp(-steepness * (v - midpoint)))

The curve constants are plausible turbine values, not fitted to any record.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import datetime, timedelta

import numpy as np

from windreg.core.errors import DataError
from windreg.core.profile.loader import Profile
from windreg.domains.wind.constants import (
    FEATURE_COLUMNS,
    REFERENCE_ROWS,
    REFERENCE_STATS,
    SAMPLING_INTERVAL,
    SYNTHETIC_START,
    TARGET_COLUMN,
)
from windreg.domains.wind.dataset.models import Dataset

logger = logging.getLogger(__name__)


class InvalidSynthConfigError(DataError):
    """Raised when generator settings cannot produce a valid dataset."""


@dataclass(frozen=True)
class ColumnDistribution:
    """Normal(mean, std) clipped to [low, high]."""

    mean: float
    std: float
    low: float
    high: float

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.clip(rng.normal(self.mean, self.std, n), self.low, self.high)


def _reference_distribution(column: str) -> ColumnDistribution:
    mean, std, low, high = REFERENCE_STATS[column]
    return ColumnDistribution(mean=mean, std=std, low=low, high=high)


def _default_features() -> dict[str, ColumnDistribution]:
    return {name: _reference_distribution(name) for name in FEATURE_COLUMNS}


@dataclass(frozen=True)
class SynthConfig:
    n: int = REFERENCE_ROWS
    seed: int = 1
    rated_power_kw: float = 2020.0
    midpoint_ms: float = 10.8
    steepness: float = 0.6          # per m/s
    noise_std_kw: float = 10.0
    power_low_kw: float = REFERENCE_STATS[TARGET_COLUMN][2]
    power_high_kw: float = REFERENCE_STATS[TARGET_COLUMN][3]
    features: dict[str, ColumnDistribution] = field(default_factory=_default_features)
    start: datetime = SYNTHETIC_START
    interval: timedelta = SAMPLING_INTERVAL

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidSynthConfigError(f"Row count must be >= 1, got {self.n}")
        if not self.rated_power_kw > 0:
            raise InvalidSynthConfigError("rated_power_kw must be positive")
        if not self.steepness > 0:
            raise InvalidSynthConfigError("steepness must be positive")
        if self.noise_std_kw < 0:
            raise InvalidSynthConfigError("noise_std_kw must be >= 0")
        if self.power_low_kw > self.power_high_kw:
            raise InvalidSynthConfigError("power clip bounds are reversed")
        if set(self.features) != set(FEATURE_COLUMNS):
            raise InvalidSynthConfigError(
                f"Feature distributions must cover exactly {', '.join(FEATURE_COLUMNS)}"
            )
        for name, dist in self.features.items():
            if dist.std < 0 or dist.low > dist.high:
                raise InvalidSynthConfigError(f"Invalid distribution for {name}")
        if self.interval <= timedelta(0):
            raise InvalidSynthConfigError("interval must be positive")


def power_curve(speed, config: SynthConfig) -> np.ndarray:
    """Noise-free logistic power (kW) at the given wind speeds."""
    v = np.asarray(speed, dtype=float)
    return config.rated_power_kw / (1.0 + np.exp(-config.steepness * (v - config.midpoint_ms)))


def generate_synthetic(config: SynthConfig | None = None) -> Dataset:
    """Draw a dataset; identical configs give bit-identical datasets.

    Draw order is fixed: one block per feature in column order, then noise.
    """
    config = config or SynthConfig()
    rng = np.random.default_rng(config.seed)
    columns = [config.features[name].draw(rng, config.n) for name in FEATURE_COLUMNS]
    features = np.column_stack(columns)

    speed = features[:, FEATURE_COLUMNS.index("wind_speed_ms")]
    noise = rng.normal(0.0, config.noise_std_kw, config.n)
    power = np.clip(power_curve(speed, config) + noise, config.power_low_kw, config.power_high_kw)

    timestamps = tuple(config.start + i * config.interval for i in range(config.n))
    logger.info(
        "Generated %d synthetic rows (seed %d, rated %.0f kW)",
        config.n, config.seed, config.rated_power_kw,
    )
    return Dataset(features=features, target=power, timestamps=timestamps)


def synth_config_from_profile(
    profile: Profile, *, n: int | None = None, seed: int | None = None
) -> SynthConfig:
    """Build a SynthConfig from a loaded profile's column targets and curve settings."""
    missing = [c for c in (*FEATURE_COLUMNS, TARGET_COLUMN) if c not in profile.columns]
    if missing:
        raise InvalidSynthConfigError(
            f"Profile {profile.name!r} lacks columns: {', '.join(missing)}"
        )
    features = {
        name: ColumnDistribution(
            mean=profile.columns[name].mean,
            std=profile.columns[name].std,
            low=profile.columns[name].min,
            high=profile.columns[name].max,
        )
        for name in FEATURE_COLUMNS
    }
    target = profile.columns[TARGET_COLUMN]
    curve = profile.synthetic
    defaults = SynthConfig()
    return SynthConfig(
        n=n if n is not None else int(curve.get("rows", defaults.n)),
        seed=seed if seed is not None else int(curve.get("seed", defaults.seed)),
        rated_power_kw=float(curve.get("rated_power_kw", defaults.rated_power_kw)),
        midpoint_ms=float(curve.get("midpoint_ms", defaults.midpoint_ms)),
        steepness=float(curve.get("steepness", defaults.steepness)),
        noise_std_kw=float(curve.get("noise_std_kw", defaults.noise_std_kw)),
        power_low_kw=target.min,
        power_high_kw=target.max,
        features=features,
        interval=timedelta(minutes=float(curve.get("interval_minutes", 10))),
    )

