"""SVG plumbing: template environment, scales and number formatting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from jinja2 import Environment, FileSystemLoader, StrictUndefined

from windreg.core.errors import DataError

TEMPLATE_DIR = Path(__file__).resolve().parent / "templates"

SVG_NAMESPACE = "http://www.w3.org/2000/svg"

# Series colours, assigned in order.
PALETTE = ("#1f1f1f", "#1b6ca8", "#d1495b", "#2a9d62", "#8e6c8a", "#e6a23c")

_environment = Environment(
    loader=FileSystemLoader(TEMPLATE_DIR),
    autoescape=True,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
    undefined=StrictUndefined,
)


class ReportError(DataError):
    """Raised when a table or figure cannot be produced from its inputs."""


class EmptyDatasetError(ReportError):
    """Raised when a figure has fewer points than it needs."""


def render(template: str, **context) -> str:
    return _environment.get_template(template).render(**context)


def num(value: float, digits: int = 2) -> str:
    """Fixed-point text without a negative zero."""
    text = f"{value:.{digits}f}"
    if text.startswith("-") and float(text) == 0.0:
        text = text[1:]
    return text


_environment.filters["num"] = num


@dataclass(frozen=True)
class LinearScale:
    """Maps a data interval onto a pixel interval (either may be reversed)."""

    lo: float
    hi: float
    start: float
    end: float

    @classmethod
    def fit(cls, values: np.ndarray, start: float, end: float) -> LinearScale:
        lo, hi = float(np.min(values)), float(np.max(values))
        if lo == hi:
            lo, hi = lo - 0.5, hi + 0.5
        return cls(lo=lo, hi=hi, start=start, end=end)

    def __call__(self, values):
        fraction = (np.asarray(values, dtype=float) - self.lo) / (self.hi - self.lo)
        return self.start + fraction * (self.end - self.start)


def ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    """Round-numbered tick positions covering [lo, hi]."""
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / max(count - 1, 1)
    magnitude = 10 ** math.floor(math.log10(raw))
    step = next(m * magnitude for m in (1, 2, 2.5, 5, 10) if m * magnitude >= raw)
    first = math.ceil(lo / step) * step
    values = []
    value = first
    while value <= hi + step * 1e-9:
        values.append(round(value, 10) + 0.0)
        value += step
    return values


def thin(n: int, limit: int) -> np.ndarray:
    """Evenly strided row indices, at most ``limit`` of them."""
    if n <= limit:
        return np.arange(n)
    return np.unique(np.linspace(0, n - 1, limit).astype(int))
