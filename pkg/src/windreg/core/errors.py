"""Exception families shared across the toolkit.

The CLI maps each family to an exit code:

* ``UsageError``: bad command line (exit 2)
* ``DataError``: unreadable or invalid input data (exit 3)
* ``ModelError``: fitting, prediction or model-file failures (exit 4)
"""

from __future__ import annotations


class WindRegError(Exception):
    """Root of every error raised deliberately by windreg."""


class UsageError(WindRegError):
    """Raised when the command line cannot be turned into a run."""


class DataError(WindRegError):
    """Raised when input data violates a documented contract."""


class ModelError(WindRegError):
    """Raised when a model cannot be fitted, applied or persisted."""


class DimensionMismatchError(ModelError):
    """Raised when a query's feature count differs from the fitted model's."""

    def __init__(self, expected: int, got: int) -> None:
        super().__init__(f"Expected {expected} features, got {got}")
        self.expected = expected
        self.got = got
