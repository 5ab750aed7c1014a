"""Deterministic child seeds derived from one master seed."""

from __future__ import annotations

import numpy as np


def derive_seed(seed: int, *keys: int) -> int:
    """Return a 32-bit seed determined only by ``seed`` and ``keys``.

    ``derive_seed(42, 3)`` is the seed of fold 3 under master seed 42, whatever
    order or thread the folds run in.
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, *(int(k) for k in keys)]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def rng(seed: int, *keys: int) -> np.random.Generator:
    """A numpy Generator seeded with :func:`derive_seed`."""
    return np.random.default_rng(derive_seed(seed, *keys))
