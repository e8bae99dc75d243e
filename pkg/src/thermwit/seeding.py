"""Deterministic, purpose-named random streams from one master seed.

Every random choice in the package flows from a single 64-bit seed; named
children keep independent consumers (optimizer multistarts, self-check
spectra, ...) decoupled so adding one never reshuffles another.
"""

from __future__ import annotations

import zlib

import numpy as np


def child_seed(seed: int, label: str) -> int:
    """Stable 64-bit child seed for a named purpose."""
    ss = np.random.SeedSequence((int(seed), zlib.crc32(label.encode("utf-8"))))
    return int(ss.generate_state(1, np.uint64)[0])


def named_rng(seed: int, label: str) -> np.random.Generator:
    """Generator seeded by ``child_seed(seed, label)``."""
    return np.random.default_rng(child_seed(seed, label))
