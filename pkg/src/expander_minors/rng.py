"""Deterministic random streams.

All randomness in the package flows through counter-based Philox (4x64-10)
generators keyed by ``(seed, stream)``.  Substreams are derived by mixing
integer labels into the second key word, so any (seed, label...) pair names
the same stream on every platform and every run.
"""
from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_MIX = 0x9E3779B97F4A7C15  # golden-ratio increment, splitmix64 style


def _mix64(x: int) -> int:
    x &= _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return (x ^ (x >> 31)) & _MASK


def derive(*labels: int) -> int:
    """Fold integer labels into a single 64-bit stream id."""
    acc = 0
    for lab in labels:
        acc = _mix64((acc + _MIX + (int(lab) & _MASK)) & _MASK)
    return acc


def stream(seed: int, *labels: int) -> np.random.Generator:
    """Return the Philox generator for (seed, labels...)."""
    key = np.array([int(seed) & _MASK, derive(*labels) if labels else 0],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
