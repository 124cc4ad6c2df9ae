"""Vectorized exact predicates on scaled integer pairs (u + v*sqrt(d)) / q.

All inputs are int64 numpy arrays whose magnitudes respect the kernel safety
bound, so every intermediate square below fits in int64 and the answers are
exact despite being computed with machine integers.
"""

from __future__ import annotations

import numpy as np


def sign_pairs(a, b, d: int):
    """Elementwise exact sign of a + b*sqrt(d) as an int8 array."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if d == 0:
        return np.sign(a).astype(np.int8)
    sa = np.sign(a)
    sb = np.sign(b)
    agree = sa * sb >= 0
    easy = np.where(sa != 0, sa, sb)
    sq = np.sign(a * a - b * b * d)  # |a| vs |b|*sqrt(d)
    mixed = np.where(sa > 0, sq, -sq)
    return np.where(agree, easy, mixed).astype(np.int8)


def less_than_point(U, V, tu: int, tv: int, d: int):
    """Boolean array: (U + V*sqrt(d)) < (tu + tv*sqrt(d)), exactly."""
    return sign_pairs(U - tu, V - tv, d) < 0


def equal_point(U, V, tu: int, tv: int, d: int):
    """Boolean array of exact equality with a fixed point."""
    return (U == tu) & (V == tv) if d else (U == tu)
