"""Blockwise rotary rotation and RoPE attention scores.

Pairs are interleaved: components ``(2i, 2i+1)`` rotate together by ``m * theta_i``.
Both functions broadcast over leading axes of ``x`` and over array-valued ``m``.
"""
from __future__ import annotations

import numpy as np

from .schedule import ThetaSchedule

__all__ = ["rotate", "attention_score"]


def _as_head(x, sched: ThetaSchedule) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != sched.d:
        raise ValueError(f"vector length {x.shape[-1]} does not match schedule d={sched.d}")
    return x


def rotate(x, m, sched: ThetaSchedule) -> np.ndarray:
    """Apply ``R_{m, theta}`` to ``x`` (shape ``(..., d)``)."""
    x = _as_head(x, sched)
    m = np.asarray(m, dtype=np.float64)
    angle = m[..., None] * sched.thetas
    c, s = np.cos(angle), np.sin(angle)
    even, odd = x[..., 0::2], x[..., 1::2]
    out = np.empty(np.broadcast_shapes(x.shape, angle.shape[:-1] + (sched.d,)))
    out[..., 0::2] = c * even - s * odd
    out[..., 1::2] = s * even + c * odd
    return out


def attention_score(q, k, m, sched: ThetaSchedule):
    """``q^T R_{m, theta} k`` for relative distance ``m``.

    Returns a float for single vectors, an array for batches.
    """
    q = _as_head(q, sched)
    score = np.sum(q * rotate(k, m, sched), axis=-1)
    return float(score) if np.ndim(score) == 0 else score
