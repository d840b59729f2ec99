"""Long-term decay quantities of a rotation-angle schedule.

* ``b_value``: the similar-vs-random discrimination sum ``sum_i cos(m theta_i)``.
* ``weighted_b_value``: the same with per-component variances as weights.
* ``upper_bound_factor``: ``sum_n |sum_{l<n} exp(1j m theta_l)|``, the
  schedule-dependent part of the attention-score upper bound.

Scans over many integer ``m`` go through :func:`first_violation`, which has a
reference path (direct cosines, chunked) and a fast path based on angle
addition.  The fast path re-evaluates every point that lands within a guard
band of zero with the reference formula, so the sign decisions of both paths
agree.
"""
from __future__ import annotations

import csv
import enum
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .schedule import ThetaSchedule

__all__ = [
    "Metric",
    "CurveSamples",
    "b_value",
    "b_values",
    "weighted_b_value",
    "weighted_b_values",
    "upper_bound_factor",
    "upper_bound_factors",
    "violation_count",
    "first_violation",
    "sample_curve",
]

_CHUNK = 8192
_FAST_BLOCK = 1024
_FAST_MAX_GROUP = 64
# fast-path values closer to zero than this are recomputed directly
_GUARD = 1e-7


class Metric(str, enum.Enum):
    BValue = "b"
    WeightedBValue = "weighted"
    UpperBound = "upper"


def _as_m(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if np.any(m < 0):
        raise ValueError("relative distance m must be >= 0")
    return m


def b_values(sched: ThetaSchedule, ms) -> np.ndarray:
    """Vectorised ``b_value``; non-integer ``m`` is accepted."""
    ms = _as_m(ms).reshape(-1)
    out = np.empty(ms.size)
    for lo in range(0, ms.size, _CHUNK):
        chunk = ms[lo:lo + _CHUNK]
        out[lo:lo + chunk.size] = np.cos(np.outer(chunk, sched.thetas)).sum(axis=1)
    return out


def b_value(sched: ThetaSchedule, m) -> float:
    return float(b_values(sched, [m])[0])


def _pair_weights(sched: ThetaSchedule, sigmas) -> np.ndarray:
    sigmas = np.asarray(sigmas, dtype=np.float64).reshape(-1)
    if sigmas.size != sched.d:
        raise ValueError(f"need {sched.d} standard deviations, got {sigmas.size}")
    if np.any(sigmas < 0) or not np.all(np.isfinite(sigmas)):
        raise ValueError("standard deviations must be finite and >= 0")
    return sigmas[0::2] ** 2 + sigmas[1::2] ** 2


def weighted_b_values(sched: ThetaSchedule, sigmas, ms) -> np.ndarray:
    w = _pair_weights(sched, sigmas)
    ms = _as_m(ms).reshape(-1)
    out = np.empty(ms.size)
    for lo in range(0, ms.size, _CHUNK):
        chunk = ms[lo:lo + _CHUNK]
        out[lo:lo + chunk.size] = np.cos(np.outer(chunk, sched.thetas)) @ w
    return out


def weighted_b_value(sched: ThetaSchedule, sigmas, m) -> float:
    """``sum_i (sigma_{2i}^2 + sigma_{2i+1}^2) cos(m theta_i)``."""
    return float(weighted_b_values(sched, sigmas, [m])[0])


def upper_bound_factors(sched: ThetaSchedule, ms) -> np.ndarray:
    ms = _as_m(ms).reshape(-1)
    out = np.empty(ms.size)
    step = max(1, _CHUNK // 4)
    for lo in range(0, ms.size, step):
        chunk = ms[lo:lo + step]
        phasors = np.exp(1j * np.outer(chunk, sched.thetas))
        out[lo:lo + chunk.size] = np.abs(np.cumsum(phasors, axis=1)).sum(axis=1)
    return out


def upper_bound_factor(sched: ThetaSchedule, m) -> float:
    """Partial-sum magnitude factor of the attention-score upper bound.

    Maximal at ``m = 0`` where it equals ``n (n + 1) / 2`` with ``n = d / 2``.
    """
    return float(upper_bound_factors(sched, [m])[0])


def _check_range(m_lo, m_hi):
    if m_lo > m_hi:
        raise ValueError(f"empty range [{m_lo}, {m_hi}]")
    if m_lo < 0:
        raise ValueError("m must be >= 0")


def violation_count(sched: ThetaSchedule, m_lo: int, m_hi: int) -> int:
    """Number of integers ``m`` in ``[m_lo, m_hi]`` with ``b_value < 0``."""
    _check_range(m_lo, m_hi)
    count = 0
    for lo in range(m_lo, m_hi + 1, _CHUNK):
        ms = np.arange(lo, min(m_hi, lo + _CHUNK - 1) + 1, dtype=np.float64)
        count += int(np.count_nonzero(b_values(sched, ms) < 0))
    return count


def _first_violation_reference(sched, m_lo, m_hi):
    for lo in range(m_lo, m_hi + 1, _CHUNK):
        ms = np.arange(lo, min(m_hi, lo + _CHUNK - 1) + 1, dtype=np.float64)
        neg = np.flatnonzero(b_values(sched, ms) < 0)
        if neg.size:
            return lo + int(neg[0])
    return None


class _AngleAdditionScanner:
    """Evaluates ``B`` on consecutive blocks via
    ``cos((a + j) t) = cos(a t) cos(j t) - sin(a t) sin(j t)``.

    ``cos(a t)``, ``sin(a t)`` are computed directly per block start, so errors
    do not accumulate along ``m``.
    """

    def __init__(self, sched: ThetaSchedule, block: int = _FAST_BLOCK):
        self.sched = sched
        self.block = block
        j = np.arange(block, dtype=np.float64)
        angles = np.outer(j, sched.thetas)
        self._cos_t = np.cos(angles).T.copy()
        self._sin_t = np.sin(angles).T.copy()

    def values(self, starts: np.ndarray) -> np.ndarray:
        """``B`` at ``starts[g] + j`` for ``j < block``; shape ``(len(starts), block)``."""
        ang = np.outer(starts, self.sched.thetas)
        return np.cos(ang) @ self._cos_t - np.sin(ang) @ self._sin_t

    def first_violation(self, m_lo: int, m_hi: int):
        block = self.block
        group = 1
        lo = m_lo
        while lo <= m_hi:
            n_blocks = min(group, (m_hi - lo) // block + 1)
            starts = lo + block * np.arange(n_blocks, dtype=np.float64)
            vals = self.values(starts).reshape(-1)
            ms = lo + np.arange(vals.size)
            suspect = np.flatnonzero((vals < _GUARD) & (ms <= m_hi))
            for idx in suspect:
                v = vals[idx]
                if v <= -_GUARD or b_value(self.sched, int(ms[idx])) < 0:
                    return int(ms[idx])
            lo += n_blocks * block
            group = min(2 * group, _FAST_MAX_GROUP)
        return None


def first_violation(sched: ThetaSchedule, m_lo: int, m_hi: int, fast: bool = True):
    """Smallest integer ``m`` in ``[m_lo, m_hi]`` with ``b_value < 0``, or ``None``."""
    _check_range(m_lo, m_hi)
    if not fast:
        return _first_violation_reference(sched, m_lo, m_hi)
    return _AngleAdditionScanner(sched).first_violation(m_lo, m_hi)


@dataclass(frozen=True)
class CurveSamples:
    metric: Metric
    m: np.ndarray
    values: np.ndarray

    @property
    def points(self):
        return list(zip(self.m.tolist(), self.values.tolist()))

    def to_csv(self, dest=None) -> str:
        """Write ``m,value`` rows (17 significant digits).

        ``dest`` may be a path, an open text file or ``None`` (returns the text).
        """
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["m", "value"])
        for m, v in zip(self.m.tolist(), self.values.tolist()):
            writer.writerow([m, f"{v:.17g}"])
        text = buf.getvalue()
        if isinstance(dest, (str, Path)):
            Path(dest).write_text(text)
        elif dest is not None:
            dest.write(text)
        return text


def sample_curve(
    sched: ThetaSchedule,
    metric: Metric | str,
    m_max: int,
    stride: int = 1,
    sigmas=None,
    workers: int = 1,
) -> CurveSamples:
    """Sample a decay metric at ``m = 0, stride, 2 stride, ... <= m_max``."""
    metric = Metric(metric)
    if stride <= 0:
        raise ValueError("stride must be positive")
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    ms = np.arange(0, m_max + 1, stride, dtype=np.int64)
    if metric is Metric.BValue:
        fn = lambda part: b_values(sched, part)
    elif metric is Metric.UpperBound:
        fn = lambda part: upper_bound_factors(sched, part)
    else:
        if sigmas is None:
            raise ValueError("weighted metric needs sigmas")
        fn = lambda part: weighted_b_values(sched, sigmas, part)

    parts = [ms[i:i + _CHUNK] for i in range(0, ms.size, _CHUNK)]
    if workers > 1 and len(parts) > 1:
        with ThreadPoolExecutor(workers) as pool:
            chunks = list(pool.map(fn, parts))
    else:
        chunks = [fn(p) for p in parts]
    values = np.concatenate(chunks) if chunks else np.empty(0)
    return CurveSamples(metric, ms, values)
