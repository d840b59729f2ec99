"""Effective context length of a schedule and the lower bound on the RoPE base.

The effective length of a schedule is the largest ``L`` such that
``b_value(m) >= 0`` for every integer ``m <= L``.  The base lower bound for a
target length ``L`` is the smallest base whose standard schedule reaches
effective length ``L``.

The predicate ``P(base) = "no violation in [1, L]"`` is *not* monotone in the
base: passing bases form many islands above the first one.  The solver
therefore brackets by scanning an increasing grid of candidate bases from 1
and only bisects inside the first failing/passing pair.  Eight log-spaced
probes inside the final bracket record any sign pattern bisection could not
see.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .decay import first_violation
from .schedule import ThetaSchedule, make_standard

__all__ = [
    "UnattainableError",
    "LengthResult",
    "BoundResult",
    "effective_length",
    "lower_bound_base",
    "candidate_bases",
    "table2",
    "context_lengths",
    "TABLE2_LABELS",
]

TABLE2_LABELS = ("1k", "2k", "4k", "8k", "16k", "32k", "64k", "128k", "256k", "512k", "1M")


class UnattainableError(ValueError):
    """No base up to ``base_max`` reaches the requested context length."""


@dataclass(frozen=True)
class LengthResult:
    base_or_schedule: str
    effective_length: int
    first_violation_m: int | None  # None: no violation up to m_limit (censored)
    d: int
    m_limit: int

    @property
    def censored(self) -> bool:
        return self.first_violation_m is None

    def to_dict(self) -> dict:
        return {
            "base_or_schedule": self.base_or_schedule,
            "effective_length": self.effective_length,
            "first_violation_m": self.first_violation_m,
            "d": self.d,
            "m_limit": self.m_limit,
        }


@dataclass(frozen=True)
class BoundResult:
    target_length: int
    d: int
    base: float
    bracket: tuple[float, float]
    verified: bool
    # (base, passes) at 8 log-spaced points strictly inside the bracket
    probes: tuple[tuple[float, bool], ...] = field(default=(), compare=False)

    @property
    def probe_monotone(self) -> bool:
        flags = [ok for _, ok in self.probes]
        return flags == sorted(flags)

    def to_dict(self) -> dict:
        return {
            "target_length": self.target_length,
            "d": self.d,
            "base": self.base,
            "bracket": list(self.bracket),
            "verified": self.verified,
        }


def effective_length(sched: ThetaSchedule, m_limit: int, fast: bool = True) -> LengthResult:
    """Scan ``m = 1 .. m_limit`` densely for the first negative ``b_value``."""
    if m_limit < 1:
        raise ValueError(f"m_limit must be >= 1, got {m_limit}")
    m_limit = int(m_limit)
    hit = first_violation(sched, 1, m_limit, fast=fast)
    length = m_limit if hit is None else hit - 1
    return LengthResult(sched.label, length, hit, sched.d, m_limit)


def _passes(base: float, length: int, d: int, fast: bool = True) -> bool:
    return first_violation(make_standard(base, d), 1, length, fast=fast) is None


def candidate_bases(grid="sig2", base_max: float = 1e12) -> Iterator[float]:
    """Increasing candidate bases starting at 1 and ending with ``base_max``.

    ``grid`` is ``"sig2"`` (every two-significant-digit value: 1.0, 1.1, ...,
    9.9, 10, 11, ...), ``"doubling"`` (1, 2, 4, ...) or a growth ratio > 1.
    """
    if grid == "sig2":
        exp = 0
        while True:
            for mant in range(10, 100):
                b = float(f"{mant}e{exp - 1}")
                if b >= base_max:
                    yield float(base_max)
                    return
                yield b
            exp += 1
    ratio = 2.0 if grid == "doubling" else float(grid)
    if not ratio > 1:
        raise ValueError(f"grid ratio must exceed 1, got {grid!r}")
    b = 1.0
    while b < base_max:
        yield b
        b *= ratio
    yield float(base_max)


def lower_bound_base(
    length: int,
    d: int = 128,
    tol_rel: float = 1e-3,
    base_max: float = 1e12,
    grid="sig2",
) -> BoundResult:
    """Smallest base (to ``tol_rel``) whose standard schedule keeps
    ``b_value >= 0`` on ``[1, length]``.

    Raises :class:`UnattainableError` when no candidate up to ``base_max``
    passes, e.g. for ``d = 2`` where ``b_value(m) = cos m`` for every base.
    """
    if isinstance(length, bool) or int(length) != length or length < 1:
        raise ValueError(f"length must be a positive integer, got {length!r}")
    if isinstance(d, bool) or int(d) != d or d < 2 or d % 2:
        raise ValueError(f"d must be an even integer >= 2, got {d!r}")
    if not tol_rel > 0:
        raise ValueError("tol_rel must be positive")
    length, d = int(length), int(d)

    lo = hi = None
    prev = None
    for cand in candidate_bases(grid, base_max):
        if _passes(cand, length, d):
            lo, hi = prev, cand
            break
        prev = cand
    if hi is None:
        raise UnattainableError(
            f"no base <= {base_max:g} gives effective length {length} at d={d}"
        )
    if lo is None:
        # the very first candidate (base 1) already passes
        lo = hi

    while (hi - lo) / hi > tol_rel:
        mid = math.sqrt(lo * hi)
        if _passes(mid, length, d):
            hi = mid
        else:
            lo = mid

    verified = _passes(hi, length, d, fast=False)
    if not verified:
        raise RuntimeError(f"reference scan rejects base {hi!r} accepted by the fast scan")

    probes = ()
    if hi > lo:
        inner = np.geomspace(lo, hi, 10)[1:-1]
        probes = tuple((float(b), _passes(float(b), length, d)) for b in inner)
        if [ok for _, ok in probes] != sorted(ok for _, ok in probes):
            warnings.warn(
                f"non-monotone pass pattern inside final bracket [{lo:.6g}, {hi:.6g}] "
                f"for length {length}: {[ok for _, ok in probes]}",
                RuntimeWarning,
                stacklevel=2,
            )
    return BoundResult(length, d, hi, (lo, hi), verified, probes)


def context_lengths(k: int = 1024) -> list[tuple[str, int]]:
    """Table lengths 1k .. 512k and 1M, with ``k`` = 1024 or 1000."""
    if k not in (1000, 1024):
        raise ValueError("k-convention must be 1000 or 1024")
    out = [(label, k * 2 ** j) for j, label in enumerate(TABLE2_LABELS[:-1])]
    out.append(("1M", k * k))
    return out


def table2(
    d: int = 128,
    k: int = 1024,
    tol_rel: float = 1e-3,
    grid="sig2",
    workers: int = 1,
) -> list[tuple[int, BoundResult]]:
    """Base lower bounds for context lengths 1k .. 1M.

    Rows are independent and may run in ``workers`` threads; results do not
    depend on the worker count.
    """
    lengths = [n for _, n in context_lengths(k)]
    solve = lambda n: lower_bound_base(n, d, tol_rel=tol_rel, grid=grid)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(solve, lengths))
    else:
        results = [solve(n) for n in lengths]
    rows = list(zip(lengths, results))
    bases = [r.base for _, r in rows]
    inversions = [lengths[i + 1] for i in range(len(bases) - 1) if bases[i + 1] < bases[i]]
    if inversions:
        warnings.warn(f"lower bound decreases at lengths {inversions}", RuntimeWarning, stacklevel=2)
    return rows
