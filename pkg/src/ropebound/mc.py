"""Monte Carlo check of the similar-vs-random attention gap.

For i.i.d. query/key components with variance ``sigma**2`` and a similar key
``k* = q + eps`` (``eps`` mean zero, independent of ``q``),

    E[q^T R_m k*] - E[q^T R_m k] = 2 sigma^2 * b_value(m)

and with per-component standard deviations the right-hand side becomes
``weighted_b_value``.  The estimators here sample the paired statistic
``q^T R_m (q + eps) - q^T R_m k`` and report its mean, standard error and the
z-score against theory.

Sampling is split into fixed-size blocks; block ``b`` draws from the stream
``SeedSequence(seed).spawn(...)[b]``, and block moments are merged in block
order.  Results are therefore identical for any worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .decay import b_value, weighted_b_value
from .rope import attention_score
from .schedule import ThetaSchedule

__all__ = ["McConfig", "McReport", "estimate_gap", "estimate_gap_hetero", "argmax_win_rate"]

BLOCK_SIZE = 8192
DISTRIBUTIONS = ("gaussian", "uniform")


@dataclass(frozen=True)
class McConfig:
    n_samples: int = 100_000
    sigma: float = 1.0
    mu: float = 0.0
    eps_scale: float | None = None  # None means 0.1 * sigma
    seed: int = 0
    distribution: str = "gaussian"

    def __post_init__(self):
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            raise ValueError("n_samples must be a positive integer")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.eps_scale is not None and not self.eps_scale >= 0:
            raise ValueError("eps_scale must be >= 0")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"distribution must be one of {DISTRIBUTIONS}")

    @property
    def eps_std(self) -> float:
        return 0.1 * self.sigma if self.eps_scale is None else float(self.eps_scale)


@dataclass(frozen=True)
class McReport:
    gap_hat: float
    stderr: float
    theory: float
    z: float
    config: McConfig
    m: int | float

    def to_dict(self) -> dict:
        cfg = asdict(self.config)
        cfg["eps_scale"] = self.config.eps_std
        return {
            "gap_hat": self.gap_hat,
            "stderr": self.stderr,
            "theory": self.theory,
            "z": self.z,
            "m": self.m,
            "config": cfg,
        }


def _draw(rng: np.random.Generator, shape, mean, std, distribution):
    """Components with the requested mean and (possibly per-axis) std."""
    if distribution == "gaussian":
        unit = rng.standard_normal(shape)
    else:
        unit = rng.uniform(-math.sqrt(3.0), math.sqrt(3.0), shape)
    return mean + std * unit


def _block_streams(seed: int, n: int):
    n_blocks = -(-n // BLOCK_SIZE)
    children = np.random.SeedSequence(int(seed)).spawn(n_blocks)
    sizes = [min(BLOCK_SIZE, n - b * BLOCK_SIZE) for b in range(n_blocks)]
    return list(zip(children, sizes))


def _map_blocks(fn, streams, workers):
    if workers > 1 and len(streams) > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda a: fn(*a), streams))
    return [fn(*a) for a in streams]


def _merge_moments(parts):
    """Chan's pairwise update, applied in block order."""
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        total = n + nb
        delta = mb - mean
        mean += delta * nb / total
        m2 += m2b + delta * delta * n * nb / total
        n = total
    return n, mean, m2


def _gap_run(sched, m, stds, cfg, theory, workers) -> McReport:
    d = sched.d

    def block(seq, size):
        rng = np.random.default_rng(seq)
        # fixed draw order keeps q and k identical across eps_scale settings
        q = _draw(rng, (size, d), cfg.mu, stds, cfg.distribution)
        k = _draw(rng, (size, d), cfg.mu, stds, cfg.distribution)
        eps = cfg.eps_std * rng.standard_normal((size, d))
        diff = attention_score(q, q + eps, m, sched) - attention_score(q, k, m, sched)
        mean = float(diff.mean())
        return size, mean, float(np.sum((diff - mean) ** 2))

    n, mean, m2 = _merge_moments(_map_blocks(block, _block_streams(cfg.seed, cfg.n_samples), workers))
    stderr = math.sqrt(m2 / (n - 1) / n) if n > 1 else float("nan")
    if stderr > 0:
        z = (mean - theory) / stderr
    elif mean == theory:
        z = 0.0
    else:
        z = math.copysign(math.inf, mean - theory) if n > 1 else float("nan")
    return McReport(mean, stderr, theory, z, cfg, int(m) if float(m).is_integer() else float(m))


def estimate_gap(sched: ThetaSchedule, m, cfg: McConfig, workers: int = 1) -> McReport:
    """Monte Carlo estimate of the similar-vs-random gap, theory ``2 sigma^2 B_m``."""
    theory = 2.0 * cfg.sigma ** 2 * b_value(sched, m)
    return _gap_run(sched, m, cfg.sigma, cfg, theory, workers)


def estimate_gap_hetero(sched: ThetaSchedule, m, sigmas, cfg: McConfig, workers: int = 1) -> McReport:
    """As :func:`estimate_gap` with per-component standard deviations.

    ``cfg.sigma`` is ignored except as the default scale of ``eps``.
    """
    sigmas = np.asarray(sigmas, dtype=np.float64).reshape(-1)
    theory = weighted_b_value(sched, sigmas, m)
    return _gap_run(sched, m, sigmas, cfg, theory, workers)


def argmax_win_rate(
    sched: ThetaSchedule,
    m,
    context_size: int,
    cfg: McConfig,
    null: bool = False,
    workers: int = 1,
) -> float:
    """Fraction of trials in which the similar key ``q + eps`` strictly beats
    ``context_size`` random keys, all placed at relative distance ``m``.

    With ``null=True`` the similar key is replaced by another random key, so
    the expected rate is ``1 / (context_size + 1)``.
    """
    if context_size < 1:
        raise ValueError("context_size must be >= 1")
    d = sched.d

    def block(seq, size):
        rng = np.random.default_rng(seq)
        q = _draw(rng, (size, d), cfg.mu, cfg.sigma, cfg.distribution)
        keys = _draw(rng, (size, context_size, d), cfg.mu, cfg.sigma, cfg.distribution)
        eps = cfg.eps_std * rng.standard_normal((size, d))
        if null:
            target = _draw(rng, (size, d), cfg.mu, cfg.sigma, cfg.distribution)
        else:
            target = q + eps
        s_target = attention_score(q, target, m, sched)
        s_rand = attention_score(q[:, None, :], keys, m, sched)
        return int(np.count_nonzero(s_target > s_rand.max(axis=1)))

    wins = _map_blocks(block, _block_streams(cfg.seed, cfg.n_samples), workers)
    return sum(wins) / cfg.n_samples
