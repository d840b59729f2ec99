"""Rotation-angle schedules for rotary position embedding.

A schedule is the vector of per-pair frequencies ``theta_0 .. theta_{d/2-1}``
together with the recipe that produced it.  Every analysis in the package
consumes a :class:`ThetaSchedule`.

Position interpolation is stored as a frequency-scaled schedule
(``theta / s``) because ``R_{m/s, theta} == R_{m, theta/s}``; downstream code
therefore only ever sees integer relative distances.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

__all__ = [
    "Standard",
    "PiScaled",
    "NtkScaled",
    "Method2",
    "Custom",
    "Recipe",
    "ThetaSchedule",
    "make_standard",
    "make_pi_scaled",
    "make_ntk_scaled",
    "ntk_base",
    "make_method1",
    "make_method2",
    "make_custom",
    "load_custom_csv",
    "from_recipe",
    "parse_schedule",
]

METHOD1_BASE = 5e6
METHOD2_SPLIT = 44


@dataclass(frozen=True)
class Standard:
    base: float


@dataclass(frozen=True)
class PiScaled:
    base: float
    s: float


@dataclass(frozen=True)
class NtkScaled:
    base: float
    s: float


@dataclass(frozen=True)
class Method2:
    pass


@dataclass(frozen=True)
class Custom:
    source: str = "inline"


Recipe = Union[Standard, PiScaled, NtkScaled, Method2, Custom]


def recipe_label(recipe: Recipe) -> str:
    """Short text form, the same grammar accepted by :func:`parse_schedule`."""
    if isinstance(recipe, Standard):
        return f"std:{recipe.base:.17g}"
    if isinstance(recipe, PiScaled):
        return f"pi:{recipe.base:.17g}:{recipe.s:.17g}"
    if isinstance(recipe, NtkScaled):
        return f"ntk:{recipe.base:.17g}:{recipe.s:.17g}"
    if isinstance(recipe, Method2):
        return "method2"
    return f"custom:{recipe.source}"


@dataclass(frozen=True, eq=False)
class ThetaSchedule:
    """Immutable rotation-angle vector of length ``d // 2``."""

    d: int
    thetas: np.ndarray = field(repr=False)
    recipe: Recipe = Custom()

    def __post_init__(self):
        if not isinstance(self.d, (int, np.integer)) or self.d < 2 or self.d % 2:
            raise ValueError(f"head dimension must be an even integer >= 2, got {self.d!r}")
        th = np.array(self.thetas, dtype=np.float64).reshape(-1)
        if th.size != self.d // 2:
            raise ValueError(f"expected {self.d // 2} thetas for d={self.d}, got {th.size}")
        if not np.all(np.isfinite(th)) or np.any(th <= 0):
            raise ValueError("thetas must be finite and strictly positive")
        th.setflags(write=False)
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "thetas", th)

    @property
    def n_pairs(self) -> int:
        return self.d // 2

    @property
    def label(self) -> str:
        return recipe_label(self.recipe)

    def __eq__(self, other):
        if not isinstance(other, ThetaSchedule):
            return NotImplemented
        return self.d == other.d and np.array_equal(self.thetas, other.thetas)

    def __hash__(self):
        return hash((self.d, self.thetas.tobytes()))


def _check_dim(d, minimum=2):
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)):
        raise TypeError(f"d must be an integer, got {type(d).__name__}")
    if d < minimum or d % 2:
        raise ValueError(f"d must be even and >= {minimum}, got {d}")


def _check_base(base):
    if not (math.isfinite(base) and base > 0):
        raise ValueError(f"base must be a positive finite number, got {base!r}")


def _standard_thetas(base: float, d: int) -> np.ndarray:
    # np.power rather than exp(log): keeps exact cases exact, e.g. 1e4 ** -0.5 == 0.01
    exponents = -2.0 * np.arange(d // 2, dtype=np.float64) / d
    return np.power(float(base), exponents)


def make_standard(base: float, d: int) -> ThetaSchedule:
    """``theta_i = base ** (-2 i / d)`` for ``i = 0 .. d/2 - 1``."""
    _check_dim(d)
    _check_base(base)
    return ThetaSchedule(d, _standard_thetas(base, d), Standard(float(base)))


def make_pi_scaled(base: float, s: float, d: int) -> ThetaSchedule:
    """Position interpolation by factor ``s`` expressed as ``theta / s``."""
    _check_dim(d)
    _check_base(base)
    if not (math.isfinite(s) and s >= 1):
        raise ValueError(f"interpolation factor s must be >= 1, got {s!r}")
    return ThetaSchedule(d, _standard_thetas(base, d) / s, PiScaled(float(base), float(s)))


def ntk_base(base: float, s: float, d: int) -> float:
    """NTK-aware base: ``base * s ** (d / (d - 2))``."""
    _check_dim(d, minimum=4)
    _check_base(base)
    if not (math.isfinite(s) and s >= 1):
        raise ValueError(f"scale s must be >= 1, got {s!r}")
    return float(base) * float(s) ** (d / (d - 2))


def make_ntk_scaled(base: float, s: float, d: int) -> ThetaSchedule:
    new_base = ntk_base(base, s, d)
    return ThetaSchedule(d, _standard_thetas(new_base, d), NtkScaled(float(base), float(s)))


def make_method1(d: int = 128) -> ThetaSchedule:
    return make_standard(METHOD1_BASE, d)


def _method2_thetas() -> np.ndarray:
    i = np.arange(64, dtype=np.float64)
    low = np.power(1e4, -2.0 * i / 128) / 8
    high = np.power(1e4 * 8 ** (128 / 88), -2.0 * i / 128)
    return np.where(i >= METHOD2_SPLIT, low, high)


def make_method2(d: int = 128) -> ThetaSchedule:
    """Piecewise schedule: interpolated (``/8``) for ``i >= 44``, enlarged base below.

    Only defined for 128-dimensional heads.
    """
    if d != 128:
        raise ValueError(f"method2 is only defined for d=128, got d={d}")
    return ThetaSchedule(128, _method2_thetas(), Method2())


def make_custom(thetas, source: str = "inline") -> ThetaSchedule:
    th = np.asarray(thetas, dtype=np.float64).reshape(-1)
    if th.size == 0:
        raise ValueError("custom schedule needs at least one theta")
    return ThetaSchedule(2 * th.size, th, Custom(source))


def load_custom_csv(path) -> ThetaSchedule:
    """Read a one-column CSV with header ``theta``."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["theta"]:
            raise ValueError(f"{path}: expected a single 'theta' column, got {reader.fieldnames}")
        values = [float(row["theta"]) for row in reader if row["theta"].strip()]
    return make_custom(values, source=f"@{path}")


def from_recipe(recipe: Recipe, d: int) -> ThetaSchedule:
    """Rebuild a schedule from its recipe (not possible for custom ones)."""
    if isinstance(recipe, Standard):
        return make_standard(recipe.base, d)
    if isinstance(recipe, PiScaled):
        return make_pi_scaled(recipe.base, recipe.s, d)
    if isinstance(recipe, NtkScaled):
        return make_ntk_scaled(recipe.base, recipe.s, d)
    if isinstance(recipe, Method2):
        return make_method2(d)
    if isinstance(recipe, Custom) and recipe.source.startswith("@"):
        return load_custom_csv(recipe.source[1:])
    raise ValueError(f"cannot rebuild schedule from recipe {recipe!r}")


def parse_schedule(spec: str, d: int | None = None) -> ThetaSchedule:
    """Parse ``std:<base>``, ``pi:<base>:<s>``, ``ntk:<base>:<s>``, ``method1``,
    ``method2`` or ``custom:@<path>``.

    ``d`` defaults to 128.  For custom schedules it is taken from the file and
    a conflicting explicit ``d`` is an error.
    """
    kind, _, rest = spec.strip().partition(":")
    kind = kind.lower()
    if kind == "custom" and rest.startswith("@"):
        sched = load_custom_csv(rest[1:])
        if d is not None and sched.d != d:
            raise ValueError(f"{spec}: file gives d={sched.d} but d={d} was requested")
        return sched
    if d is None:
        d = 128
    args = rest.split(":") if rest else []
    try:
        if kind == "std" and len(args) == 1:
            return make_standard(float(args[0]), d)
        if kind == "pi" and len(args) == 2:
            return make_pi_scaled(float(args[0]), float(args[1]), d)
        if kind == "ntk" and len(args) == 2:
            return make_ntk_scaled(float(args[0]), float(args[1]), d)
        if kind == "method1" and not args:
            return make_method1(d)
        if kind == "method2" and not args:
            return make_method2(d)
    except TypeError as exc:
        raise ValueError(f"bad schedule {spec!r}: {exc}") from None
    raise ValueError(f"unrecognised schedule spec {spec!r}")
