"""Per-dimension rotation-angle coverage: trained range vs. extended range.

A dimension is *covered* when the trained relative-angle range
``[0, t_train * theta_i]`` spans a full period (``>= 2 pi``); every cosine
value has then been seen.  It is *OOD* when it is not covered and the
extended range reaches angles beyond the trained maximum.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

from .schedule import ThetaSchedule

__all__ = ["DimCoverage", "OodReport", "ood_report"]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DimCoverage:
    i: int
    trained_max_angle: float
    extended_max_angle: float
    full_period_covered: bool
    ood: bool


@dataclass(frozen=True)
class OodReport:
    per_dim: tuple[DimCoverage, ...]

    @property
    def any_ood(self) -> bool:
        return any(row.ood for row in self.per_dim)

    @property
    def ood_dims(self) -> list[int]:
        return [row.i for row in self.per_dim if row.ood]

    def to_csv(self, dest=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["dim", "trained_max_angle", "extended_max_angle", "full_period_covered", "ood"])
        for row in self.per_dim:
            writer.writerow([
                row.i,
                f"{row.trained_max_angle:.17g}",
                f"{row.extended_max_angle:.17g}",
                str(row.full_period_covered).lower(),
                str(row.ood).lower(),
            ])
        text = buf.getvalue()
        if isinstance(dest, (str, Path)):
            Path(dest).write_text(text)
        elif dest is not None:
            dest.write(text)
        return text


def ood_report(train_sched: ThetaSchedule, t_train: int, new_sched: ThetaSchedule, t_new: int) -> OodReport:
    if train_sched.d != new_sched.d:
        raise ValueError(f"schedules differ in d: {train_sched.d} vs {new_sched.d}")
    if t_train < 1 or t_new < 1:
        raise ValueError("lengths must be >= 1")
    rows = []
    for i, (th_old, th_new) in enumerate(zip(train_sched.thetas.tolist(), new_sched.thetas.tolist())):
        trained = t_train * th_old
        extended = t_new * th_new
        covered = trained >= TWO_PI
        rows.append(DimCoverage(i, trained, extended, covered, (not covered) and extended > trained))
    return OodReport(tuple(rows))
