"""RoPE long-term decay toolkit.

Discrimination curves ``B_m = sum_i cos(m theta_i)``, the effective context
length a schedule supports, the smallest RoPE base for a target length, Monte
Carlo checks of the similar-vs-random attention gap, and rotation-angle OOD
diagnostics.
"""
from .bounds import (
    BoundResult,
    LengthResult,
    UnattainableError,
    effective_length,
    lower_bound_base,
    table2,
)
from .decay import (
    CurveSamples,
    Metric,
    b_value,
    b_values,
    first_violation,
    sample_curve,
    upper_bound_factor,
    violation_count,
    weighted_b_value,
)
from .mc import McConfig, McReport, argmax_win_rate, estimate_gap, estimate_gap_hetero
from .ood import OodReport, ood_report
from .rope import attention_score, rotate
from .schedule import (
    ThetaSchedule,
    load_custom_csv,
    make_custom,
    make_method1,
    make_method2,
    make_ntk_scaled,
    make_pi_scaled,
    make_standard,
    ntk_base,
    parse_schedule,
)

__version__ = "0.1.0"
