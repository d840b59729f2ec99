import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ropebound.decay import b_value
from ropebound.schedule import (
    Method2,
    NtkScaled,
    Standard,
    ThetaSchedule,
    from_recipe,
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

mpmath.mp.dps = 40


def mp_power(base, num, den):
    return float(mpmath.mpf(base) ** (mpmath.mpf(num) / den))


def test_standard_small_exact():
    s = make_standard(10000, 4)
    assert s.thetas.tolist() == [1.0, 0.01]
    assert s.recipe == Standard(10000.0)
    assert s.d == 4 and s.n_pairs == 2


@pytest.mark.parametrize("base", [2.0, 500.0, 1e4, 5e6, 1e12])
@pytest.mark.parametrize("d", [2, 8, 128])
def test_standard_theta0_is_one(base, d):
    assert make_standard(base, d).thetas[0] == 1.0


def test_standard_last_theta_against_mpmath():
    got = make_standard(500, 128).thetas[63]
    assert got == pytest.approx(0.002203948296545364327643034, rel=1e-14)
    assert got == pytest.approx(mp_power(500, -126, 128), rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(
    base=st.floats(1.5, 1e10),
    half=st.integers(1, 128),
)
def test_standard_matches_arbitrary_precision(base, half):
    d = 2 * half
    th = make_standard(base, d).thetas
    i = half - 1
    assert th[i] == pytest.approx(mp_power(base, -2 * i, d), rel=1e-14)
    assert np.all(np.diff(th) < 0) or half == 1


@pytest.mark.parametrize("d", [0, -2, 3, 127])
def test_standard_rejects_bad_dim(d):
    with pytest.raises(ValueError):
        make_standard(1e4, d)


@pytest.mark.parametrize("base", [0.0, -1.0, float("nan"), float("inf")])
def test_standard_rejects_bad_base(base):
    with pytest.raises(ValueError):
        make_standard(base, 8)


def test_schedule_is_immutable():
    s = make_standard(1e4, 8)
    with pytest.raises(ValueError):
        s.thetas[0] = 2.0


def test_pi_identity_and_division():
    assert make_pi_scaled(10000, 1, 128) == make_standard(10000, 128)
    assert make_pi_scaled(10000, 8, 4).thetas.tolist() == [0.125, 0.00125]


def test_pi_rejects_shrinking():
    with pytest.raises(ValueError):
        make_pi_scaled(1e4, 0.5, 8)


def test_pi_equals_position_scaling():
    # B on theta/s at m equals B on theta at m/s
    pi = make_pi_scaled(10000, 4, 64)
    std = make_standard(10000, 64)
    assert b_value(pi, 4096) == pytest.approx(b_value(std, 4096 / 4), rel=1e-12)


def test_ntk_base_values():
    assert ntk_base(10000, 1, 128) == 10000
    assert ntk_base(10000, 8, 128) == pytest.approx(82684.6226405622184362597, rel=1e-13)


@pytest.mark.parametrize("base,s,d", [(1e4, 8, 128), (1e4, 2, 64), (500, 16, 4), (1e6, 4.5, 256)])
def test_ntk_derivation_identity(base, s, d):
    t_origin = 4096
    lhs = s * t_origin * ntk_base(base, s, d) ** (-(d - 2) / d)
    rhs = t_origin * base ** (-(d - 2) / d)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_ntk_rejects_d2():
    with pytest.raises(ValueError):
        ntk_base(1e4, 2, 2)


def test_ntk_schedule_recipe():
    s = make_ntk_scaled(1e4, 8, 128)
    assert s.recipe == NtkScaled(1e4, 8.0)
    assert s == make_standard(ntk_base(1e4, 8, 128), 128)


def test_method1():
    assert make_method1(128) == make_standard(5_000_000, 128)
    assert make_method1(128).thetas[0] == 1.0
    assert make_method1(4).thetas[1] == pytest.approx(0.0004472135954999579392818347, rel=1e-14)


def test_method2_values_and_continuity():
    s = make_method2()
    assert s.recipe == Method2()
    assert s.thetas[0] == 1.0
    assert s.thetas[63] == pytest.approx(0.00001443477480861822724583104, rel=1e-14)
    upper = (1e4 * 8 ** (128 / 88)) ** (-88 / 128)
    lower = 1e4 ** (-88 / 128) / 8
    assert upper == pytest.approx(lower, rel=1e-12)
    assert s.thetas[44] == pytest.approx(upper, rel=1e-12)


def test_method2_only_128():
    with pytest.raises(ValueError):
        make_method2(64)


def test_custom():
    one = make_custom([1.0])
    assert one.d == 2
    assert b_value(make_custom([1.0, 0.01]), 77) == b_value(make_standard(10000, 4), 77)
    assert make_custom([0.5, 0.5, 0.5]).d == 6


@pytest.mark.parametrize("bad", [[], [0.0], [-1.0, 1.0], [float("nan")], [float("inf")]])
def test_custom_rejects(bad):
    with pytest.raises(ValueError):
        make_custom(bad)


def test_custom_csv_roundtrip(tmp_path):
    path = tmp_path / "sched.csv"
    path.write_text("theta\n1.0\n0.25\n")
    s = load_custom_csv(path)
    assert s.d == 4 and s.thetas.tolist() == [1.0, 0.25]
    assert from_recipe(s.recipe, 4) == s


def test_custom_csv_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("freq\n1.0\n")
    with pytest.raises(ValueError):
        load_custom_csv(path)


@pytest.mark.parametrize("maker", [
    lambda: make_standard(12345.6, 128),
    lambda: make_pi_scaled(1e4, 3, 64),
    lambda: make_ntk_scaled(1e4, 8, 128),
    lambda: make_method2(),
])
def test_recipe_reproducible(maker):
    s = maker()
    again = from_recipe(s.recipe, s.d)
    np.testing.assert_array_max_ulp(s.thetas, again.thetas, maxulp=1)


@pytest.mark.parametrize("spec,d,expected", [
    ("std:10000", 4, make_standard(10000, 4)),
    ("pi:10000:8", 4, make_pi_scaled(10000, 8, 4)),
    ("ntk:10000:8", 128, make_ntk_scaled(10000, 8, 128)),
    ("method1", 128, make_method1(128)),
    ("method2", None, make_method2()),
    ("std:500", None, make_standard(500, 128)),
])
def test_parse_schedule(spec, d, expected):
    assert parse_schedule(spec, d) == expected


@pytest.mark.parametrize("spec", ["", "std", "std:1:2", "pi:1e4", "nope:3", "method2:1"])
def test_parse_schedule_rejects(spec):
    with pytest.raises(ValueError):
        parse_schedule(spec, 8)


def test_parse_custom_dim_conflict(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("theta\n1.0\n")
    assert parse_schedule(f"custom:@{path}").d == 2
    with pytest.raises(ValueError):
        parse_schedule(f"custom:@{path}", 128)


def test_direct_construction_validates():
    with pytest.raises(ValueError):
        ThetaSchedule(4, [1.0])
    with pytest.raises(ValueError):
        ThetaSchedule(3, [1.0])
    assert math.isclose(ThetaSchedule(2, [2.0]).thetas[0], 2.0)
