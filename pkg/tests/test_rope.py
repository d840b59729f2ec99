import numpy as np
import pytest

from ropebound.rope import attention_score, rotate
from ropebound.schedule import make_custom, make_standard


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def dense_rotation(m, sched):
    """Materialised block-diagonal R_m, used only as a test oracle."""
    R = np.zeros((sched.d, sched.d))
    for i, th in enumerate(sched.thetas):
        c, s = np.cos(m * th), np.sin(m * th)
        R[2 * i:2 * i + 2, 2 * i:2 * i + 2] = [[c, -s], [s, c]]
    return R


def test_zero_rotation_is_identity(rng):
    sched = make_standard(1e4, 16)
    x = rng.standard_normal(16)
    np.testing.assert_array_equal(rotate(x, 0, sched), x)


def test_planar_unit_rotation():
    sched = make_custom([1.0])
    np.testing.assert_allclose(rotate([1.0, 0.0], 2, sched), [np.cos(2), np.sin(2)], rtol=0, atol=1e-15)


def test_matches_dense_matrix(rng):
    sched = make_standard(500, 8)
    x = rng.standard_normal(8)
    for m in (1, 17, 4096):
        np.testing.assert_allclose(rotate(x, m, sched), dense_rotation(m, sched) @ x, atol=1e-12)


def test_isometry(rng):
    sched = make_standard(1e4, 128)
    x = rng.standard_normal((1000, 128))
    m = rng.integers(0, 1_000_000, 1000)
    rotated = rotate(x, m, sched)
    np.testing.assert_allclose(np.linalg.norm(rotated, axis=1), np.linalg.norm(x, axis=1), rtol=1e-12)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        rotate(np.ones(6), 1, make_standard(1e4, 8))
    with pytest.raises(ValueError):
        attention_score(np.ones(8), np.ones(6), 1, make_standard(1e4, 8))


def test_score_at_zero_is_dot(rng):
    sched = make_standard(1e4, 32)
    q, k = rng.standard_normal((2, 32))
    assert attention_score(q, k, 0, sched) == pytest.approx(q @ k, rel=1e-14)


def test_score_unit_vector_is_cos():
    sched = make_custom([1.0])
    for m in range(10):
        assert attention_score([1.0, 0.0], [1.0, 0.0], m, sched) == pytest.approx(np.cos(m), abs=1e-15)


@pytest.mark.parametrize("offset", [0, 7, 4096])
def test_relative_from_absolute(rng, offset):
    sched = make_standard(1e4, 64)
    q, k = rng.standard_normal((2, 64))
    for m in (0, 1, 33, 1000):
        rel = attention_score(q, k, m, sched)
        absolute = rotate(q, offset, sched) @ rotate(k, offset + m, sched)
        assert absolute == pytest.approx(rel, rel=1e-9, abs=1e-9)


def test_relative_from_absolute_random(rng):
    sched = make_standard(500, 128)
    for _ in range(200):
        q, k = rng.standard_normal((2, 128))
        i, m = rng.integers(0, 50_000, 2)
        rel = attention_score(q, k, m, sched)
        absolute = rotate(q, i, sched) @ rotate(k, i + m, sched)
        assert absolute == pytest.approx(rel, rel=1e-9, abs=1e-9)


def test_self_score_expansion(rng):
    # q^T R_m q: the sin cross-terms cancel pairwise, leaving sum of squared pair norms times cos
    sched = make_standard(1e4, 64)
    q = rng.standard_normal(64)
    for m in (0, 5, 1234):
        expected = np.sum((q[0::2] ** 2 + q[1::2] ** 2) * np.cos(m * sched.thetas))
        assert attention_score(q, q, m, sched) == pytest.approx(expected, rel=1e-9, abs=1e-12)


def test_batched_shapes(rng):
    sched = make_standard(1e4, 8)
    q = rng.standard_normal((5, 8))
    k = rng.standard_normal((5, 3, 8))
    out = attention_score(q[:, None, :], k, 4, sched)
    assert out.shape == (5, 3)
    assert out[2, 1] == pytest.approx(attention_score(q[2], k[2, 1], 4, sched))
