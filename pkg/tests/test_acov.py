import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from flrcov.acov import autocov_surface, center
from flrcov.errors import InsufficientSampleError, LagOutOfRangeError

import oracles


def test_center_examples():
    x = np.tile([1.0, 2.0, 3.0], (4, 1))
    assert np.all(center(x) == 0)
    v = np.array([0.3, -1.2, 4.0])
    assert_allclose(center(np.vstack([v, -v])), np.vstack([v, -v]))
    assert_allclose(center([[1.0], [2.0], [3.0]]).ravel(), [-1, 0, 1])


def test_center_needs_two_curves():
    with pytest.raises(InsufficientSampleError):
        center(np.ones((1, 5)))


def test_column_means_zero(rng):
    c = center(rng.normal(size=(300, 8)) + 5)
    assert np.all(np.abs(c.sum(axis=0)) <= 1e-10 * 300)


def test_hand_examples():
    c = center([[1.0], [-1.0]])
    assert autocov_surface(c, 0)[0, 0] == pytest.approx(1.0)
    assert autocov_surface(c, 1)[0, 0] == pytest.approx(-0.5)


def test_lag_out_of_range():
    c = center(np.arange(8.0).reshape(4, 2))
    with pytest.raises(LagOutOfRangeError):
        autocov_surface(c, 4)
    with pytest.raises(LagOutOfRangeError):
        autocov_surface(c, -4)


def test_brute_force_oracle(rng):
    for _ in range(30):
        T = int(rng.integers(2, 9))
        n = int(rng.integers(1, 6))
        x = rng.normal(size=(T, n))
        c = center(x)
        for lag in range(-(T - 1), T):
            assert_allclose(autocov_surface(c, lag), oracles.autocov(x.tolist(), lag),
                            atol=1e-12, rtol=0)


samples = st.tuples(st.integers(2, 12), st.integers(1, 6)).flatmap(
    lambda tn: st.lists(st.floats(-100, 100, allow_nan=False),
                        min_size=tn[0] * tn[1], max_size=tn[0] * tn[1])
    .map(lambda v: np.array(v).reshape(tn))
)


@settings(max_examples=80, deadline=None)
@given(samples, st.data())
def test_negative_lag_is_transpose(x, data):
    c = center(x)
    lag = data.draw(st.integers(0, x.shape[0] - 1))
    assert np.array_equal(autocov_surface(c, -lag), autocov_surface(c, lag).T)


@settings(max_examples=50, deadline=None)
@given(samples, st.sampled_from([-3.0, 0.5, 2.0]))
def test_scale_equivariance(x, scale):
    c = center(x)
    cs = center(scale * x)
    for lag in range(x.shape[0]):
        assert_allclose(autocov_surface(cs, lag), scale ** 2 * autocov_surface(c, lag),
                        rtol=1e-9, atol=1e-9)


def test_lag0_psd(rng):
    for _ in range(20):
        c = center(rng.normal(size=(int(rng.integers(2, 40)), 10)))
        g = autocov_surface(c, 0)
        assert_allclose(g, g.T, atol=1e-14)
        assert np.linalg.eigvalsh(g).min() >= -1e-10 * np.linalg.norm(g)
