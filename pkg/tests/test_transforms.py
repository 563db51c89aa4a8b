import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from scipy.stats import kstest

from qgenbench.datatypes import BitstringSet, PointCloud
from qgenbench.transforms import (TransformError, cell_centers, discretize, fit_forward,
                                  grid_indices, inverse, pmf_from_bitstring_set)

clouds = arrays(np.float64, st.tuples(st.integers(2, 60), st.integers(1, 3)),
                elements=st.floats(-1e3, 1e3, allow_nan=False))


def test_uniform_discretization():
    u = PointCloud(np.random.default_rng(0).random((1_000_000, 1)))
    probs = discretize(u, 3).probs
    assert probs.shape == (8,)
    np.testing.assert_allclose(probs, 0.125, atol=0.002)


def test_grid_concatenates_big_endian():
    # dimension 0 occupies the high bits
    u = PointCloud(np.array([[0.9, 0.1], [0.1, 0.9], [1.0, 0.0]]))
    np.testing.assert_array_equal(grid_indices(u, 4), [0b1100, 0b0011, 0b1100])


def test_cell_centers_inverse_of_grid():
    idx = np.arange(64)
    centers = cell_centers(idx, 6, 2)
    np.testing.assert_array_equal(grid_indices(centers, 6), idx)


@settings(max_examples=60, deadline=None)
@given(clouds)
def test_minmax_round_trip(x):
    if np.any(np.ptp(x, axis=0) == 0):
        return
    tf, u = fit_forward("minmax", PointCloud(x))
    assert u.points.min() >= 0 and u.points.max() <= 1
    back = inverse(tf, u).points
    assert np.all(np.abs(back - x) <= 1e-9 * (1 + np.abs(x)))


@settings(max_examples=60, deadline=None)
@given(clouds)
def test_pit_round_trip_bound(x):
    if np.any(np.ptp(x, axis=0) == 0):
        return
    tf, u = fit_forward("pit", PointCloud(x))
    assert u.points.min() > 0 and u.points.max() < 1
    err = np.abs(inverse(tf, u).points - x).max(axis=0)
    bound = np.ptp(x, axis=0) / x.shape[0]
    assert np.all(err <= bound + 1e-12)


def test_pit_marginals_uniform():
    rng = np.random.default_rng(3)
    x = np.column_stack([rng.exponential(size=100_000), rng.standard_cauchy(100_000)])
    _, u = fit_forward("pit", PointCloud(x))
    for d in range(2):
        assert kstest(u.points[:, d], "uniform").statistic < 0.01


def test_pit_preserves_ranks():
    x = np.array([[3.0, -1.0], [1.0, 5.0], [2.0, 0.0]])
    _, u = fit_forward("pit", PointCloud(x))
    np.testing.assert_array_equal(np.argsort(u.points, axis=0), np.argsort(x, axis=0))


@pytest.mark.parametrize("kind", ["minmax", "pit"])
def test_degenerate_dimension(kind):
    with pytest.raises(TransformError, match="dimension 1"):
        fit_forward(kind, PointCloud(np.array([[0.0, 1.0], [1.0, 1.0], [2.0, 1.0]])))


def test_inverse_domain_errors():
    tf, _ = fit_forward("minmax", PointCloud(np.array([[0.0], [1.0]])))
    with pytest.raises(TransformError):
        inverse(tf, PointCloud(np.array([[1.5]])))
    with pytest.raises(TransformError):
        inverse(tf, PointCloud(np.array([[0.5, 0.5]])))


def test_unknown_transform_and_bad_split():
    with pytest.raises(TransformError):
        fit_forward("log", PointCloud(np.array([[0.0], [1.0]])))
    with pytest.raises(TransformError):
        discretize(PointCloud(np.random.default_rng(0).random((10, 2))), 5)


def test_pmf_from_bitstrings():
    pmf = pmf_from_bitstring_set(BitstringSet(2, frozenset({"01", "10"})), 2)
    np.testing.assert_array_equal(pmf.probs, [0, 0.5, 0.5, 0])
    with pytest.raises(TransformError):
        pmf_from_bitstring_set(BitstringSet(2, frozenset()), 2)
