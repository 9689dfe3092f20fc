import numpy as np
import pytest

from padpkit.kernels import _pure, backend_name, local_maxima_1d, local_maxima_2d

try:
    from padpkit.kernels import _core
except ImportError:
    _core = None


def _cases(rng):
    yield rng.standard_normal((36, 101)), 0.0
    yield rng.standard_normal((3, 500)), 0.5
    # heavy exact ties
    yield rng.integers(0, 4, size=(20, 40)).astype(float), 0.5
    yield rng.integers(0, 3, size=(5, 5)).astype(float), -1.0
    yield np.zeros((4, 7)), 0.0


@pytest.mark.skipif(_core is None, reason="compiled kernels not built")
def test_backends_equivalent_2d():
    rng = np.random.default_rng(0)
    for values, thr in _cases(rng):
        r1, c1 = _core.local_maxima_2d(values, thr)
        r2, c2 = _pure.local_maxima_2d(values, thr)
        np.testing.assert_array_equal(r1, r2)
        np.testing.assert_array_equal(c1, c2)


@pytest.mark.skipif(_core is None, reason="compiled kernels not built")
def test_backends_equivalent_1d():
    rng = np.random.default_rng(1)
    for n in (1, 2, 50, 1001):
        v = rng.integers(0, 5, size=n).astype(float)
        np.testing.assert_array_equal(
            _core.local_maxima_1d(v, 1.0), _pure.local_maxima_1d(v, 1.0)
        )


def test_single_peak_2d():
    v = np.zeros((6, 9))
    v[2, 4] = 5.0
    rows, cols = local_maxima_2d(v, 1.0)
    assert list(rows) == [2] and list(cols) == [4]


def test_circular_rows():
    v = np.zeros((6, 5))
    v[0, 2] = 3.0
    v[5, 2] = 2.0  # wraps to be a neighbour of row 0
    rows, cols = local_maxima_2d(v, 0.5)
    assert list(zip(rows, cols)) == [(0, 2)]


def test_row_tie_keeps_lexicographically_smallest():
    v = np.zeros((6, 5))
    v[2, 2] = v[3, 2] = 4.0
    rows, cols = local_maxima_2d(v, 0.0)
    assert list(zip(rows, cols)) == [(2, 2)]
    # the wrap pair (last row, row 0) keeps row 0
    w = np.zeros((6, 5))
    w[0, 1] = w[5, 1] = 4.0
    rows, cols = local_maxima_2d(w, 0.0)
    assert list(zip(rows, cols)) == [(0, 1)]


def test_column_tie_keeps_left_cell():
    v = np.zeros((4, 6))
    v[1, 2] = v[1, 3] = 4.0
    rows, cols = local_maxima_2d(v, 0.0)
    assert list(zip(rows, cols)) == [(1, 2)]


def test_threshold_applies():
    v = np.zeros((4, 6))
    v[1, 2] = 1.0
    assert local_maxima_2d(v, 2.0)[0].size == 0
    assert local_maxima_2d(v, 0.5)[0].size == 1


def test_1d_endpoints_and_plateau():
    assert list(local_maxima_1d(np.array([5.0, 1.0, 0.0]), 0.5)) == [0]
    assert list(local_maxima_1d(np.array([0.0, 1.0, 5.0]), 0.5)) == [2]
    assert list(local_maxima_1d(np.array([0.0, 3.0, 3.0, 0.0]), 0.5)) == [1]
    assert list(local_maxima_1d(np.array([]), 0.0)) == []


def test_backend_name():
    assert backend_name() in ("compiled", "python")
