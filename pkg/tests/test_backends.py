"""Compiled and pure-Python kernels must agree bit-for-bit in behavior."""

import numpy as np
import pytest

from hoskip import backends
from hoskip.backends import pykern

try:
    from hoskip.backends import _fastkern
except ImportError:
    _fastkern = None

needs_compiled = pytest.mark.skipif(_fastkern is None,
                                    reason="compiled backend not built")


def _random_deficit_case(rng, n, m):
    coeff = rng.uniform(0.0, 2.0, m)
    w_beta = rng.uniform(1e-6, 50.0, m)
    y = rng.uniform(0.0, 1e4, n)
    return coeff, w_beta, y


@needs_compiled
@pytest.mark.parametrize("n,m", [(1, 1), (7, 96), (64, 48), (200, 3)])
def test_deficit_sum_matches_python(n, m):
    rng = np.random.default_rng(42)
    coeff, w_beta, y = _random_deficit_case(rng, n, m)
    a = pykern.deficit_sum(coeff, w_beta, y)
    b = _fastkern.deficit_sum(coeff, w_beta, y)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-300)


def test_deficit_sum_closed_form():
    # Single term: coeff * y / (y + w^beta), summed over terms.
    coeff = np.array([2.0, 3.0])
    w_beta = np.array([1.0, 4.0])
    y = np.array([0.0, 1.0, 4.0])
    want = np.array([
        0.0,
        2.0 * 1.0 / 2.0 + 3.0 * 1.0 / 5.0,
        2.0 * 4.0 / 5.0 + 3.0 * 4.0 / 8.0,
    ])
    np.testing.assert_allclose(backends.deficit_sum(coeff, w_beta, y), want,
                               rtol=1e-14)


def _segment_case(rng, n_points, n_steps):
    pts = rng.uniform(-5.0, 5.0, (n_points, 2))
    x0, y0 = rng.uniform(-1.0, 1.0, 2)
    ang = rng.uniform(0.0, 2.0 * np.pi)
    return (np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1]),
            x0, y0, np.cos(ang), np.sin(ang), 0.01, n_steps)


@needs_compiled
@pytest.mark.parametrize("seed", range(8))
def test_segment_count_matches_python(seed):
    rng = np.random.default_rng(seed)
    args = _segment_case(rng, 60, 157)
    assert _fastkern.segment_change_count(*args) == \
        pykern.segment_change_count(*args)


def test_segment_count_no_points():
    empty = np.empty(0)
    assert backends.segment_change_count(
        empty, empty, 0.0, 0.0, 1.0, 0.0, 0.1, 10) == 0


def test_segment_count_two_cells():
    # Two stations on the x axis; walking across the bisector changes the
    # nearest station exactly once.
    px = np.array([-1.0, 1.0])
    py = np.array([0.0, 0.0])
    n = backends.segment_change_count(px, py, -0.5, 0.0, 1.0, 0.0, 0.1, 10)
    assert n == 1


def test_segment_count_stationary():
    px = np.array([-1.0, 1.0])
    py = np.array([0.0, 0.0])
    assert backends.segment_change_count(px, py, -0.5, 0.0, 1.0, 0.0,
                                         0.0, 5) == 0


@needs_compiled
def test_tie_breaking_first_index():
    # A point equidistant from stations 0 and 1: both backends must pick
    # the first index so their counts stay comparable.
    px = np.array([1.0, -1.0, 30.0])
    py = np.array([0.0, 0.0, 0.0])
    for args in ((px, py, 0.0, 0.0, 0.0, 1.0, 0.5, 4),
                 (px, py, 0.0, -1.0, 0.0, 1.0, 0.5, 8)):
        assert _fastkern.segment_change_count(*args) == \
            pykern.segment_change_count(*args)


def test_selected_backend_exports():
    assert backends.BACKEND_NAME in ("compiled", "python")
    assert callable(backends.deficit_sum)
    assert callable(backends.segment_change_count)


def test_env_selection_python(monkeypatch):
    import importlib

    monkeypatch.setenv("HOSKIP_BACKEND", "python")
    mod = importlib.reload(backends)
    try:
        assert mod.BACKEND_NAME == "python"
    finally:
        monkeypatch.delenv("HOSKIP_BACKEND")
        importlib.reload(backends)


def test_env_selection_invalid(monkeypatch):
    import importlib

    monkeypatch.setenv("HOSKIP_BACKEND", "fortran")
    with pytest.raises(ValueError):
        importlib.reload(backends)
    monkeypatch.delenv("HOSKIP_BACKEND")
    importlib.reload(backends)
