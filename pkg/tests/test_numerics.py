"""Root bracketing and golden-section search."""

from __future__ import annotations

import math

import pytest

from disclose import SolverError
from disclose.numerics import bisect_down, bisect_up, golden_max


def test_bisect_down_quadratic_root():
    root = bisect_down(lambda x: 1.0 - x * x, 0.0, 2.0)
    assert root == pytest.approx(1.0, abs=1e-11)


def test_bisect_down_accepts_precomputed_endpoints():
    calls = []

    def f(x):
        calls.append(x)
        return 0.5 - x

    root = bisect_down(f, 0.0, 1.0, f_lo=0.5, f_hi=-0.5)
    assert root == pytest.approx(0.5, abs=1e-11)
    assert all(0.0 < x < 1.0 for x in calls)  # endpoints never re-evaluated


def test_bisect_down_tol_f_early_exit():
    evals = []

    def f(x):
        evals.append(x)
        return math.cos(x)

    bisect_down(f, 1.0, 2.0, tol_f=1e-3)
    assert len(evals) < 20  # far fewer than the ~50 needed for tol_x


def test_bisect_down_requires_bracket():
    with pytest.raises(SolverError):
        bisect_down(lambda x: x + 1.0, 0.0, 1.0)  # positive at both ends


def test_bisect_up_mirror():
    root = bisect_up(lambda x: x * x - 2.0, 0.0, 2.0)
    assert root == pytest.approx(math.sqrt(2.0), abs=1e-11)


def test_golden_max_parabola():
    x, v = golden_max(lambda x: -(x - 0.3) ** 2, -1.0, 1.0, tol=1e-12)
    assert x == pytest.approx(0.3, abs=1e-6)
    assert v == pytest.approx(0.0, abs=1e-12)


def test_golden_max_boundary_maximum():
    x, v = golden_max(lambda x: x, 0.0, 1.0, tol=1e-12)
    assert x == pytest.approx(1.0, abs=1e-6)
    assert v == pytest.approx(1.0, abs=1e-6)


def test_golden_max_rejects_empty_interval():
    with pytest.raises(SolverError):
        golden_max(lambda x: x, 1.0, 0.0)
