import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from memcrit.errors import BracketError, ConvergenceError
from memcrit.rootfind import solve_scalar


def test_cubic_with_derivative():
    root = solve_scalar(lambda x: (x ** 3 - 2.0, 3 * x * x), (0.0, 2.0), fprime=True)
    assert root == pytest.approx(2 ** (1 / 3), rel=1e-12)


def test_secant_and_bisection_agree():
    f = math.cos
    a = solve_scalar(f, (0.0, 3.0))
    b = solve_scalar(f, (0.0, 3.0), method="bisect")
    assert a == pytest.approx(math.pi / 2, rel=1e-12)
    assert b == pytest.approx(math.pi / 2, rel=1e-12)


def test_infinite_residuals_only_count_by_sign():
    def f(x):
        return math.inf if x > 1.5 else x - 1.0
    assert solve_scalar(f, (0.0, 2.0)) == pytest.approx(1.0, rel=1e-12)


def test_declared_signs_skip_endpoint_evaluation():
    calls = []

    def f(x):
        if x in (0.0, 4.0):
            raise AssertionError("endpoint evaluated")
        calls.append(x)
        return x - 1.0
    assert solve_scalar(f, (0.0, 4.0), signs=(-1, 1)) == pytest.approx(1.0)


def test_bad_bracket():
    with pytest.raises(BracketError):
        solve_scalar(lambda x: x * x + 1.0, (-1.0, 1.0))
    with pytest.raises(BracketError):
        solve_scalar(lambda x: x, (0.0, 1.0), signs=(1, 1))


def test_iteration_cap():
    with pytest.raises(ConvergenceError):
        solve_scalar(lambda x: x - 0.3, (0.0, 1.0), method="bisect", max_iters=3)


def test_unknown_method():
    with pytest.raises(ValueError):
        solve_scalar(lambda x: x, (-1.0, 1.0), method="brent")


@given(st.floats(-50.0, 50.0), st.floats(0.01, 20.0), st.floats(0.01, 20.0))
def test_monotone_cubic_roots(r, left, right):
    # x^3 + x is strictly increasing, so each shifted copy has one real root
    c = r ** 3 + r

    def f(x):
        return x ** 3 + x - c, 3 * x * x + 1
    root = solve_scalar(f, (r - left, r + right), fprime=True, tol=1e-13)
    assert root == pytest.approx(r, abs=1e-11 * max(1.0, abs(r)))


@given(st.floats(-5.0, 5.0), st.floats(0.1, 3.0))
def test_root_lies_in_bracket(r, w):
    root = solve_scalar(lambda x: math.tanh(x - r), (r - w, r + 2 * w))
    assert r - w <= root <= r + 2 * w
    assert abs(root - r) <= 1e-11 * max(1.0, abs(r))
