import pytest
from hypothesis import given
from hypothesis import strategies as st

from memcrit.windows import WINDOW_KINDS, WindowSpec, eval_window

unit = st.floats(0.0, 1.0)


def test_benderli_values():
    w = WindowSpec("benderli")
    assert w(0.5) == 0.25
    assert w(0.0) == 0.0 and w(1.0) == 0.0


@pytest.mark.parametrize("p", [1, 2, 5])
def test_joglekar_peak_and_edges(p):
    w = WindowSpec("joglekar", p)
    assert w(0.5) == 1.0
    assert w(0.0) == 0.0 and w(1.0) == 0.0


def test_joglekar_matches_direct_formula():
    for p in (1, 3):
        w = WindowSpec("joglekar", p)
        for x in (0.1, 0.37, 0.9):
            assert w(x) == pytest.approx(1 - (2 * x - 1) ** (2 * p), rel=1e-12)


def test_biolek_depends_on_current_sign():
    w = WindowSpec("biolek")
    # positive current moves x up: blocked at 1, open at 0
    assert w(1.0, 1) == 0.0 and w(0.0, 1) == 1.0
    assert w(0.0, -1) == 0.0 and w(1.0, -1) == 1.0
    x = 0.3
    assert w(x, 1) == pytest.approx(1 - x ** 2)
    assert w(x, -1) == pytest.approx(1 - (x - 1) ** 2)


def test_shin_is_a_step():
    w = WindowSpec("shin")
    assert w(0.999, 1) == 1.0
    assert w(1.0, 1) == 0.0
    assert w(0.0, -1) == 0.0
    assert w(0.5, -1) == 1.0
    literal = WindowSpec("shin", literal=True)
    assert literal(0.5, -1) == 0.0


def test_outside_unit_interval_raises():
    with pytest.raises(ValueError):
        eval_window(WindowSpec("benderli"), 1.0 + 1e-12)
    with pytest.raises(ValueError):
        eval_window(WindowSpec("joglekar"), -1e-300)


@pytest.mark.parametrize("bad", [dict(kind="hann"), dict(kind="joglekar", p=0),
                                 dict(kind="biolek", p=1.5)])
def test_bad_specs(bad):
    with pytest.raises(ValueError):
        WindowSpec(**bad)


@given(st.sampled_from(WINDOW_KINDS), st.integers(1, 6), unit, st.sampled_from([-1, 1]))
def test_windows_are_bounded(kind, p, x, sgn):
    f = WindowSpec(kind, p)(x, sgn)
    assert 0.0 <= f <= 1.0 + 1e-12


@given(st.sampled_from(["benderli", "joglekar"]), st.integers(1, 6), unit)
def test_symmetric_windows_are_mirror_symmetric(kind, p, x):
    w = WindowSpec(kind, p)
    assert w(x) == pytest.approx(w(1.0 - x), abs=1e-12)


@given(st.integers(1, 6), unit)
def test_biolek_mirror_relation(p, x):
    w = WindowSpec("biolek", p)
    assert w(x, 1) == pytest.approx(w(1.0 - x, -1), abs=1e-12)


@given(st.sampled_from(WINDOW_KINDS), st.integers(1, 8))
def test_window_vanishes_toward_motion(kind, p):
    w = WindowSpec(kind, p)
    assert w(1.0, 1) == 0.0
    assert w(0.0, -1) == 0.0


def test_high_order_biolek_approaches_shin():
    import numpy as np
    b, s = WindowSpec("biolek", 50), WindowSpec("shin")
    for sgn in (1, -1):
        xs = np.linspace(0.0, 1.0, 2001)
        # stay clear of the transition region next to the blocking bound
        xs = xs[(xs > 0.0) & (xs < 1.0)]
        xs = xs[(xs < 0.9) if sgn > 0 else (xs > 0.1)]
        dev = max(abs(b(x, sgn) - s(x, sgn)) for x in xs)
        assert dev < 1e-4
