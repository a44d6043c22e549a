import xml.etree.ElementTree as ET

import numpy as np
import pytest

from memcrit.criteria import KineticsCurve
from memcrit.solver import Trace
from memcrit.svgplot import render_plot

NS = "{http://www.w3.org/2000/svg}"


def loop(n=200, devices=1):
    t = np.linspace(0.0, 4.0, n)
    v = np.interp(t, [0, 1, 3, 4], [0, 1, -1, 0])
    i = v * (1 + 0.5 * np.sin(t))
    vd = np.column_stack([v] * devices)
    x = np.column_stack([np.clip(t / 4, 0, 1)] * devices)
    return Trace(t, v, vd, i, x, {})


def curve():
    return KineticsCurve(points=((0.5, 1e-2), (1.0, 1e-4), (2.0, 1e-6)), threshold_rule="fixed_half",
                         threshold=0.5, v_p1=None, model="m", state_range=(0.0, 1.0))


@pytest.mark.parametrize("kind", ["iv_loop", "resistance_vs_t"])
def test_trace_plots_are_deterministic(tmp_path, kind):
    a = render_plot([("a", loop())], kind, tmp_path / "a.svg", "t", config_hash="c0ffee")
    b = render_plot([("a", loop())], kind, tmp_path / "b.svg", "t", config_hash="c0ffee")
    assert a.read_bytes() == b.read_bytes()
    root = ET.fromstring(a.read_text())
    assert root.tag == NS + "svg"
    assert "config_hash=c0ffee" in root.find(NS + "desc").text


def test_kinetics_plot_uses_log_axes_and_overlay(tmp_path):
    p = render_plot([("m", curve())], "kinetics_loglog", tmp_path / "k.svg",
                    measured=([0.7, 1.4], [1e-3, 1e-5]))
    text = p.read_text()
    # decade tick labels
    assert ">1e-4<" in text and ">1e-6<" in text
    assert "measured" in text
    ET.fromstring(text)


@pytest.mark.parametrize("data", [[], None, [("empty", loop(0))]])
def test_empty_input_writes_nothing(tmp_path, data):
    p = tmp_path / "x.svg"
    with pytest.raises(ValueError):
        render_plot(data, "iv_loop", p)
    assert not p.exists()


def test_wrong_objects_rejected(tmp_path):
    with pytest.raises(TypeError):
        render_plot([loop()], "kinetics_loglog", tmp_path / "x.svg")
    with pytest.raises(ValueError):
        render_plot([loop()], "polar", tmp_path / "x.svg")
