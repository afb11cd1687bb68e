import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import H4, M2
from refocus.compiler import RetainShift, SignMatrix, compile, conventional_nested
from refocus.errors import InvalidInputError
from refocus.graphmodel import CouplingGraph
from refocus.schedule import (
    Pulse,
    PulseSchedule,
    box_columns,
    from_json,
    pulse_count,
    render_ascii,
    render_svg,
    schedule_from_sign_matrix,
    to_json,
)


@st.composite
def sign_matrices(draw, max_rows=6, max_cols=16):
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    bits = draw(st.lists(st.sampled_from([1, -1]), min_size=rows * cols, max_size=rows * cols))
    a = np.array(bits, dtype=int).reshape(rows, cols)
    a[:, 0] = 1
    return SignMatrix(a)


def boundaries(s: PulseSchedule, spin: int, parity=None):
    return [p.boundary for p in s.pulses[spin] if parity is None or p.parity == parity]


def test_m2_with_parity():
    s = schedule_from_sign_matrix(SignMatrix(M2), 1.0)
    assert s.pulses[0] == ()
    assert [s.time(p.boundary) for p in s.pulses[1]] == [0.5, 1.0]
    assert [p.parity for p in s.pulses[1]] == [False, True]


def test_h4_layout():
    s = schedule_from_sign_matrix(SignMatrix(H4), 1.0, omit_final=True)
    assert [boundaries(s, i) for i in range(4)] == [[], [1, 2, 3], [2], [1, 3]]
    assert [s.time(b) for b in boundaries(s, 1)] == [0.25, 0.5, 0.75]


def test_all_ones_row():
    s = schedule_from_sign_matrix(SignMatrix([[1, 1, 1]]))
    assert s.pulses == ((),)
    assert pulse_count(s) == 0


def test_pulse_counts():
    s = schedule_from_sign_matrix(conventional_nested(8))
    assert pulse_count(s, include_final=False) == 127
    assert pulse_count(s) == 128  # only spin 1 (one internal pulse) needs a parity pulse
    s = schedule_from_sign_matrix(compile(CouplingGraph.complete(8), RetainShift(0)))
    assert pulse_count(s, include_final=False) == 28


def test_schedule_validation():
    with pytest.raises(InvalidInputError):
        PulseSchedule(0.0, 2, ("a",), ((),))
    with pytest.raises(InvalidInputError):
        PulseSchedule(1.0, 2, ("a",), ((Pulse(3),),))
    with pytest.raises(InvalidInputError):
        PulseSchedule(1.0, 2, ("a",), ((Pulse(1), Pulse(1)),))
    with pytest.raises(InvalidInputError):
        PulseSchedule(1.0, 2, ("a",), ((Pulse(1, parity=True),),))


@settings(max_examples=300, deadline=None)
@given(sign_matrices(), st.booleans(), st.floats(1e-6, 1e3))
def test_round_trip_and_parity(m, omit, t):
    s = schedule_from_sign_matrix(m, t, omit_final=omit)
    assert s.to_sign_matrix() == m
    if not omit:
        assert all(len(p) % 2 == 0 for p in s.pulses)
        assert s.final_flips() == []
    for plist in s.pulses:
        for p in plist:
            assert 0 < s.time(p.boundary) <= t * (1 + 1e-15)
    assert from_json(to_json(s)) == s


def test_json_m2():
    doc = json.loads(to_json(schedule_from_sign_matrix(SignMatrix(M2), 1.0)))
    assert list(doc) == ["total_time", "intervals", "spins"]
    assert doc["intervals"] == 2
    assert list(doc["spins"][1]["pulses"][0]) == ["boundary", "time", "parity"]
    assert [p["time"] for p in doc["spins"][1]["pulses"]] == [0.5, 1.0]
    assert [p["parity"] for p in doc["spins"][1]["pulses"]] == [False, True]


def test_json_h4():
    doc = json.loads(to_json(schedule_from_sign_matrix(SignMatrix(H4), 1.0, omit_final=True)))
    assert doc["intervals"] == 4
    assert len(doc["spins"][1]["pulses"]) == 3


def test_json_times_twelve_digits():
    s = schedule_from_sign_matrix(SignMatrix([[1, -1, -1]]), 1.0)
    doc = json.loads(to_json(s))
    assert doc["spins"][0]["pulses"][0]["time"] == 0.333333333333
    assert from_json(to_json(s)) == s


def test_from_json_rejects():
    for text in ["[]", "{bad", '{"total_time": 1, "intervals": 2.5, "spins": []}',
                 '{"total_time": 1, "intervals": 2, "spins": [{"name": "a"}]}']:
        with pytest.raises(InvalidInputError):
            from_json(text)


def test_ascii_m2():
    s = schedule_from_sign_matrix(SignMatrix(M2), 1.0)
    lines = render_ascii(s, ["I0", "I1"]).splitlines()
    assert len(lines) == 2
    assert "[" not in lines[0]
    assert lines[1].count("[#]") == 1 and lines[1].endswith("[.]")


def test_ascii_h4_box_positions():
    s = schedule_from_sign_matrix(SignMatrix(H4), 1.0, omit_final=True)
    text = render_ascii(s, width=16)
    lines = text.splitlines()
    assert lines[0] == "0 -----------------"
    centres = [[i for i, ch in enumerate(line[2:]) if ch == "#"] for line in lines]
    assert centres == [[], [4, 8, 12], [8], [4, 12]]


def test_ascii_no_pulses():
    s = schedule_from_sign_matrix(SignMatrix([[1, 1], [1, 1]]))
    assert set(render_ascii(s).replace("0 ", "").replace("1 ", "").replace("\n", "")) == {"-"}


@settings(max_examples=100, deadline=None)
@given(sign_matrices(max_cols=10), st.integers(0, 80))
def test_box_positions_proportional(m, extra):
    s = schedule_from_sign_matrix(m)
    w = 4 * s.intervals + extra
    for plist, cols in zip(s.pulses, box_columns(s, w)):
        for p, c in zip(plist, cols):
            assert abs(c - p.boundary * w / s.intervals) <= 0.5
    lines = render_ascii(s, width=w).splitlines()
    pad = max(len(n) for n in s.names) + 1
    for line, cols in zip(lines, box_columns(s, w)):
        for c in cols:
            assert line[pad + c] in "#."


def test_svg():
    svg = render_svg(schedule_from_sign_matrix(SignMatrix(M2)))
    assert svg.startswith("<svg") and svg.count("<rect") == 2 and "stroke-dasharray" in svg
