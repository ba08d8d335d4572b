"""End-to-end smoke tests for the Python module: exact strings in, exact
fractions out, and the same deterministic behavior the C++ suites pin down."""

from fractions import Fraction

import pytest

import wkserver as wks


def frac(s: str) -> Fraction:
    return Fraction(s)


def test_constants_and_harmonic():
    got = wks.constants(2)
    assert got["d"] == ["1", "16"]
    assert got["c"] == ["1", "1315877/120120"]
    assert frac(got["c"][1]) == 1 + 3 * sum(Fraction(1, i) for i in range(1, 16))
    assert wks.harmonic(3) == "11/6"

    desk = wks.constants(2, d=[1, 3])
    assert desk["d"] == ["1", "3"]
    assert frac(desk["c"][1]) == Fraction(11, 2)


def test_round_weights_sandwich():
    rounded = wks.round_weights(["1", "3", "7"])
    assert rounded == ["1", "3", "9"]
    values = [frac(r) for r in rounded]
    assert values[1] % values[0] == 0 and values[2] % values[1] == 0
    for i, (w_in, w_out) in enumerate(zip([1, 3, 7], values)):
        assert w_in <= w_out <= 2**i * w_in

    with pytest.raises(wks.InvalidInput):
        wks.round_weights(["2", "1"])


def test_parse_phase_statuses():
    leaf = wks.parse_phase(1, [], [0, 0], points=4, weights=["1", "2"], d=[1, 3])
    assert leaf["status"] == "whole-string-parses"
    assert leaf["consumed"] == 2
    assert leaf["tree"].startswith("(phase 1")

    deep = wks.parse_phase(2, [], [0, 0, 1, 1, 2, 2, 3, 1, 0],
                           points=20, weights=["1", "2"], d=[1, 3])
    assert deep["status"] == "proper-prefix"
    assert deep["consumed"] == 8

    with pytest.raises(wks.MetricTooSmall):
        wks.parse_phase(2, [], [0], points=4, weights=["1", "2"])  # default d_2 = 16


def test_generated_stream_round_trip():
    gen = wks.gen_phase_completing(points=12, weights=["1", "2"], phases=2, seed=5, d=[1, 3])
    bounds = gen["boundaries"]
    assert len(bounds) == 2 and bounds[1] == len(gen["requests"])

    run = wks.run_phase(2, [], [0, 1], gen["requests"],
                        points=12, weights=["1", "2"], seed=9, d=[1, 3])
    assert run["terminated"]
    assert run["consumed"] == bounds[0]

    serve = wks.serve_online([0, 1], gen["requests"],
                             points=12, weights=["1", "2"], seed=9, d=[1, 3])
    assert serve["completed_phases"] == 1 and serve["trailing_partial"]
    again = wks.serve_online([0, 1], gen["requests"],
                             points=12, weights=["1", "2"], seed=9, d=[1, 3])
    assert again == serve  # same seed, same run

    opt = wks.opt_cost(gen["requests"], points=12, weights=["1", "2"])
    assert frac(serve["cost"]) >= frac(opt["cost"])

    phase = gen["requests"][:bounds[0]]
    lb = wks.verify_phase_lower_bound(phase, points=12, weights=["1", "2"], d=[1, 3])
    assert lb["holds"]
    assert frac(lb["bound"]) == Fraction(1, 2)
    assert frac(lb["opt"]) >= Fraction(1, 2)


def test_opt_cost_exact():
    shuttle = wks.opt_cost([0, 1, 0], points=5, weights=["1"], c0=[0])
    assert shuttle["cost"] == "2"
    assert len(shuttle["witness"]) == 4 and shuttle["witness"][0] == [0]

    parked = wks.opt_cost([0, 1, 0, 1], points=5, weights=["1", "2"])
    assert parked["cost"] == "0"

    with pytest.raises(wks.BudgetExceeded):
        wks.opt_cost([0, 1, 2, 3], points=20, weights=["1", "2"], budget=3)
