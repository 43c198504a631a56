import random

import pytest

from conftest import R3, R4, collar
from lcscalc.errors import DivisionByZero, ParseError
from lcscalc.exterior import Chart
from lcscalc.parser import format_structure, parse_chart, parse_form, parse_structure
from lcscalc.randomforms import random_mixed_form


def test_form_basics():
    a = parse_form("dz - y*dx", R3)
    assert a == R3.d("z") - R3.d("x").scale(R3.scalar("y"))
    assert parse_form("dy^dx", R3) == -(R3.d("x") ^ R3.d("y"))
    assert parse_form("(1/x)*dx^dy", R3) == (R3.d("x") ^ R3.d("y")).scale(1 / R3.scalar("x"))
    assert parse_form("dx^dy/2", R3) == (R3.d("x") ^ R3.d("y")) / 2
    assert parse_form("0", R3) == R3.zero()


def test_form_errors():
    with pytest.raises(ParseError) as err:
        parse_form("dx^^dy", R3)
    assert err.value.offset == 3
    with pytest.raises(ParseError):
        parse_form("dw", R3)  # not a coordinate
    with pytest.raises(ParseError):
        parse_form("dx/dy", R3)
    with pytest.raises(DivisionByZero):
        parse_form("dx/(y-y)", R3)


def test_chart_file():
    chart = parse_chart("# collar\ncoord t collar\ncoord th angular\ncoord x\nparam a\n")
    assert chart.names == ("t", "th", "x")
    assert chart.collar_index == 0
    assert chart.parameters == ("a",)
    assert parse_chart(str(chart)) == chart


def test_chart_errors():
    with pytest.raises(ParseError) as err:
        parse_chart("coord x\ncoord y polar\n")
    assert err.value.offset == 8
    with pytest.raises(ParseError):
        parse_chart("coord x\ncoord x\n")
    with pytest.raises(ParseError):
        parse_chart("")


def test_structure_offsets_are_file_relative():
    with pytest.raises(ParseError) as err:
        parse_structure("omega = dx1^dy1\ntheta = dx1 +\n", R4)
    assert err.value.offset == len("omega = dx1^dy1\ntheta = dx1 +")


def test_structure_round_trip():
    s = collar()
    text = format_structure(s.omega, s.theta)
    assert parse_structure(text, parse_chart(str(s.chart))) == (s.omega, s.theta)


def test_random_form_round_trip():
    rng = random.Random(3)
    chart = Chart.of("t", "x", "th", angular=("th",), collar="t")
    for _ in range(100):
        f = random_mixed_form(chart, rng)
        assert parse_form(str(f), chart) == f
