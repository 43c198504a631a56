import random
from fractions import Fraction

import pytest

from conftest import R2, R3, R4
from lcscalc.errors import ChartMismatch, DegenerateStructure, DegreeMismatch
from lcscalc.exterior import Chart, CoordinateMap, contract_bivector, exterior_derivative, pullback, wedge
from lcscalc.parser import parse_form
from lcscalc.randomforms import random_form, random_mixed_form


def sign(k, l):
    return -1 if (k * l) % 2 else 1


def test_wedge_examples():
    dx, dy, dz = R3.d("x"), R3.d("y"), R3.d("z")
    assert wedge(dx, dy).terms == {(0, 1): R3.ring.one}
    assert wedge(dy, dx) == -wedge(dx, dy)
    assert wedge(wedge(dx, dy), wedge(dx, dz)).is_zero()


def test_wedge_chart_mismatch():
    with pytest.raises(ChartMismatch):
        wedge(R3.d("x"), R2.d("x"))


def test_derivative_examples():
    assert exterior_derivative(parse_form("x*dy", R3)) == parse_form("dx^dy", R3)
    assert exterior_derivative(parse_form("dz - y*dx", R3)) == parse_form("dx^dy", R3)
    t = Chart.of("t", "x", collar="t")
    assert exterior_derivative(parse_form("(1/t)*dt", t)).is_zero()


def test_pairing_examples():
    w2 = parse_form("dx^dy", R2)
    # literal inverse of the coefficient matrix W = [[0, 1], [-1, 0]]
    assert contract_bivector(w2, R2.d("x"), R2.d("y")) == -1
    assert contract_bivector(w2, R2.d("x"), R2.d("x")) == 0
    w4 = parse_form("dx1^dy1 + dx2^dy2", R4)
    e = parse_form("dx1^dy1", R4)
    assert contract_bivector(w4, e, e) == 1
    assert contract_bivector(w4, R4.function(3), R4.function(5)) == 15


def test_pairing_errors():
    with pytest.raises(DegenerateStructure):
        contract_bivector(parse_form("dx1^dy1", R4), R4.d("x1"), R4.d("y1"))
    with pytest.raises(DegreeMismatch):
        contract_bivector(parse_form("dx^dy", R2), R2.d("x"), parse_form("dx^dy", R2))


@pytest.mark.parametrize("chart", [R2, R4], ids=["R2", "R4"])
def test_pairing_symmetry(chart):
    rng = random.Random(17)
    omega = parse_form("dx^dy", R2) if chart is R2 else parse_form("dx1^dy1 + dx2^dy2", R4)
    for n in range(40):
        k = n % (chart.dimension + 1)
        a, b = random_form(chart, k, rng), random_form(chart, k, rng)
        assert contract_bivector(omega, a, b) == sign(k, 1) * contract_bivector(omega, b, a)


@pytest.mark.parametrize("chart", [R2, R4], ids=["R2", "R4"])
def test_d_squared(chart):
    rng = random.Random(1)
    for _ in range(250):
        a = random_mixed_form(chart, rng)
        assert exterior_derivative(exterior_derivative(a)).is_zero()


def test_graded_commutativity_and_leibniz():
    rng = random.Random(2)
    for n in range(200):
        k, l = n % 5, (n // 5) % 5
        a, b = random_form(R4, k, rng), random_form(R4, l, rng)
        assert wedge(a, b) == wedge(b, a).scale(sign(k, l))
        lhs = exterior_derivative(wedge(a, b))
        rhs = wedge(exterior_derivative(a), b) + wedge(a, exterior_derivative(b)).scale(sign(k, 1))
        assert lhs == rhs


def random_map(rng, source, target):
    ring = source.ring
    comps = []
    for _ in target.names:
        f = ring.const(rng.randint(-2, 2))
        for n in source.names:
            f = f + ring.symbol(n) * rng.randint(-2, 2)
        f = f + ring.symbol(rng.choice(source.names)) * ring.symbol(rng.choice(source.names)) * rng.randint(-1, 1)
        comps.append(f)
    return CoordinateMap(source, target, tuple(comps))


def test_pullback_naturality():
    rng = random.Random(4)
    for _ in range(60):
        f = random_map(rng, R3, R4)
        a, b = random_mixed_form(R4, rng), random_mixed_form(R4, rng)
        assert pullback(f, exterior_derivative(a)) == exterior_derivative(pullback(f, a))
        assert pullback(f, wedge(a, b)) == wedge(pullback(f, a), pullback(f, b))


def test_pullback_examples():
    rng = random.Random(0)
    a = random_mixed_form(R4, rng)
    assert pullback(CoordinateMap.identity(R4), a) == a
    t = Chart.of("t", "x", collar="t")
    double = CoordinateMap(t, t, (2 * t.scalar("t"), t.scalar("x")))
    theta = parse_form("(1/t)*dt", t)
    assert pullback(double, theta) == theta


def test_pullback_chart_mismatch():
    with pytest.raises(ChartMismatch):
        pullback(CoordinateMap.identity(R3), R4.d("x1"))


def test_form_printing():
    assert str(parse_form("dx^dy", R3)) == "dx^dy"
    assert str(parse_form("-y*dx", R3)) == "-y*dx"
    assert str(parse_form("(y/x)*dx^dz", R3)) == "(y/x)*dx^dz"
    assert str(R3.zero()) == "0"


def test_coefficient_access():
    f = parse_form("3*dx^dz + 1/2*dy", R3)
    assert f.coefficient("x", "z") == 3
    assert f.coefficient("z", "x") == -3
    assert f.coefficient(1) == Fraction(1, 2)
    assert f.degrees == {1, 2} and f.degree is None
