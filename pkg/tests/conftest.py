import random
from fractions import Fraction

import pytest

from lcscalc.exterior import Chart
from lcscalc.hodge import HLContext
from lcscalc.lcs import ContactForm, LcsStructure, build_collar
from lcscalc.parser import parse_form

R2 = Chart.of("x", "y")
R4 = Chart.of("x1", "y1", "x2", "y2")
R3 = Chart.of("x", "y", "z")


def standard(chart: Chart) -> LcsStructure:
    names = chart.names
    omega = chart.zero()
    for i in range(0, len(names), 2):
        omega = omega + (chart.d(names[i]) ^ chart.d(names[i + 1]))
    return LcsStructure(chart, omega, chart.zero())


def collar(alpha_text: str = "dz - y*dx") -> LcsStructure:
    return build_collar(ContactForm(R3, parse_form(alpha_text, R3)))


def random_scalar(ring, rng: random.Random, names, trig=(), nonzero=False):
    """Small random rational function over the given generators."""
    def poly():
        out = ring.zero
        atoms = [ring.symbol(n) for n in names] + [f(t) for t in trig for f in (ring.sin, ring.cos)]
        for _ in range(rng.randint(1, 3)):
            term = ring.const(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
            for _ in range(rng.randint(0, 2)):
                term = term * rng.choice(atoms)
            out = out + term
        return out

    num = poly()
    den = poly()
    while not den:
        den = poly()
    value = num / den if rng.random() < 0.5 else num
    if nonzero and not value:
        return ring.one
    return value


@pytest.fixture(scope="session")
def r2_ctx():
    return HLContext(standard(R2))


@pytest.fixture(scope="session")
def r4_ctx():
    return HLContext(standard(R4))


@pytest.fixture(scope="session")
def collar_structure():
    return collar()


@pytest.fixture(scope="session")
def collar_ctx(collar_structure):
    return HLContext(collar_structure)
