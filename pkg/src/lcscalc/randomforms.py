"""Seeded random polynomials and forms for the property suites."""

from __future__ import annotations

import random
from itertools import combinations_with_replacement

from .exterior import Chart, DifferentialForm, basis_monomials
from .scalar import ANGULAR, ScalarExpr

COEFF_RANGE = (-3, 3)
MAX_DEGREE = 2


def random_polynomial(chart: Chart, rng: random.Random, max_degree: int = MAX_DEGREE,
                      density: float = 0.5) -> ScalarExpr:
    """Integer-coefficient polynomial of total degree <= max_degree in the
    non-angular coordinates, coefficients in [-3, 3]."""
    ring = chart.ring
    names = [c.name for c in chart.coordinates if c.kind != ANGULAR]
    total = ring.zero
    for deg in range(max_degree + 1):
        for combo in combinations_with_replacement(names, deg):
            if rng.random() > density:
                continue
            c = rng.randint(*COEFF_RANGE)
            if not c:
                continue
            term = ring.const(c)
            for n in combo:
                term = term * ring.symbol(n)
            total = total + term
    return total


def random_form(chart: Chart, degree: int, rng: random.Random, density: float = 0.6) -> DifferentialForm:
    terms = {}
    for idx in basis_monomials(chart.dimension, degree):
        if rng.random() < density:
            terms[idx] = random_polynomial(chart, rng)
    return DifferentialForm(chart, terms)


def random_mixed_form(chart: Chart, rng: random.Random) -> DifferentialForm:
    out = chart.zero()
    for k in range(chart.dimension + 1):
        if rng.random() < 0.5:
            out = out + random_form(chart, k, rng)
    return out
