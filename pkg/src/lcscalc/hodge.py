"""Symplectic Hodge star, Lefschetz operators and twisted differentials.

The star is fixed by  a ^ *b = <a, b>_k  omega^n / n!  for all k-forms a.
It is computed once per basis monomial by solving that linear system over
the coefficient field and cached on the context.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DegenerateStructure, InvalidLeeForm
from .exterior import (
    DifferentialForm,
    basis_monomials,
    exterior_derivative,
    merge_sign,
    monomial_pairing,
    poisson_matrix,
    solve_linear,
    wedge,
)
from .lcs import LcsStructure
from .randomforms import random_form
from .scalar import ScalarExpr

__all__ = [
    "HLContext",
    "WeightedForm",
    "SpectrumEntry",
    "RelationReport",
    "star",
    "lefschetz_L",
    "lefschetz_Lstar",
    "commutator_spectrum",
    "symplectic_delta",
    "delta_via_commutator",
    "lichnerowicz_d",
    "scan_relations",
    "pairing",
]


class HLContext:
    """Star data for one structure; immutable once built."""

    def __init__(self, structure: LcsStructure):
        chart = structure.chart
        if chart.dimension % 2:
            raise DegenerateStructure("odd-dimensional chart")
        self.structure = structure
        self.chart = chart
        self.half_dim = chart.dimension // 2
        ring = chart.ring
        self.volume = structure.volume
        self.volume_coefficient = self.volume.coefficient(*range(chart.dimension))
        if not self.volume_coefficient:
            raise DegenerateStructure("omega^n/n! vanishes identically")
        self.pi = poisson_matrix(structure.omega)
        dim = chart.dimension
        self._pairings: dict[tuple[tuple[int, ...], tuple[int, ...]], ScalarExpr] = {}
        self.star_cache: dict[tuple[int, ...], DifferentialForm] = {}
        top = tuple(range(dim))
        for k in range(dim + 1):
            rows = basis_monomials(dim, k)
            cols = basis_monomials(dim, dim - k)
            # coefficient of the top monomial in e_I ^ e_M
            a = [[ring.const(merge_sign(i, m)[0]) if merge_sign(i, m) and merge_sign(i, m)[1] == top
                  else ring.zero for m in cols] for i in rows]
            rhs = [[self.pairing_monomials(i, j) * self.volume_coefficient for j in rows] for i in rows]
            sol = solve_linear(a, rhs, ring)
            for jn, j in enumerate(rows):
                self.star_cache[j] = DifferentialForm(chart, {m: sol[mn][jn] for mn, m in enumerate(cols)})

    def pairing_monomials(self, i: tuple[int, ...], j: tuple[int, ...]) -> ScalarExpr:
        key = (i, j)
        if key not in self._pairings:
            self._pairings[key] = monomial_pairing(self.pi, i, j, self.chart.ring)
        return self._pairings[key]


def pairing(ctx: HLContext, a: DifferentialForm, b: DifferentialForm) -> ScalarExpr:
    """<a, b>_k for homogeneous a, b of equal degree."""
    total = ctx.chart.ring.zero
    for i, ca in a.terms.items():
        for j, cb in b.terms.items():
            if len(i) == len(j):
                p = ctx.pairing_monomials(i, j)
                if p:
                    total = total + ca * cb * p
    return total


def star(ctx: HLContext, a: DifferentialForm) -> DifferentialForm:
    out = ctx.chart.zero()
    for idx, coeff in a.terms.items():
        out = out + ctx.star_cache[idx].scale(coeff)
    return out


def lefschetz_L(ctx: HLContext, a: DifferentialForm) -> DifferentialForm:
    return wedge(ctx.structure.omega, a)


def lefschetz_Lstar(ctx: HLContext, a: DifferentialForm) -> DifferentialForm:
    return -star(ctx, lefschetz_L(ctx, star(ctx, a)))


@dataclass(frozen=True)
class SpectrumEntry:
    degree: int
    scalar: ScalarExpr | None  # None when [L, L*] is not scalar on this degree
    witness: str = ""


def commutator_spectrum(ctx: HLContext) -> list[SpectrumEntry]:
    """[L, L*] on every basis monomial, checked to be c_k * identity per degree."""
    chart = ctx.chart
    out = []
    for k in range(chart.dimension + 1):
        scalar = None
        witness = ""
        for idx in basis_monomials(chart.dimension, k):
            e = DifferentialForm(chart, {idx: chart.ring.one})
            image = lefschetz_L(ctx, lefschetz_Lstar(ctx, e)) - lefschetz_Lstar(ctx, lefschetz_L(ctx, e))
            c = image.terms.get(idx, chart.ring.zero)
            if image != e.scale(c) or (scalar is not None and c != scalar):
                witness = f"[L,L*]({e}) = {image}"
                scalar = None
                break
            scalar = c
        out.append(SpectrumEntry(k, scalar, witness))
    return out


def symplectic_delta(ctx: HLContext, a: DifferentialForm) -> DifferentialForm:
    """(-1)^k * d * on each degree-k part."""
    out = ctx.chart.zero()
    for k, part in a.homogeneous_parts():
        piece = star(ctx, exterior_derivative(star(ctx, part)))
        out = out + (piece if k % 2 == 0 else -piece)
    return out


def delta_via_commutator(ctx: HLContext, a: DifferentialForm) -> DifferentialForm:
    """d L* - L* d, the second evaluator for the coboundary."""
    return exterior_derivative(lefschetz_Lstar(ctx, a)) - lefschetz_Lstar(ctx, exterior_derivative(a))


@dataclass(frozen=True)
class WeightedForm:
    form: DifferentialForm
    weight: int


def lichnerowicz_d(s: LcsStructure, wf: WeightedForm) -> WeightedForm:
    """d - k theta ^ at fixed weight k."""
    if exterior_derivative(s.theta):
        raise InvalidLeeForm(f"Lee form {s.theta} is not closed")
    out = exterior_derivative(wf.form)
    if wf.weight:
        out = out - wedge(s.theta, wf.form).scale(wf.weight)
    return WeightedForm(out, wf.weight)


OFFSETS = tuple(range(-2, 3))


@dataclass(frozen=True)
class RelationReport:
    """Survivors of  delta d_{w1} + d_{w2} delta = 0  with w_i = k + o_i.

    ``offsets`` lists (k, o1, o2) for every form degree k and offset pair that
    vanished on all trial forms of that degree; ``uniform_offsets`` keeps the
    pairs that survived in every degree.
    """

    offsets: tuple[tuple[int, int, int], ...]
    uniform_offsets: tuple[tuple[int, int], ...]
    trials: int
    seed: int
    weight_independent: bool

    @property
    def nonempty(self) -> bool:
        return bool(self.offsets)

    def by_degree(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list[tuple[int, int]]] = {}
        for k, o1, o2 in self.offsets:
            out.setdefault(k, []).append((o1, o2))
        return out


def scan_relations(ctx: HLContext, trials: int, seed: int) -> RelationReport:
    """Randomized scan of the anticommutation identity over weight offsets.

    Trial forms are homogeneous, cycling through degrees 0..2n.
    """
    s = ctx.structure
    if exterior_derivative(s.theta):
        raise InvalidLeeForm(f"Lee form {s.theta} is not closed")
    rng = random.Random(seed)
    dim = ctx.chart.dimension
    pairs = [(o1, o2) for o1 in OFFSETS for o2 in OFFSETS]
    surviving: dict[int, set[tuple[int, int]]] = {}
    for n in range(trials):
        k = n % (dim + 1)
        alive = surviving.setdefault(k, set(pairs))
        a = random_form(ctx.chart, k, rng)
        # the identity is affine in (w1, w2): precompute the four pieces
        delta_da = symplectic_delta(ctx, exterior_derivative(a))
        delta_ta = symplectic_delta(ctx, wedge(s.theta, a))
        delta_a = symplectic_delta(ctx, a)
        d_delta_a = exterior_derivative(delta_a)
        t_delta_a = wedge(s.theta, delta_a)
        for o1, o2 in sorted(alive):
            expr = delta_da - delta_ta.scale(k + o1) + d_delta_a - t_delta_a.scale(k + o2)
            if expr:
                alive.discard((o1, o2))
    offsets = tuple((k, o1, o2) for k in sorted(surviving) for o1, o2 in sorted(surviving[k]))
    uniform = set(pairs)
    for alive in surviving.values():
        uniform &= alive
    return RelationReport(
        offsets=offsets,
        uniform_offsets=tuple(sorted(uniform)) if surviving else (),
        trials=trials,
        seed=seed,
        weight_independent=s.theta.is_zero(),
    )
