"""Kerr-Schild coordinates, the Kerr quartic and its pencil of ellipses.

The quartic is

    Q(r, x, z, a) = r^2 (x^2 + z^2) - a^2 (r^2 - z^2)

on P^3 with homogeneous coordinates [r : x : z : a] (the y = 0 slice of the
Kerr-Schild map).  With kappa = x/a, rho = r/a, zeta = z/a and the pencil
parameter theta_p = zeta/rho the fibre is the conic

    kappa^2 + theta_p^2 rho^2 = 1 - theta_p^2

in the (kappa, rho)-plane.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import EmptyFiber, InvalidFiberPoint, InvalidPoint
from .exterior import Chart, CoordinateMap, DifferentialForm, exterior_derivative, pullback, wedge
from .lcs import locus_factors
from .scalar import ScalarExpr

__all__ = [
    "ProjectivePoint",
    "quartic_value",
    "quartic_eval",
    "quartic_polynomial",
    "normalization_difference",
    "ConicReport",
    "fiber",
    "MembershipReport",
    "fiber_membership",
    "DegenerateQuartic",
    "degenerate_a0",
    "kerr_schild_map",
    "IdentityReport",
    "verify_ks_identity",
    "FormReport",
    "kerr_two_form",
    "PencilRow",
    "sample_pencil",
    "pencil_csv",
    "CSV_HEADER",
]


# -- the projective quartic -------------------------------------------------------


@dataclass(frozen=True)
class ProjectivePoint:
    """[r : x : z : a] with exact rational coordinates."""

    coords: tuple[Fraction, Fraction, Fraction, Fraction]

    def __init__(self, r, x, z, a):
        coords = tuple(Fraction(v) for v in (r, x, z, a))
        if not any(coords):
            raise InvalidPoint("[0 : 0 : 0 : 0] is not a projective point")
        object.__setattr__(self, "coords", coords)

    def canonical(self) -> "ProjectivePoint":
        lead = next(v for v in self.coords if v)
        return ProjectivePoint(*(v / lead for v in self.coords))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.canonical().coords == other.canonical().coords

    def __hash__(self) -> int:
        return hash(self.canonical().coords)


def quartic_value(r, x, z, a) -> Fraction:
    r, x, z, a = (Fraction(v) for v in (r, x, z, a))
    return r * r * (x * x + z * z) - a * a * (r * r - z * z)


def quartic_eval(p: ProjectivePoint) -> Fraction:
    """Q at the canonical representative (first nonzero coordinate 1)."""
    return quartic_value(*p.canonical().coords)


QUARTIC_CHART = Chart.of("r", "x", "z", "a")
NORMALIZED_CHART = Chart.of("kappa", "rho", "zeta")


def quartic_polynomial() -> ScalarExpr:
    R = QUARTIC_CHART.ring
    r, x, z, a = (R.symbol(n) for n in ("r", "x", "z", "a"))
    return r ** 2 * (x ** 2 + z ** 2) - a ** 2 * (r ** 2 - z ** 2)


def normalization_difference() -> ScalarExpr:
    """Q - a^4 (rho^2 (kappa^2 + zeta^2) - rho^2 + zeta^2) with kappa = x/a, ..."""
    N = NORMALIZED_CHART.ring
    kappa, rho, zeta = (N.symbol(n) for n in ("kappa", "rho", "zeta"))
    normalized = rho ** 2 * (kappa ** 2 + zeta ** 2) - (rho ** 2 - zeta ** 2)
    R = QUARTIC_CHART.ring
    a = R.symbol("a")
    back = normalized.substitute(
        {"kappa": R.symbol("x") / a, "rho": R.symbol("r") / a, "zeta": R.symbol("z") / a}, R)
    return quartic_polynomial() - a ** 4 * back


# -- fibres of the pencil ---------------------------------------------------------


@dataclass(frozen=True)
class ConicReport:
    theta_p_sq: Fraction
    kind: str  # "ellipse" | "line-pair" | "point"
    kappa_axis_sq: Fraction  # semi-axis^2 along kappa
    rho_axis_sq: Fraction | None  # semi-axis^2 along rho; None when unbounded
    eccentricity_sq: Fraction


def _theta_sq(theta_p, theta_p_sq) -> Fraction:
    if (theta_p is None) == (theta_p_sq is None):
        raise TypeError("give exactly one of theta_p and theta_p_sq")
    return Fraction(theta_p) ** 2 if theta_p is not None else Fraction(theta_p_sq)


def fiber(theta_p=None, *, theta_p_sq=None) -> ConicReport:
    """Classify  kappa^2 + c rho^2 = f  with c = theta_p^2, f = 1 - theta_p^2.

    The squared eccentricity is read off the axis ratio, 1 - min(1, c)/max(1, c).
    ``theta_p_sq`` admits parameters whose square, not value, is rational.
    """
    c = _theta_sq(theta_p, theta_p_sq)
    if c < 0:
        raise EmptyFiber("theta_p^2 must be nonnegative")
    f = 1 - c
    if f < 0:
        raise EmptyFiber(f"|theta_p| > 1 (theta_p^2 = {c}): the fibre has no real points")
    ecc2 = 1 - min(Fraction(1), c) / max(Fraction(1), c)
    if f == 0:
        return ConicReport(c, "point", Fraction(0), Fraction(0), ecc2)
    if c == 0:
        return ConicReport(c, "line-pair", f, None, ecc2)
    return ConicReport(c, "ellipse", f, f / c, ecc2)


@dataclass(frozen=True)
class MembershipReport:
    conic_value: Fraction
    quartic_value: Fraction
    member: bool

    @property
    def agree(self) -> bool:
        return (self.conic_value == 0) == (self.quartic_value == 0)


def fiber_membership(theta_p=None, kappa=0, rho=1, *, theta_p_sq=None) -> MembershipReport:
    """Test (kappa, rho, zeta = theta_p rho) against the fibre conic and the quartic.

    The quartic is evaluated at [rho : kappa : zeta : 1]; only zeta^2 enters.
    """
    c = _theta_sq(theta_p, theta_p_sq)
    kappa, rho = Fraction(kappa), Fraction(rho)
    if rho == 0:
        raise InvalidFiberPoint("rho = 0: the pencil parameter zeta/rho is undefined")
    conic = kappa ** 2 + c * rho ** 2 - (1 - c)
    zeta_sq = c * rho ** 2
    quartic = rho ** 2 * (kappa ** 2 + zeta_sq) - (rho ** 2 - zeta_sq)
    report = MembershipReport(conic, quartic, conic == 0)
    if not report.agree:
        raise AssertionError(f"conic and quartic routes disagree at {(c, kappa, rho)}")
    return report


@dataclass(frozen=True)
class DegenerateQuartic:
    expanded: ScalarExpr
    factors: tuple[tuple[ScalarExpr, int], ...]


def degenerate_a0() -> DegenerateQuartic:
    R = QUARTIC_CHART.ring
    q = quartic_polynomial().substitute(
        {"r": R.symbol("r"), "x": R.symbol("x"), "z": R.symbol("z"), "a": R.zero}, R)
    _c, factors = q.num.factor_list()
    out = sorted(((R.from_polys(p), e) for p, e in factors), key=lambda fe: (-fe[1], str(fe[0])))
    return DegenerateQuartic(q, tuple(out))


# -- the Kerr-Schild map ----------------------------------------------------------


KS_SOURCE = Chart.of("r", "th", "ph", angular=("th", "ph"), parameters=("a",))
KS_TARGET = Chart.of("x", "y", "z")


def kerr_schild_map() -> CoordinateMap:
    """x + iy = (r - ia) sin(th) e^(i ph), z = r cos(th)."""
    R = KS_SOURCE.ring
    r, a = R.symbol("r"), R.symbol("a")
    st, ct = R.sin("th"), R.cos("th")
    sp, cp = R.sin("ph"), R.cos("ph")
    x = st * (r * cp + a * sp)
    y = st * (r * sp - a * cp)
    z = r * ct
    return CoordinateMap(KS_SOURCE, KS_TARGET, (x, y, z))


@dataclass(frozen=True)
class IdentityReport:
    radial_sq: ScalarExpr  # x^2 + y^2
    axial_sq: ScalarExpr  # z^2
    lhs: ScalarExpr  # x^2 + y^2 + z^2
    printed_rhs: ScalarExpr  # a^2 (1 - (z/r)^2)
    difference: ScalarExpr  # lhs - printed_rhs


def verify_ks_identity() -> IdentityReport:
    ks = kerr_schild_map()
    T = KS_TARGET.ring
    x, y, z = (T.symbol(n) for n in ("x", "y", "z"))

    def pulled(f: ScalarExpr) -> ScalarExpr:
        return pullback(ks, KS_TARGET.function(f)).coefficient()

    radial = pulled(x ** 2 + y ** 2)
    axial = pulled(z ** 2)
    lhs = pulled(x ** 2 + y ** 2 + z ** 2)
    R = KS_SOURCE.ring
    r, a = R.symbol("r"), R.symbol("a")
    printed = a ** 2 * (1 - (ks.components[2] / r) ** 2)
    return IdentityReport(radial, axial, lhs, printed, lhs - printed)


# -- the candidate symplectic form --------------------------------------------------


TWO_FORM_CHART = Chart.of("up", "um", "th", "ph", angular=("th", "ph"), parameters=("a",))


@dataclass(frozen=True)
class FormReport:
    form: DifferentialForm
    closed: bool
    top_coefficient: ScalarExpr  # coefficient of form^2 / 2
    degeneracy_locus: tuple[str, ...]
    printed: DifferentialForm
    difference: DifferentialForm  # form - printed

    def coefficients(self) -> dict[str, str]:
        names = self.form.chart.names
        return {"^".join(f"d{names[i]}" for i in idx): str(c) for idx, c in self.form.terms.items()}


def kerr_two_form() -> FormReport:
    """d(t lambda) for lambda = d u+ + Theta d phi, Theta = a t sin^2 th, t = (u+ - u-)/2."""
    X = TWO_FORM_CHART
    R = X.ring
    t = (R.symbol("up") - R.symbol("um")) / 2
    big_theta = R.symbol("a") * t * R.sin("th") ** 2
    lam = X.d("up") + X.d("ph").scale(big_theta)
    form = exterior_derivative(lam.scale(t))
    d_big_theta = exterior_derivative(X.function(big_theta))
    printed = wedge(X.d("up"), X.d("um")).scale(Fraction(1, 2)) + wedge(d_big_theta, X.d("ph"))
    top = (wedge(form, form) / 2).coefficient(0, 1, 2, 3)
    return FormReport(
        form=form,
        closed=exterior_derivative(form).is_zero(),
        top_coefficient=top,
        degeneracy_locus=tuple(locus_factors(top)) if top else ("0",),
        printed=printed,
        difference=form - printed,
    )


# -- sampling the pencil ------------------------------------------------------------


CSV_HEADER = ("index", "theta_p_num", "theta_p_den", "ecc2_num", "ecc2_den",
              "kappa_num", "kappa_den", "rho_num", "rho_den")


@dataclass(frozen=True)
class PencilRow:
    index: int
    theta_p: Fraction
    eccentricity_sq: Fraction
    kappa_axis_sq: Fraction
    rho_axis_sq: Fraction | None
    kappa: Fraction
    rho: Fraction
    point: ProjectivePoint  # [r : x : z : a] = [a rho : a kappa : a theta_p rho : a]
    quartic_value: Fraction


def _pencil_row(index: int, a: Fraction, rng: random.Random) -> PencilRow:
    # theta_p = (1 - m^2)/(1 + m^2) makes 1 - theta_p^2 a rational square, so the
    # fibre has the rational point (kappa0, 0); a second point, with rho != 0,
    # comes from the chord of rational slope s through it.  m != 0 keeps the
    # fibre away from the single point at |theta_p| = 1.
    m = Fraction(rng.randint(1, 24), rng.randint(1, 24))
    theta_p = (1 - m * m) / (1 + m * m) * rng.choice((1, -1))
    kappa0 = 2 * m / (1 + m * m)
    s = Fraction(rng.randint(1, 12), rng.randint(1, 12)) * rng.choice((1, -1))
    rho = -2 * kappa0 * s / (s * s + theta_p * theta_p)
    kappa = kappa0 + s * rho
    conic = fiber(theta_p)
    point = ProjectivePoint(a * rho, a * kappa, a * theta_p * rho, a)
    return PencilRow(index, theta_p, conic.eccentricity_sq, conic.kappa_axis_sq, conic.rho_axis_sq,
                     kappa, rho, point, quartic_value(*point.coords))


def sample_pencil(a, count: int, seed: int) -> list[PencilRow]:
    """``count`` fibres with one exact member point each; pure in (a, count, seed)."""
    a = Fraction(a)
    if count < 1:
        raise ValueError("count must be at least 1")
    if a <= 0:
        raise ValueError("a must be positive")
    rng = random.Random(seed)
    return [_pencil_row(i, a, rng) for i in range(count)]


def pencil_csv(rows: Sequence[PencilRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow([row.index, row.theta_p.numerator, row.theta_p.denominator,
                    row.eccentricity_sq.numerator, row.eccentricity_sq.denominator,
                    row.kappa.numerator, row.kappa.denominator, row.rho.numerator, row.rho.denominator])
    return buf.getvalue()
