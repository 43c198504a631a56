"""Locally conformally symplectic structures, contact forms and collars."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

from .errors import ChartMismatch, DimensionError, InvalidContact, NotACollar
from .exterior import Chart, CoordinateMap, DifferentialForm, exterior_derivative, pullback, wedge
from .scalar import COLLAR, CoordinateSymbol, ScalarExpr

__all__ = [
    "LcsStructure",
    "ContactForm",
    "LcsMorphism",
    "LcsReport",
    "ContactReport",
    "MorphismReport",
    "verify_lcs",
    "verify_contact",
    "build_collar",
    "collar_chart",
    "volume_identity_sign",
    "verify_morphism",
    "restrict_to_boundary",
    "top_power",
    "locus_factors",
]


def top_power(omega: DifferentialForm, n: int) -> DifferentialForm:
    """omega^n / n!"""
    out = omega.chart.function(1)
    for _ in range(n):
        out = wedge(out, omega)
    return out / factorial(n)


def locus_factors(f: ScalarExpr) -> list[str]:
    """Irreducible non-constant factors of the numerator of ``f`` (its zero locus)."""
    _c, factors = f.num.factor_list()
    ring = f.ring
    return sorted(str(ring.from_polys(p)) for p, _e in factors if not p.is_ground)


@dataclass(frozen=True)
class LcsStructure:
    chart: Chart
    omega: DifferentialForm
    theta: DifferentialForm

    def __post_init__(self):
        if not (self.omega.chart == self.theta.chart == self.chart):
            raise ChartMismatch("omega, theta and chart disagree")

    @property
    def half_dim(self) -> int:
        return self.chart.dimension // 2

    @property
    def volume(self) -> DifferentialForm:
        return top_power(self.omega, self.half_dim)


@dataclass(frozen=True)
class LcsReport:
    theta_closed: bool
    signs: tuple[int, ...]  # every eps in {+1, -1} with d omega = eps theta ^ omega
    nondegenerate: bool
    volume_coefficient: ScalarExpr
    degeneracy_locus: list[str] = field(default_factory=list)

    @property
    def sign(self) -> int | None:
        """The Lee-form sign when it is determined (None if ambiguous or absent)."""
        return self.signs[0] if len(self.signs) == 1 else None

    @property
    def valid(self) -> bool:
        return self.theta_closed and self.nondegenerate and bool(self.signs)


def verify_lcs(s: LcsStructure) -> LcsReport:
    if s.chart.dimension % 2:
        raise DimensionError(f"lcs structures need an even-dimensional chart, got {s.chart.dimension}")
    if s.omega.degree != 2 or (s.theta.degree != 1 and s.theta):
        raise DimensionError("omega must be a 2-form and theta a 1-form")
    d_omega = exterior_derivative(s.omega)
    t_w = wedge(s.theta, s.omega)
    signs = tuple(eps for eps in (1, -1) if d_omega == t_w.scale(eps))
    vol = s.volume.coefficient(*range(s.chart.dimension))
    return LcsReport(
        theta_closed=exterior_derivative(s.theta).is_zero(),
        signs=signs,
        nondegenerate=bool(vol),
        volume_coefficient=vol,
        degeneracy_locus=locus_factors(vol) if vol else ["0"],
    )


@dataclass(frozen=True)
class ContactForm:
    chart: Chart
    alpha: DifferentialForm


@dataclass(frozen=True)
class ContactReport:
    volume: DifferentialForm  # alpha ^ (d alpha)^m
    nonzero: bool
    vanishing_locus: list[str]

    @property
    def valid(self) -> bool:
        return self.nonzero


def verify_contact(c: ContactForm) -> ContactReport:
    dim = c.chart.dimension
    if dim % 2 == 0:
        raise DimensionError(f"contact forms need an odd-dimensional chart, got {dim}")
    if c.alpha.degree != 1 and c.alpha:
        raise DimensionError("a contact form is a 1-form")
    da = exterior_derivative(c.alpha)
    vol = c.alpha
    for _ in range(dim // 2):
        vol = wedge(vol, da)
    coeff = vol.coefficient(*range(dim))
    return ContactReport(vol, bool(coeff), locus_factors(coeff) if coeff else ["0"])


def collar_chart(y: Chart, parameter: str = "t") -> Chart:
    """(0,1] x Y with the collar parameter as first coordinate."""
    if parameter in y.names:
        raise ChartMismatch(f"collar parameter {parameter!r} clashes with a coordinate of Y")
    return Chart((CoordinateSymbol(parameter, COLLAR),) + y.coordinates, y.parameters)


def _projection(x: Chart, y: Chart) -> CoordinateMap:
    ring = x.ring
    return CoordinateMap(x, y, tuple(ring.symbol(n) for n in y.names))


def build_collar(c: ContactForm, parameter: str = "t") -> LcsStructure:
    """omega = -t^-1 d(t alpha), theta = t^-1 dt on the collar over the contact chart."""
    if c.chart.dimension != 3:
        raise DimensionError("the collar construction takes a contact 3-chart")
    if not verify_contact(c).valid:
        raise InvalidContact(f"{c.alpha} is not a contact form: alpha ^ d alpha = 0")
    x = collar_chart(c.chart, parameter)
    alpha = pullback(_projection(x, c.chart), c.alpha)
    t = x.scalar(parameter)
    t_alpha = alpha.scale(t)
    omega = exterior_derivative(t_alpha).scale(-t.inverse())
    theta = x.d(parameter).scale(t.inverse())
    return LcsStructure(x, omega, theta)


def volume_identity_sign(c: ContactForm, s: LcsStructure) -> int | None:
    """eps' with omega ^ omega = 2 eps' theta ^ alpha ^ d alpha, or None."""
    alpha = pullback(_projection(s.chart, c.chart), c.alpha)
    rhs = wedge(wedge(s.theta, alpha), exterior_derivative(alpha)).scale(2)
    lhs = wedge(s.omega, s.omega)
    for eps in (1, -1):
        if lhs == rhs.scale(eps):
            return eps
    return None


@dataclass(frozen=True)
class LcsMorphism:
    """phi : source -> target with factor u; source is (X', omega'), target (X, omega)."""

    map: CoordinateMap
    u: ScalarExpr
    source: LcsStructure
    target: LcsStructure


@dataclass(frozen=True)
class MorphismReport:
    literal_omega: bool
    literal_theta: bool
    conformal_omega: bool
    conformal_theta: bool
    u_nonzero: bool

    @property
    def literal(self) -> bool:
        return self.literal_omega and self.literal_theta

    @property
    def conformal(self) -> bool:
        return self.conformal_omega and self.conformal_theta and self.u_nonzero


def verify_morphism(m: LcsMorphism) -> MorphismReport:
    """Check phi^*omega = omega', phi^*theta = theta' + du (literal) and
    phi^*omega = u omega', phi^*theta = theta' + u^-1 du (conformal)."""
    f = m.map
    if f.source != m.source.chart or f.target != m.target.chart:
        raise ChartMismatch("morphism map does not join the two structures' charts")
    x = m.source.chart
    u = x.ring.coerce(m.u)
    pw = pullback(f, m.target.omega)
    pt = pullback(f, m.target.theta)
    du = exterior_derivative(x.function(u))
    u_ok = bool(u)
    return MorphismReport(
        literal_omega=pw == m.source.omega,
        literal_theta=pt == m.source.theta + du,
        conformal_omega=pw == m.source.omega.scale(u),
        conformal_theta=u_ok and pt == m.source.theta + du.scale(u.inverse()),
        u_nonzero=u_ok,
    )


def restrict_to_boundary(s: LcsStructure) -> tuple[DifferentialForm, DifferentialForm]:
    """Pull (omega, theta) back along Y -> {t = 1} x Y."""
    k = s.chart.collar_index
    if k is None:
        raise NotACollar("chart has no collar-parameter coordinate")
    y = Chart(s.chart.coordinates[:k] + s.chart.coordinates[k + 1:], s.chart.parameters)
    ring = y.ring
    comps = [ring.symbol(c.name) if i != k else ring.one for i, c in enumerate(s.chart.coordinates)]
    inc = CoordinateMap(y, s.chart, tuple(comps))
    return pullback(inc, s.omega), pullback(inc, s.theta)
