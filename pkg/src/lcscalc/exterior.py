"""Differential forms on a single coordinate chart.

Forms are finite sums of wedge monomials ``f * dx_i1 ^ ... ^ dx_ik`` keyed by
strictly increasing index tuples, with :class:`~lcscalc.scalar.ScalarExpr`
coefficients.  Mixed-degree sums are allowed; most operators act degree by
degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ChartMismatch, DegenerateStructure, DegreeMismatch, UnknownSymbol
from .scalar import ANGULAR, COLLAR, CoordinateSymbol, ScalarExpr, ScalarRing, scalar_ring

__all__ = [
    "Chart",
    "DifferentialForm",
    "CoordinateMap",
    "wedge",
    "exterior_derivative",
    "contract_bivector",
    "pullback",
    "basis_monomials",
    "merge_sign",
    "poisson_matrix",
    "determinant",
    "solve_linear",
]


@dataclass(frozen=True)
class Chart:
    coordinates: tuple[CoordinateSymbol, ...]
    parameters: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.coordinates:
            raise ValueError("a chart needs at least one coordinate")
        names = [c.name for c in self.coordinates]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names: {names}")

    @classmethod
    def of(cls, *names: str, angular: Iterable[str] = (), collar: str | None = None,
           parameters: Sequence[str] = ()) -> "Chart":
        angular = set(angular)
        coords = []
        for n in names:
            kind = ANGULAR if n in angular else COLLAR if n == collar else "cartesian"
            coords.append(CoordinateSymbol(n, kind))
        return cls(tuple(coords), tuple(parameters))

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.coordinates)

    @property
    def ring(self) -> ScalarRing:
        return scalar_ring(self.coordinates, self.parameters)

    @property
    def collar_index(self) -> int | None:
        for i, c in enumerate(self.coordinates):
            if c.kind == COLLAR:
                return i
        return None

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownSymbol(f"{name!r} is not a coordinate of this chart") from None

    # convenience constructors
    def scalar(self, value) -> ScalarExpr:
        if isinstance(value, str):
            return self.ring.symbol(value)
        return self.ring.coerce(value)

    def d(self, name: str) -> "DifferentialForm":
        return DifferentialForm(self, {(self.index(name),): self.ring.one})

    def zero(self) -> "DifferentialForm":
        return DifferentialForm(self, {})

    def function(self, f) -> "DifferentialForm":
        return DifferentialForm(self, {(): self.scalar(f)})

    def volume_monomial(self) -> "DifferentialForm":
        return DifferentialForm(self, {tuple(range(self.dimension)): self.ring.one})

    def __str__(self) -> str:
        lines = []
        for c in self.coordinates:
            lines.append(f"coord {c.name}" + ("" if c.kind == "cartesian" else f" {c.kind}"))
        lines += [f"param {p}" for p in self.parameters]
        return "\n".join(lines)


def basis_monomials(dimension: int, degree: int) -> list[tuple[int, ...]]:
    return list(combinations(range(dimension), degree))


def merge_sign(left: tuple[int, ...], right: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and sorted tuple of dx_left ^ dx_right, or None if an index repeats."""
    if set(left) & set(right):
        return None
    inversions = sum(1 for i in left for j in right if i > j)
    return (-1 if inversions % 2 else 1), tuple(sorted(left + right))


class DifferentialForm:
    """Immutable graded sum of wedge monomials on one chart."""

    __slots__ = ("chart", "terms", "_hash")

    def __init__(self, chart: Chart, terms: Mapping[tuple[int, ...], ScalarExpr]):
        self.chart = chart
        ring = chart.ring
        clean = {}
        for idx, coeff in terms.items():
            idx = tuple(idx)
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"monomial {idx} is not strictly increasing")
            if idx and (idx[0] < 0 or idx[-1] >= chart.dimension):
                raise ValueError(f"monomial {idx} out of range for a {chart.dimension}-chart")
            coeff = ring.coerce(coeff)
            if coeff:
                clean[idx] = coeff
        self.terms: dict[tuple[int, ...], ScalarExpr] = dict(sorted(clean.items(), key=lambda kv: (len(kv[0]), kv[0])))
        self._hash = None

    # -- structure ----------------------------------------------------------

    @property
    def degrees(self) -> set[int]:
        return {len(i) for i in self.terms}

    @property
    def degree(self) -> int | None:
        """Common degree of all monomials (0 for the zero form), None if mixed."""
        ds = self.degrees
        if not ds:
            return 0
        return next(iter(ds)) if len(ds) == 1 else None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def homogeneous_part(self, k: int) -> "DifferentialForm":
        return DifferentialForm(self.chart, {i: c for i, c in self.terms.items() if len(i) == k})

    def homogeneous_parts(self) -> Iterator[tuple[int, "DifferentialForm"]]:
        for k in sorted(self.degrees):
            yield k, self.homogeneous_part(k)

    def coefficient(self, *names_or_indices) -> ScalarExpr:
        """Coefficient of dx_i1 ^ ... ^ dx_ik in the given (possibly unsorted) order."""
        raw = [self.chart.index(n) if isinstance(n, str) else n for n in names_or_indices]
        zero = self.chart.ring.zero
        if len(set(raw)) != len(raw):
            return zero
        inversions = sum(1 for p, i in enumerate(raw) for j in raw[p + 1:] if i > j)
        c = self.terms.get(tuple(sorted(raw)), zero)
        return -c if inversions % 2 else c

    def __eq__(self, other) -> bool:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.chart, tuple(self.terms.items())))
        return self._hash

    # -- linear structure ---------------------------------------------------

    def _check(self, other: "DifferentialForm") -> None:
        if other.chart != self.chart:
            raise ChartMismatch("forms live on different charts")

    def _as_form(self, other):
        if isinstance(other, DifferentialForm):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, ScalarExpr)):
            return self.chart.function(other)
        return None

    def __add__(self, other):
        o = self._as_form(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for i, c in o.terms.items():
            terms[i] = terms[i] + c if i in terms else c
        return DifferentialForm(self.chart, terms)

    __radd__ = __add__

    def __neg__(self):
        return DifferentialForm(self.chart, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other):
        o = self._as_form(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._as_form(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, f) -> "DifferentialForm":
        f = self.chart.ring.coerce(f)
        if not f:
            return self.chart.zero()
        return DifferentialForm(self.chart, {i: f * c for i, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ScalarExpr)):
            return self.scale(other)
        if isinstance(other, DifferentialForm):
            return wedge(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ScalarExpr)):
            return self.scale(other)
        return NotImplemented

    def __xor__(self, other):
        if isinstance(other, DifferentialForm):
            return wedge(self, other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, ScalarExpr)):
            return self.scale(self.chart.ring.coerce(other).inverse())
        return NotImplemented

    # -- printing -----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.chart.names
        pieces = []
        for idx, coeff in self.terms.items():
            diff = "^".join(f"d{names[i]}" for i in idx)
            if not idx:
                body, neg = str(coeff), False
            elif coeff == 1:
                body, neg = diff, False
            elif coeff == -1:
                body, neg = diff, True
            elif len(coeff.num) == 1 and coeff.den == coeff.ring.poly_ring.one:
                text = str(coeff)
                neg = text.startswith("-")
                body = f"{text.lstrip('-')}*{diff}"
            else:
                body, neg = f"({coeff})*{diff}", False
            pieces.append((neg, body))
        out = ""
        for n, (neg, body) in enumerate(pieces):
            if n == 0:
                out = ("-" if neg else "") + body
            else:
                out += f" {'-' if neg else '+'} {body}"
        return out

    def __repr__(self) -> str:
        return f"DifferentialForm({self})"


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    if a.chart != b.chart:
        raise ChartMismatch("wedge of forms on different charts")
    terms: dict[tuple[int, ...], ScalarExpr] = {}
    for i, ca in a.terms.items():
        for j, cb in b.terms.items():
            merged = merge_sign(i, j)
            if merged is None:
                continue
            sign, k = merged
            c = ca * cb if sign > 0 else -(ca * cb)
            terms[k] = terms[k] + c if k in terms else c
    return DifferentialForm(a.chart, terms)


def exterior_derivative(a: DifferentialForm) -> DifferentialForm:
    names = a.chart.names
    terms: dict[tuple[int, ...], ScalarExpr] = {}
    for idx, coeff in a.terms.items():
        for j, name in enumerate(names):
            if j in idx:
                continue
            dc = coeff.differentiate(name)
            if not dc:
                continue
            before = sum(1 for i in idx if i < j)
            k = tuple(sorted(idx + (j,)))
            c = -dc if before % 2 else dc
            terms[k] = terms[k] + c if k in terms else c
    return DifferentialForm(a.chart, terms)


# -- linear algebra over the coefficient field ---------------------------------


def determinant(matrix: Sequence[Sequence[ScalarExpr]], ring: ScalarRing) -> ScalarExpr:
    """Determinant by Gaussian elimination over the rational-function field."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return ring.one
    det = ring.one
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return ring.zero
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        p = m[col][col]
        det = det * p
        inv = p.inverse()
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def solve_linear(a: Sequence[Sequence[ScalarExpr]], rhs: Sequence[Sequence[ScalarExpr]],
                 ring: ScalarRing) -> list[list[ScalarExpr]]:
    """Solve A X = B exactly (square A, B given as a list of rows)."""
    n = len(a)
    m = [list(a[r]) + list(rhs[r]) for r in range(n)]
    width = len(m[0]) if m else 0
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            raise DegenerateStructure("singular linear system")
        m[col], m[pivot] = m[pivot], m[col]
        inv = m[col][col].inverse()
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:width] for row in m]


def _two_form_matrix(omega: DifferentialForm) -> list[list[ScalarExpr]]:
    if omega.degree != 2 and not omega.is_zero():
        raise DegreeMismatch("expected a 2-form")
    ring = omega.chart.ring
    n = omega.chart.dimension
    w = [[ring.zero] * n for _ in range(n)]
    for (i, j), c in omega.terms.items():
        w[i][j] = c
        w[j][i] = -c
    return w


def poisson_matrix(omega: DifferentialForm) -> list[list[ScalarExpr]]:
    """Pairing matrix P[i][j] = <dx_i, dx_j>: the inverse of omega's coefficient matrix.

    With omega = dx ^ dy, W = [[0, 1], [-1, 0]] and <dx, dy> = -1.
    """
    w = _two_form_matrix(omega)
    ring = omega.chart.ring
    n = len(w)
    if n % 2 or not determinant(w, ring):
        raise DegenerateStructure(f"2-form {omega} is degenerate")
    ident = [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]
    return solve_linear(w, ident, ring)


def monomial_pairing(pi: Sequence[Sequence[ScalarExpr]], i: tuple[int, ...], j: tuple[int, ...],
                     ring: ScalarRing) -> ScalarExpr:
    if len(i) != len(j):
        raise DegreeMismatch("pairing of monomials of different degree")
    return determinant([[pi[a][b] for b in j] for a in i], ring)


def contract_bivector(omega: DifferentialForm, a: DifferentialForm, b: DifferentialForm) -> ScalarExpr:
    """The pairing <a, b>_k induced by the inverse of ``omega``.

    Defined on decomposables by det[<a_i, b_j>] and extended bilinearly.
    """
    if not (omega.chart == a.chart == b.chart):
        raise ChartMismatch("pairing across charts")
    ka, kb = a.degree, b.degree
    if ka is None or kb is None or (ka != kb and a and b):
        raise DegreeMismatch(f"pairing needs homogeneous forms of equal degree, got {ka} and {kb}")
    ring = omega.chart.ring
    pi = poisson_matrix(omega)
    total = ring.zero
    for i, ca in a.terms.items():
        for j, cb in b.terms.items():
            p = monomial_pairing(pi, i, j, ring)
            if p:
                total = total + ca * cb * p
    return total


@dataclass(frozen=True)
class CoordinateMap:
    """A map source -> target given by target coordinates in source coordinates."""

    source: Chart
    target: Chart
    components: tuple[ScalarExpr, ...]
    # target parameter -> source expression; defaults to same-named source parameter
    parameter_images: tuple[tuple[str, ScalarExpr], ...] = field(default=())

    def __post_init__(self):
        if len(self.components) != self.target.dimension:
            raise ChartMismatch(
                f"{len(self.components)} components for a {self.target.dimension}-dimensional target")
        ring = self.source.ring
        object.__setattr__(self, "components", tuple(ring.coerce(c) for c in self.components))

    @classmethod
    def identity(cls, chart: Chart) -> "CoordinateMap":
        return cls(chart, chart, tuple(chart.ring.symbol(n) for n in chart.names))

    @cached_property
    def _images(self) -> dict[str, ScalarExpr]:
        src = self.source.ring
        images: dict[str, ScalarExpr] = {}
        for c, img in zip(self.target.coordinates, self.components):
            images[c.name] = img
            if c.kind == ANGULAR:
                # trig atoms only transport along angle -> angle identifications
                names = img.free_symbols()
                if (len(names) == 1 and img == src.symbol(next(iter(names)))
                        and next(iter(names)) in src.angular_pairs):
                    s = next(iter(names))
                    images[f"sin({c.name})"] = src.sin(s)
                    images[f"cos({c.name})"] = src.cos(s)
        explicit = dict(self.parameter_images)
        for p in self.target.parameters:
            if p in explicit:
                images[p] = src.coerce(explicit[p])
            elif src.has_symbol(p) and p in self.source.parameters:
                images[p] = src.symbol(p)
        return images

    def pull_scalar(self, f: ScalarExpr) -> ScalarExpr:
        return f.substitute(self._images, self.source.ring)

    @cached_property
    def differentials(self) -> tuple[DifferentialForm, ...]:
        return tuple(exterior_derivative(self.source.function(c)) for c in self.components)


def pullback(f: CoordinateMap, a: DifferentialForm) -> DifferentialForm:
    if a.chart != f.target:
        raise ChartMismatch("form does not live on the map's target chart")
    src = f.source
    result = src.zero()
    for idx, coeff in a.terms.items():
        piece = src.function(f.pull_scalar(coeff))
        for i in idx:
            piece = wedge(piece, f.differentials[i])
            if not piece:
                break
        result = result + piece
    return result
