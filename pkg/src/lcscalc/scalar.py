"""Exact scalar coefficients: rational functions over QQ with trig atoms.

A :class:`ScalarRing` fixes an ordered set of generators: the chart
coordinates in declaration order, then free parameters, then one
``sin(c)``/``cos(c)`` pair for every angular coordinate ``c``.  Elements are
:class:`ScalarExpr` values kept in a canonical form

    (N0 + N1*sin(c)) / D

per angular coordinate, where ``D`` is free of every ``sin`` atom, the
fraction is reduced, ``D`` is monic under degrevlex and no ``sin`` appears to
a power above one.  Two expressions are equal iff their canonical
numerators and denominators coincide.

Polynomial arithmetic and gcds are delegated to ``sympy.polys.rings``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyRing

from .errors import ChartMismatch, DivisionByZero, UnknownSymbol

__all__ = [
    "CARTESIAN",
    "ANGULAR",
    "COLLAR",
    "CoordinateSymbol",
    "ScalarRing",
    "ScalarExpr",
    "scalar_ring",
    "format_rational",
]

CARTESIAN = "cartesian"
ANGULAR = "angular"
COLLAR = "collar"
_KINDS = (CARTESIAN, ANGULAR, COLLAR)

Number = Union[int, Fraction]


@dataclass(frozen=True)
class CoordinateSymbol:
    name: str
    kind: str = CARTESIAN

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown coordinate kind {self.kind!r}")
        if not self.name.isidentifier():
            raise ValueError(f"coordinate name {self.name!r} is not an identifier")


def _mpq_to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def format_rational(q) -> str:
    q = Fraction(q) if not isinstance(q, Fraction) else q
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class ScalarRing:
    """Generator table plus the backing sympy polynomial ring.

    Use :func:`scalar_ring` to obtain instances; rings are interned so that
    two charts with the same declaration share one ring.
    """

    def __init__(self, coordinates: tuple[CoordinateSymbol, ...], parameters: tuple[str, ...]):
        names = [c.name for c in coordinates] + list(parameters)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate symbol names in {names}")
        self.coordinates = coordinates
        self.parameters = parameters
        gens = list(names)
        self._angular: dict[str, tuple[int, int]] = {}
        for c in coordinates:
            if c.kind == ANGULAR:
                self._angular[c.name] = (len(gens), len(gens) + 1)
                gens += [f"sin({c.name})", f"cos({c.name})"]
        self.generator_names: tuple[str, ...] = tuple(gens)
        self._index = {g: i for i, g in enumerate(gens)}
        self.poly_ring = PolyRing([Symbol(g) for g in gens], QQ, grevlex)
        self._gens = self.poly_ring.gens
        self.zero = ScalarExpr._raw(self, self.poly_ring.zero, self.poly_ring.one)
        self.one = ScalarExpr._raw(self, self.poly_ring.one, self.poly_ring.one)

    def __repr__(self) -> str:
        return f"ScalarRing({', '.join(self.generator_names)})"

    @property
    def coordinate_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.coordinates)

    @property
    def angular_pairs(self) -> Mapping[str, tuple[int, int]]:
        """Angular coordinate name -> (sin generator index, cos generator index)."""
        return self._angular

    def coordinate(self, name: str) -> CoordinateSymbol:
        for c in self.coordinates:
            if c.name == name:
                return c
        raise UnknownSymbol(f"unknown coordinate {name!r}")

    def has_symbol(self, name: str) -> bool:
        return name in self._index

    def generator_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownSymbol(f"unknown symbol {name!r}") from None

    def const(self, value: Number) -> "ScalarExpr":
        q = Fraction(value)
        num = self.poly_ring.ground_new(QQ(q.numerator, q.denominator))
        return ScalarExpr._raw(self, num, self.poly_ring.one)

    def symbol(self, name: str) -> "ScalarExpr":
        """Coordinate, parameter, or trig atom written ``sin(c)``/``cos(c)``."""
        return ScalarExpr._raw(self, self._gens[self.generator_index(name)], self.poly_ring.one)

    def sin(self, name: str) -> "ScalarExpr":
        if name not in self._angular:
            raise UnknownSymbol(f"sin() requires an angular coordinate, got {name!r}")
        return self.symbol(f"sin({name})")

    def cos(self, name: str) -> "ScalarExpr":
        if name not in self._angular:
            raise UnknownSymbol(f"cos() requires an angular coordinate, got {name!r}")
        return self.symbol(f"cos({name})")

    def coerce(self, value) -> "ScalarExpr":
        if isinstance(value, ScalarExpr):
            if value.ring is not self:
                raise ChartMismatch(f"scalar from {value.ring!r} used in {self!r}")
            return value
        if isinstance(value, (int, Fraction)):
            return self.const(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to ScalarExpr")

    def from_polys(self, num, den=None) -> "ScalarExpr":
        """Canonicalize a numerator/denominator pair of ring polynomials."""
        return ScalarExpr._canonical(self, num, self.poly_ring.one if den is None else den)

    # -- canonical-form helpers -------------------------------------------

    def reduce_trig(self, p):
        """Rewrite sin(c)^e as sin(c)^(e mod 2) * (1 - cos(c)^2)^(e div 2)."""
        for si, ci in self._angular.values():
            if not any(m[si] >= 2 for m in p.keys()):
                continue
            one_minus_c2 = self.poly_ring.one - self._gens[ci] ** 2
            out = self.poly_ring.zero
            powers: dict[int, object] = {}
            for m, coeff in p.items():
                e = m[si]
                if e < 2:
                    out += self.poly_ring({m: coeff})
                    continue
                half = e // 2
                if half not in powers:
                    powers[half] = one_minus_c2 ** half
                mm = list(m)
                mm[si] = e % 2
                out += self.poly_ring({tuple(mm): coeff}) * powers[half]
            p = out
        return p

    def split_sin(self, p, si: int):
        """p = p0 + p1*sin, for p already trig-reduced in the atom at ``si``."""
        p0, p1 = {}, {}
        for m, coeff in p.items():
            if m[si] == 0:
                p0[m] = coeff
            else:
                mm = list(m)
                mm[si] = 0
                p1[tuple(mm)] = coeff
        return self.poly_ring(p0), self.poly_ring(p1)


@lru_cache(maxsize=None)
def scalar_ring(coordinates: tuple[CoordinateSymbol, ...], parameters: tuple[str, ...] = ()) -> ScalarRing:
    return ScalarRing(tuple(coordinates), tuple(parameters))


class ScalarExpr:
    """Immutable canonical element of a :class:`ScalarRing`'s fraction field."""

    __slots__ = ("ring", "num", "den", "_hash")

    @classmethod
    def _raw(cls, ring: ScalarRing, num, den) -> "ScalarExpr":
        self = object.__new__(cls)
        self.ring = ring
        self.num = num
        self.den = den
        self._hash = None
        return self

    @classmethod
    def _canonical(cls, ring: ScalarRing, num, den) -> "ScalarExpr":
        R = ring.poly_ring
        if not den:
            raise DivisionByZero("denominator is zero")
        if ring._angular:
            num = ring.reduce_trig(num)
            den = ring.reduce_trig(den)
            for si, _ci in ring._angular.values():
                d0, d1 = ring.split_sin(den, si)
                if d1:
                    conj = d0 - d1 * ring._gens[si]
                    num = ring.reduce_trig(num * conj)
                    den = ring.reduce_trig(den * conj)
            if not den:
                raise DivisionByZero("denominator vanishes after trig reduction")
        if not num:
            return cls._raw(ring, R.zero, R.one)
        if not den.is_ground:
            _g, num, den = num.cofactors(den)
        lc = den.LC
        if lc != 1:
            num = num.quo_ground(lc)
            den = den.quo_ground(lc)
        return cls._raw(ring, num, den)

    # -- structure ----------------------------------------------------------

    def _key(self):
        return (tuple(sorted(self.num.items())), tuple(sorted(self.den.items())))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, ScalarExpr):
            return NotImplemented
        return self.ring is other.ring and self.num == other.num and self.den == other.den

    def __bool__(self) -> bool:
        return bool(self.num)

    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return _mpq_to_fraction(self.num.LC) / _mpq_to_fraction(self.den.LC) if self.num else Fraction(0)

    def free_symbols(self) -> set[str]:
        names = set()
        for p in (self.num, self.den):
            for m in p.keys():
                names.update(self.ring.generator_names[i] for i, e in enumerate(m) if e)
        return names

    # -- arithmetic -----------------------------------------------------------

    def _other(self, other):
        if isinstance(other, ScalarExpr):
            if other.ring is not self.ring:
                raise ChartMismatch(f"scalars from different rings: {self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return ScalarExpr._canonical(self.ring, self.num + o.num, self.den)
        return ScalarExpr._canonical(self.ring, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return ScalarExpr._raw(self.ring, -self.num, self.den)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return self.ring.zero
        return ScalarExpr._canonical(self.ring, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "ScalarExpr":
        if not self.num:
            raise DivisionByZero("inverse of zero")
        return ScalarExpr._canonical(self.ring, self.den, self.num)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise DivisionByZero(f"division of {self} by zero")
        return ScalarExpr._canonical(self.ring, self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        return ScalarExpr._canonical(self.ring, self.num ** e, self.den ** e)

    # -- calculus ---------------------------------------------------------------

    def _poly_diff(self, p, name: str):
        ring = self.ring
        i = ring.generator_index(name)
        out = p.diff(ring._gens[i])
        if name in ring._angular:
            si, ci = ring._angular[name]
            s, c = ring._gens[si], ring._gens[ci]
            out = out + p.diff(s) * c - p.diff(c) * s
        return out

    def differentiate(self, name: str) -> "ScalarExpr":
        """Partial derivative with respect to the chart coordinate ``name``."""
        if name not in self.ring.coordinate_names:
            raise UnknownSymbol(f"unknown coordinate {name!r}")
        dn = self._poly_diff(self.num, name)
        if self.den.is_ground:
            return ScalarExpr._canonical(self.ring, dn, self.den)
        dd = self._poly_diff(self.den, name)
        return ScalarExpr._canonical(self.ring, dn * self.den - self.num * dd, self.den ** 2)

    # -- substitution -----------------------------------------------------------

    def substitute(self, images: Mapping[str, "ScalarExpr"], target: ScalarRing) -> "ScalarExpr":
        """Replace every generator of this ring by an element of ``target``.

        ``images`` must cover every generator that occurs (trig atoms are
        addressed as ``"sin(c)"``/``"cos(c)"``).
        """
        used = self.free_symbols()
        missing = used - set(images)
        if missing:
            raise UnknownSymbol(f"no image for {sorted(missing)}")
        gens = self.ring.generator_names
        imgs = {gens.index(g): target.coerce(images[g]) for g in used}
        num_n, num_d = _evaluate_poly(self.num, imgs, target)
        den_n, den_d = _evaluate_poly(self.den, imgs, target)
        if not den_n:
            raise DivisionByZero(f"denominator of {self} vanishes under substitution")
        return ScalarExpr._canonical(target, num_n * den_d, num_d * den_n)

    def evaluate(self, values: Mapping[str, Number]) -> Fraction:
        """Exact rational value; trig atoms are given as ``"sin(c)"``/``"cos(c)"``."""
        used = self.free_symbols()
        missing = used - set(values)
        if missing:
            raise UnknownSymbol(f"no value for {sorted(missing)}")
        gens = self.ring.generator_names
        vals = [Fraction(values[g]) if g in used else Fraction(0) for g in gens]

        def ev(p) -> Fraction:
            total = Fraction(0)
            for m, coeff in p.items():
                term = _mpq_to_fraction(coeff)
                for i, e in enumerate(m):
                    if e:
                        term *= vals[i] ** e
                total += term
            return total

        d = ev(self.den)
        if d == 0:
            raise DivisionByZero(f"denominator of {self} vanishes at {dict(values)}")
        return ev(self.num) / d

    def to_ring(self, target: ScalarRing) -> "ScalarExpr":
        """Re-embed into a ring that contains every generator used here."""
        if target is self.ring:
            return self
        return self.substitute({g: target.symbol(g) for g in self.free_symbols()}, target)

    # -- printing ---------------------------------------------------------------

    def _format_poly(self, p) -> str:
        gens = self.ring.generator_names
        if not p:
            return "0"
        parts = []
        for m, coeff in p.terms():  # ring order: degrevlex, descending
            q = _mpq_to_fraction(coeff)
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(gens[i])
                elif e > 1:
                    factors.append(f"{gens[i]}^{e}")
            mono = "*".join(factors)
            mag = abs(q)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            parts.append(("-" if q < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        num = self._format_poly(self.num)
        if self.den == self.ring.poly_ring.one:
            return num
        den = self._format_poly(self.den)
        if len(self.num) > 1:
            num = f"({num})"
        if len(self.den) > 1 or "*" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"ScalarExpr({self})"

    @property
    def is_single_term(self) -> bool:
        return self.den == self.ring.poly_ring.one and len(self.num) == 1


def _evaluate_poly(p, imgs: Mapping[int, ScalarExpr], target: ScalarRing):
    """Evaluate polynomial ``p`` at fractional images; returns (num, den) polys.

    The common denominator is prod(Q_i^D_i), D_i the max exponent of generator i.
    """
    R = target.poly_ring
    maxdeg = {i: 0 for i in imgs}
    for m in p.keys():
        for i, e in enumerate(m):
            if e > maxdeg.get(i, 0):
                maxdeg[i] = e
    num_pows: dict[tuple[int, int], object] = {}
    den_pows: dict[tuple[int, int], object] = {}

    def npow(i, e):
        if (i, e) not in num_pows:
            num_pows[(i, e)] = imgs[i].num ** e
        return num_pows[(i, e)]

    def dpow(i, e):
        if (i, e) not in den_pows:
            den_pows[(i, e)] = imgs[i].den ** e
        return den_pows[(i, e)]

    total = R.zero
    for m, coeff in p.items():
        term = R.ground_new(coeff)
        for i, D in maxdeg.items():
            e = m[i]
            if e:
                term = term * npow(i, e)
            if D - e and not imgs[i].den == R.one:
                term = term * dpow(i, D - e)
        total += term
    den = R.one
    for i, D in maxdeg.items():
        if D and imgs[i].den != R.one:
            den = den * dpow(i, D)
    return total, den


def ring_for(symbols: Iterable[CoordinateSymbol], parameters: Sequence[str] = ()) -> ScalarRing:
    return scalar_ring(tuple(symbols), tuple(parameters))
