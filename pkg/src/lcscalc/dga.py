"""Cohomology of finitely presented graded-commutative dgas over QQ.

Elements are dictionaries from exponent tuples (one entry per generator, in
declaration order) to rationals.  Odd generators carry exponent 0 or 1.
Betti numbers are exact ranks of the differential on degree-truncated
chain spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from .errors import InvalidLeeForm, InvalidPresentation, ParseError
from .parser import Node, _byte_offset, _Evaluator, _lines, parse_ast
from .scalar import format_rational

__all__ = [
    "Element",
    "PresentedCDGA",
    "BettiTable",
    "enumerate_basis",
    "betti",
    "betti_twisted",
    "model_family",
    "parse_presentation",
    "format_presentation",
    "rank",
]

Monomial = tuple[int, ...]


class Element:
    """Immutable element of the free graded-commutative algebra."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "PresentedCDGA", terms: Mapping[Monomial, Fraction]):
        self.algebra = algebra
        self.terms = {m: Fraction(c) for m, c in sorted(terms.items(), reverse=True) if c}

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.algebra.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _coerce(self, other) -> "Element | None":
        if isinstance(other, Element):
            return other
        if isinstance(other, (int, Fraction)):
            return self.algebra.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in o.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Element(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        alg = self.algebra
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                prod = alg.multiply_monomials(m1, m2)
                if prod is not None:
                    sign, m = prod
                    terms[m] = terms.get(m, 0) + sign * c1 * c2
        return Element(alg, terms)

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = self.algebra.scalar(1)
        for _ in range(e):
            out = out * self
        return out

    def degrees(self) -> set[int]:
        return {self.algebra.monomial_degree(m) for m in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for m, c in self.terms.items():
            mono = self.algebra.format_monomial(m)
            mag = abs(c)
            body = format_rational(mag) if not mono else mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += f" {'-' if c < 0 else '+'} {body}"
        return out

    __repr__ = __str__


class PresentedCDGA:
    """Free graded-commutative algebra on generators with d given on generators."""

    def __init__(self, generators: Sequence[tuple[str, int]],
                 differential: Mapping[str, "Element | str"] | None = None,
                 parameters: Mapping[str, Fraction] | None = None):
        self.generators = tuple((str(n), int(d)) for n, d in generators)
        names = [n for n, _ in self.generators]
        if len(set(names)) != len(names):
            raise InvalidPresentation("duplicate generator names")
        for n, deg in self.generators:
            if deg < 1:
                raise InvalidPresentation(f"generator {n} has degree {deg} < 1")
        self.parameters = {k: Fraction(v) for k, v in (parameters or {}).items()}
        self._index = {n: i for i, n in enumerate(names)}
        self._odd = tuple(d % 2 == 1 for _, d in self.generators)
        self.d_gen: dict[str, Element] = {}
        for name, _deg in self.generators:
            value = (differential or {}).get(name, self.zero())
            if isinstance(value, str):
                value = parse_polynomial(value, self)
            elif value.algebra is not self:
                if value.algebra.generators != self.generators:
                    raise InvalidPresentation(f"d({name}) lives in a different algebra")
                value = Element(self, value.terms)
            self.d_gen[name] = value
        for name in (differential or {}):
            if name not in self._index:
                raise InvalidPresentation(f"differential given for unknown generator {name!r}")
        for name, deg in self.generators:
            degs = self.d_gen[name].degrees()
            if degs and degs != {deg + 1}:
                raise InvalidPresentation(
                    f"d({name}) must have degree {deg + 1}, got {sorted(degs)}", f"d({name}) = {self.d_gen[name]}")

    # -- monomials ------------------------------------------------------------

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.generators)

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * d for e, (_, d) in zip(m, self.generators))

    def multiply_monomials(self, m1: Monomial, m2: Monomial) -> tuple[int, Monomial] | None:
        odd = self._odd
        if any(odd[i] and m1[i] and m2[i] for i in range(len(m1))):
            return None
        swaps = 0
        later_odd_in_m1 = 0
        # count pairs (i in m1, j in m2) of odd generators with i > j
        for i in range(len(m1) - 1, -1, -1):
            if odd[i] and m2[i]:
                swaps += later_odd_in_m1
            if odd[i] and m1[i]:
                later_odd_in_m1 += 1
        return (-1 if swaps % 2 else 1), tuple(a + b for a, b in zip(m1, m2))

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for e, (n, _) in zip(m, self.generators):
            if e == 1:
                parts.append(n)
            elif e > 1:
                parts.append(f"{n}^{e}")
        return "*".join(parts)

    # -- elements -------------------------------------------------------------

    def zero(self) -> Element:
        return Element(self, {})

    def scalar(self, c) -> Element:
        return Element(self, {(0,) * len(self.generators): Fraction(c)})

    def gen(self, name: str) -> Element:
        if name not in self._index:
            raise InvalidPresentation(f"unknown generator {name!r}")
        m = [0] * len(self.generators)
        m[self._index[name]] = 1
        return Element(self, {tuple(m): Fraction(1)})

    def monomial(self, m: Monomial) -> Element:
        return Element(self, {m: Fraction(1)})

    def d(self, x: Element) -> Element:
        """Extend d from generators by the graded Leibniz rule."""
        out: dict[Monomial, Fraction] = {}
        n = len(self.generators)
        for m, c in x.terms.items():
            prefix_deg = 0
            for i in range(n):
                e = m[i]
                if not e:
                    continue
                name, deg = self.generators[i]
                prefix = tuple(m[j] if j < i else 0 for j in range(n))
                suffix = tuple(m[j] if j > i else 0 for j in range(n))
                rest = [0] * n
                rest[i] = e - 1
                # d(g^e) = e g^(e-1) dg  (odd g has e = 1)
                piece = self.monomial(prefix) * (self.monomial(tuple(rest)) * self.d_gen[name]) * self.monomial(suffix)
                factor = c * e * (-1 if prefix_deg % 2 else 1)
                for mm, cc in piece.terms.items():
                    out[mm] = out.get(mm, 0) + factor * cc
                prefix_deg += e * deg
        return Element(self, out)

    def check_d_squared(self, max_degree: int | None = None) -> None:
        for name, deg in self.generators:
            if max_degree is not None and deg > max_degree:
                continue
            dd = self.d(self.d_gen[name])
            if dd:
                raise InvalidPresentation("d^2 != 0", f"d(d({name})) = {dd}")

    def renamed(self, mapping: Mapping[str, str]) -> "PresentedCDGA":
        return self.permuted(self.names, mapping)

    def permuted(self, order: Sequence[str], mapping: Mapping[str, str] | None = None) -> "PresentedCDGA":
        """Same presentation with generators listed in ``order`` (and optionally renamed)."""
        mapping = dict(mapping or {})
        degs = dict(self.generators)
        new = PresentedCDGA([(mapping.get(n, n), degs[n]) for n in order], {}, self.parameters)
        images = {n: new.gen(mapping.get(n, n)) for n in self.names}
        diff = {mapping.get(n, n): self._transport(self.d_gen[n], images, new) for n in self.names}
        return PresentedCDGA(new.generators, diff, self.parameters)

    def _transport(self, x: Element, images: Mapping[str, Element], target: "PresentedCDGA") -> Element:
        out = target.zero()
        for m, c in x.terms.items():
            term = target.scalar(c)
            for e, name in zip(m, self.names):
                for _ in range(e):
                    term = term * images[name]
            out = out + term
        return out


def model_family(t) -> PresentedCDGA:
    """Lambda(w1 : 1, w2 : 2) with d w1 = 0, d w2 = t w1 w2."""
    a = PresentedCDGA([("w1", 1), ("w2", 2)], parameters={"t": Fraction(t)})
    return PresentedCDGA(a.generators, {"w2": a.gen("w1") * a.gen("w2") * Fraction(t)}, a.parameters)


# -- basis and ranks -------------------------------------------------------------


def enumerate_basis(a: PresentedCDGA, degree: int) -> list[Monomial]:
    out: list[Monomial] = []
    gens = a.generators

    def rec(i: int, remaining: int, acc: list[int]):
        if i == len(gens):
            if remaining == 0:
                out.append(tuple(acc))
            return
        deg = gens[i][1]
        emax = remaining // deg
        if deg % 2:
            emax = min(emax, 1)
        for e in range(emax + 1):
            acc.append(e)
            rec(i + 1, remaining - e * deg, acc)
            acc.pop()

    if degree >= 0:
        rec(0, degree, [])
    return sorted(out, reverse=True)


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank by fraction-free (integer) elimination."""
    mat = []
    for row in rows:
        den = 1
        for x in row:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
        ints = [int(Fraction(x) * den) for x in row]
        if any(ints):
            mat.append(ints)
    r = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        p = mat[r][col]
        for i in range(r + 1, len(mat)):
            f = mat[i][col]
            if f:
                new = [p * x - f * y for x, y in zip(mat[i], mat[r])]
                g = 0
                for x in new:
                    g = gcd(g, x)
                mat[i] = [x // g for x in new] if g > 1 else new
        r += 1
    return r


@dataclass(frozen=True)
class BettiTable:
    max_degree: int
    ranks: tuple[int, ...]  # Betti numbers b_0..b_D
    dims: tuple[int, ...]  # dim C^k
    differential_ranks: tuple[int, ...]  # rank d_k : C^k -> C^(k+1)

    def to_json_dict(self) -> dict:
        return {
            "betti": list(self.ranks),
            "differential_ranks": list(self.differential_ranks),
            "dims": list(self.dims),
            "max_degree": self.max_degree,
        }


def _table(a: PresentedCDGA, D: int, diff) -> BettiTable:
    bases = [enumerate_basis(a, k) for k in range(D + 2)]
    ranks_d = []
    for k in range(D + 1):
        target = {m: j for j, m in enumerate(bases[k + 1])}
        rows = []
        for m in bases[k]:
            img = diff(a.monomial(m))
            row = [Fraction(0)] * len(target)
            for mm, c in img.terms.items():
                row[target[mm]] = c
            rows.append(row)
        ranks_d.append(rank(rows))
    dims = tuple(len(bases[k]) for k in range(D + 1))
    betti_nums = tuple(dims[k] - ranks_d[k] - (ranks_d[k - 1] if k else 0) for k in range(D + 1))
    return BettiTable(D, betti_nums, dims, tuple(ranks_d))


def betti(a: PresentedCDGA, max_degree: int) -> BettiTable:
    a.check_d_squared(max_degree + 1)
    return _table(a, max_degree, a.d)


def betti_twisted(a: PresentedCDGA, lee: str, weight: int, max_degree: int) -> BettiTable:
    """Cohomology of d - weight * lee."""
    lee_el = a.gen(lee)
    if dict(a.generators)[lee] != 1 or a.d_gen[lee]:
        raise InvalidLeeForm(f"{lee} must be a closed generator of degree 1")
    a.check_d_squared(max_degree + 1)
    if weight == 0:
        return _table(a, max_degree, a.d)
    return _table(a, max_degree, lambda x: a.d(x) - lee_el * x * weight)


# -- text format -----------------------------------------------------------------


def parse_polynomial(text: str, a: PresentedCDGA, offset: int = 0) -> Element:
    try:
        node = parse_ast(text)
    except ParseError as exc:
        raise ParseError(str(exc).rsplit(" (at byte", 1)[0], exc.offset + offset) from None

    def leaf(n: Node):
        if n.op == "int":
            return a.scalar(n.args[0])
        name = n.args[0]
        if name in a.parameters:
            return a.scalar(a.parameters[name])
        if name in a.names:
            return a.gen(name)
        ev.error(f"unknown generator or parameter {name!r}", n)

    def call(n: Node):
        ev.error("functions are not allowed in presentations", n)

    def divide(x, y, n):
        if y.degrees() - {0} or not y:
            ev.error("can only divide by a nonzero rational", n)
        return x * (1 / next(iter(y.terms.values())))

    def power(x, e, n):
        if e < 0:
            ev.error("negative exponent", n)
        return x ** e

    def wedge(x, y):
        return x * y

    ev = _Evaluator(text, leaf, call, divide, power, wedge)
    try:
        return ev(node)
    except ParseError as exc:
        raise ParseError(str(exc).rsplit(" (at byte", 1)[0], exc.offset + offset) from None


def parse_presentation(text: str) -> PresentedCDGA:
    """Lines ``gen <name> : <degree>``, ``d <name> = <poly>``, ``param <p> = <rational>``."""
    gens: list[tuple[str, int]] = []
    diffs: list[tuple[int, str, str, int]] = []
    params: dict[str, Fraction] = {}
    for offset, line in _lines(text):
        head, _, rest = line.partition(" ")
        try:
            if head == "gen":
                name, colon, deg = rest.partition(":")
                if not colon or not name.strip().isidentifier():
                    raise ValueError
                gens.append((name.strip(), int(deg)))
            elif head == "param":
                name, eq, value = rest.partition("=")
                if not eq or not name.strip().isidentifier():
                    raise ValueError
                params[name.strip()] = Fraction(value.strip())
            elif head == "d":
                name, eq, poly = rest.partition("=")
                if not eq or not name.strip().isidentifier():
                    raise ValueError
                start = offset + _byte_offset(line, len(line) - len(poly))
                diffs.append((offset, name.strip(), poly, start))
            else:
                raise ValueError
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"malformed presentation line {line!r}", offset) from None
    base = PresentedCDGA(gens, {}, params)
    diff = {}
    for offset, name, poly, start in diffs:
        if name not in base.names:
            raise ParseError(f"differential for undeclared generator {name!r}", offset)
        diff[name] = parse_polynomial(poly, base, start)
    return PresentedCDGA(gens, diff, params)


def format_presentation(a: PresentedCDGA) -> str:
    lines = [f"param {k} = {format_rational(v)}" for k, v in sorted(a.parameters.items())]
    lines += [f"gen {n} : {d}" for n, d in a.generators]
    lines += [f"d {n} = {a.d_gen[n]}" for n in a.names if a.d_gen[n]]
    return "\n".join(lines) + "\n"

