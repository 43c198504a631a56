from fractions import Fraction

import pytest

from lcscalc.dga import (
    PresentedCDGA,
    betti,
    betti_twisted,
    enumerate_basis,
    format_presentation,
    model_family,
    parse_presentation,
    rank,
)
from lcscalc.errors import InvalidLeeForm, InvalidPresentation, ParseError

TORUS = PresentedCDGA([("e1", 1), ("e2", 1)])


def names(a, monomials):
    return [a.format_monomial(m) for m in monomials]


def test_enumerate_basis():
    m = model_family(0)
    assert names(m, enumerate_basis(m, 3)) == ["w1*w2"]
    assert names(m, enumerate_basis(m, 4)) == ["w2^2"]
    assert names(TORUS, enumerate_basis(TORUS, 2)) == ["e1*e2"]
    assert enumerate_basis(TORUS, 3) == []


def test_graded_commutativity():
    e1, e2 = TORUS.gen("e1"), TORUS.gen("e2")
    assert e1 * e2 == -(e2 * e1)
    assert not e1 * e1
    m = model_family(1)
    w1, w2 = m.gen("w1"), m.gen("w2")
    assert w1 * w2 == w2 * w1


def test_leibniz_on_model():
    m = model_family(Fraction(3, 2))
    w1, w2 = m.gen("w1"), m.gen("w2")
    assert m.d(w2) == w1 * w2 * Fraction(3, 2)
    assert m.d(w2 ** 3) == w1 * w2 ** 3 * Fraction(9, 2)
    assert not m.d(m.d(w2 ** 4))


def test_model_betti():
    assert betti(model_family(0), 10).ranks == (1,) * 11
    for t in (1, 2, Fraction(-1, 2)):
        assert betti(model_family(t), 10).ranks == (1, 1) + (0,) * 9


def test_circle():
    assert betti(PresentedCDGA([("e1", 1)]), 3).ranks == (1, 1, 0, 0)


def test_twisted():
    assert betti_twisted(TORUS, "e1", 1, 2).ranks == (0, 0, 0)
    assert betti_twisted(TORUS, "e1", 0, 2).ranks == (1, 2, 1) == betti(TORUS, 2).ranks
    assert betti_twisted(PresentedCDGA([("e1", 1)]), "e1", 1, 1).ranks == (0, 0)
    with pytest.raises(InvalidLeeForm):
        betti_twisted(model_family(1), "w2", 1, 3)


def test_twisted_weight_zero_matches():
    for a in (model_family(0), model_family(1), TORUS):
        assert betti_twisted(a, a.names[0], 0, 6) == betti(a, 6)


def test_rank_nullity():
    for a in (model_family(1), model_family(0), TORUS):
        tbl = betti(a, 8)
        for k in range(9):
            kernel = tbl.dims[k] - tbl.differential_ranks[k]
            assert tbl.ranks[k] == kernel - (tbl.differential_ranks[k - 1] if k else 0)


def test_zero_differential_gives_dims():
    a = PresentedCDGA([("a", 1), ("b", 2), ("c", 3)])
    tbl = betti(a, 7)
    assert tbl.ranks == tbl.dims


def test_renaming_and_permuting():
    m = model_family(2)
    ref = betti(m, 8).ranks
    assert betti(m.renamed({"w1": "u", "w2": "v"}), 8).ranks == ref
    assert betti(m.permuted(["w2", "w1"]), 8).ranks == ref


def test_degree_clash():
    with pytest.raises(InvalidPresentation):
        parse_presentation("gen x : 2\ngen y : 2\nd x = x*y\n")


def test_d_squared_witness():
    a = parse_presentation("gen a : 1\ngen x : 2\nd a = x\nd x = a*x\n")
    with pytest.raises(InvalidPresentation) as err:
        betti(a, 3)
    assert err.value.witness == "d(d(a)) = a*x"


def test_presentation_round_trip():
    text = "param t = -1/2\ngen w1 : 1\ngen w2 : 2\nd w2 = t*w1*w2\n"
    a = parse_presentation(text)
    assert a.d_gen["w2"] == a.gen("w1") * a.gen("w2") * Fraction(-1, 2)
    again = parse_presentation(format_presentation(a))
    assert again.generators == a.generators
    assert {k: v.terms for k, v in again.d_gen.items()} == {k: v.terms for k, v in a.d_gen.items()}


def test_presentation_parse_error():
    with pytest.raises(ParseError) as err:
        parse_presentation("gen a : 1\nd a = a +\n")
    assert err.value.offset == len("gen a : 1\nd a = a +")
    with pytest.raises(ParseError):
        parse_presentation("generator a : 1\n")


def test_rank():
    assert rank([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 1
    assert rank([[Fraction(1, 3), 0], [0, Fraction(-2, 7)]]) == 2
    assert rank([]) == 0
