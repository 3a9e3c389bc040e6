from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fixcheck.mv import (CHAIN, REAL, AlgebraMismatch, MVAlgebra, MVValue, complement, join,
                         leq, meet, ominus, oplus, parse_rational, top)

UNIT = MVAlgebra(REAL, 1)
C5 = MVAlgebra(CHAIN, 5)


def v(x, alg=UNIT):
    return alg.value(x)


def test_oplus_examples():
    assert oplus(v("1/2"), v("7/10")) == v(1)
    assert oplus(v("1/3"), v(0)) == v("1/3")
    assert oplus(v(3, C5), v(4, C5)) == v(5, C5)


def test_ominus_examples():
    assert ominus(v("3/10"), v("1/2")) == v(0)
    assert ominus(v("2/5"), v(0)) == v("2/5")
    assert ominus(v(4, C5), v(1, C5)) == v(3, C5)


def test_complement_examples():
    assert complement(v(0)) == v(1)
    assert complement(v("1/3")) == v("2/3")
    assert complement(complement(v(2, C5))) == v(2, C5)


def test_mismatched_algebras_are_rejected():
    with pytest.raises(AlgebraMismatch):
        oplus(v(1), v(1, C5))
    with pytest.raises(AlgebraMismatch):
        UNIT.coerce(v(1, C5))
    with pytest.raises(AlgebraMismatch):
        _ = v(0) <= v(0, MVAlgebra(REAL, 2))


def test_coerce_rejects_bad_values():
    with pytest.raises(TypeError):
        UNIT.coerce(0.5)
    with pytest.raises(ValueError):
        UNIT.coerce(Fraction(3, 2))
    with pytest.raises(ValueError):
        C5.coerce(Fraction(1, 2))
    with pytest.raises(ValueError):
        C5.coerce(-1)
    with pytest.raises(ValueError):
        MVAlgebra(CHAIN, 0)
    with pytest.raises(ValueError):
        MVAlgebra("boolean", 1)


def test_parse_rational():
    assert parse_rational("2/3") == Fraction(2, 3)
    assert parse_rational("4") == 4
    assert parse_rational("0.25") == Fraction(1, 4)
    for bad in ["1/0", "x", "1//2", ""]:
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_top_bottom_and_elements():
    assert top(C5).value == 5 and C5.bottom == 0
    assert C5.elements() == [0, 1, 2, 3, 4, 5]
    assert UNIT.top == 1
    with pytest.raises(ValueError):
        UNIT.elements()


@st.composite
def algebra_and_values(draw, n=3):
    kind = draw(st.sampled_from([REAL, CHAIN]))
    k = draw(st.integers(1, 6))
    alg = MVAlgebra(kind, k)
    if kind == CHAIN:
        vals = draw(st.lists(st.integers(0, k), min_size=n, max_size=n))
    else:
        vals = draw(st.lists(st.fractions(0, k, max_denominator=12), min_size=n, max_size=n))
    return alg, [MVValue(Fraction(x) if kind == REAL else x, alg) for x in vals]


@given(algebra_and_values())
def test_mv_axioms(data):
    alg, (x, y, z) = data
    zero, one = MVValue(alg.bottom, alg), top(alg)
    assert oplus(x, y) == oplus(y, x)
    assert oplus(oplus(x, y), z) == oplus(x, oplus(y, z))
    assert oplus(x, zero) == x
    assert complement(complement(x)) == x
    assert oplus(x, complement(zero)) == complement(zero) == one
    # the Łukasiewicz axiom
    assert oplus(complement(oplus(complement(x), y)), y) == \
        oplus(complement(oplus(complement(y), x)), x)
    assert ominus(x, y) == complement(oplus(complement(x), y))


@given(algebra_and_values())
def test_order_is_natural_and_lattice_ops(data):
    alg, (x, y, _) = data
    # x ⊑ y iff some z has x ⊕ z = y, and z = y ⊖ x works
    assert leq(x, y) == (oplus(x, ominus(y, x)) == y)
    assert join(x, y) == max(x, y, key=lambda m: m.value)
    assert meet(x, y) == min(x, y, key=lambda m: m.value)
    assert leq(ominus(x, y), x)
