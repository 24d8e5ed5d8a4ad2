import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from relaxforge.errors import UnsupportedDivisionError
from relaxforge.scalar import Scalar, squarefree_decompose


def S(*terms):
    return Scalar(tuple((Fraction(c), r) for c, r in terms))


def test_radicand_reduction():
    assert Scalar.sqrt(2) * Scalar.sqrt(8) == Scalar.rational(4)


def test_cancellation():
    assert S((1, 1), (1, 3)) + Scalar.rational(-1) == S((1, 3))


def test_amplitude_square():
    # (sqrt(2)/4)^2 = 1/8
    amp = S((Fraction(1, 4), 2))
    assert amp * amp == Scalar.rational(Fraction(1, 8))


def test_sqrt_of_fraction_normalizes_denominator():
    # sqrt(p/q) is stored as sqrt(p*q)/q
    assert Scalar.sqrt(Fraction(1, 2)) == S((Fraction(1, 2), 2))
    assert Scalar.sqrt(Fraction(9, 4)) == Scalar.rational(Fraction(3, 2))
    assert Scalar.sqrt(Fraction(3, 5)) == S((Fraction(1, 5), 15))


def test_squarefree_decompose():
    assert squarefree_decompose(1) == (1, 1)
    assert squarefree_decompose(16) == (4, 1)
    assert squarefree_decompose(18) == (3, 2)
    assert squarefree_decompose(360) == (6, 10)


def test_canonical_form_sorted_no_zero_terms():
    s = Scalar([(Fraction(1), 12), (Fraction(-2), 3)])
    assert s.terms == ((Fraction(0), 1),) or s.terms == ()
    t = Scalar([(Fraction(1), 8), (Fraction(1), 2)])
    assert t.terms == ((Fraction(3), 2),)


def test_zero_is_empty_term_list():
    assert (Scalar.sqrt(2) - Scalar.sqrt(2)).terms == ()
    assert not Scalar.rational(0)


def test_division_single_term():
    c = Scalar.sqrt(Fraction(5, 2))
    assert c / c == Scalar.rational(1)
    assert Scalar.rational(1) / Scalar.sqrt(2) == S((Fraction(1, 2), 2))
    with pytest.raises(UnsupportedDivisionError):
        Scalar.rational(1) / S((1, 1), (1, 2))
    with pytest.raises(UnsupportedDivisionError):
        Scalar.rational(1) / Scalar.rational(0)


def test_rationality_flags():
    assert Scalar.rational(Fraction(3, 7)).is_rational()
    assert Scalar.rational(0).is_rational()
    assert not Scalar.sqrt(3).is_rational()
    assert Scalar.rational(Fraction(3, 7)).as_fraction() == Fraction(3, 7)
    with pytest.raises(ValueError):
        Scalar.sqrt(3).as_fraction()


def _random_scalar(rng):
    nterms = rng.randint(0, 3)
    return Scalar(
        [
            (Fraction(rng.randint(-6, 6), rng.randint(1, 5)), rng.randint(1, 30))
            for _ in range(nterms)
        ]
    )


def test_ring_axioms_on_random_triples():
    rng = random.Random(20240817)
    for _ in range(1000):
        a, b, c = (_random_scalar(rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


@given(
    st.integers(min_value=1, max_value=400),
    st.integers(min_value=1, max_value=400),
)
def test_sqrt_product_matches_decomposition(m, n):
    assert Scalar.sqrt(m) * Scalar.sqrt(n) == Scalar.sqrt(m * n)


def test_approx_and_str():
    c = S((Fraction(1, 2), 1), (Fraction(-1, 3), 3))
    assert abs(c.approx() - (0.5 - 3 ** 0.5 / 3)) < 1e-12
    assert str(Scalar.rational(0)) == "0"
    assert str(S((1, 2))) == "sqrt(2)"
    assert str(S((Fraction(-1, 2), 1), (2, 5))) == "-1/2 + 2*sqrt(5)"
