import random
from fractions import Fraction

import pytest

from relaxforge.symmatrix import (
    LdlFactorization,
    NegativeWitness,
    SymMatrixQ,
    psd_certificate,
    weighted_sum,
)


def test_identity_certificate():
    cert = psd_certificate(SymMatrixQ.identity(2))
    assert isinstance(cert, LdlFactorization)
    assert cert.diag == (Fraction(1), Fraction(1))
    assert cert.rank == 2


def test_indefinite_2x2():
    m = SymMatrixQ([[1, 2], [2, 1]])
    cert = psd_certificate(m)
    assert isinstance(cert, NegativeWitness)
    assert cert.value < 0
    assert m.quad_form(cert.vector) == cert.value
    # the stated hand witness also certifies
    assert m.quad_form([1, -1]) == Fraction(-2)


def test_flower_gram_rank_deficient_psd():
    # hand LDL of the d=3, a=1, b=-1/2 flower Gram: D = (1, 3/4, 0)
    half = Fraction(-1, 2)
    m = SymMatrixQ([[1, half, half], [half, 1, half], [half, half, 1]])
    cert = psd_certificate(m)
    assert isinstance(cert, LdlFactorization)
    assert cert.diag == (Fraction(1), Fraction(3, 4), Fraction(0))
    assert cert.rank == 2
    assert cert.reconstruct() == m


def test_zero_pivot_nonzero_row_is_refuted():
    m = SymMatrixQ([[0, 1], [1, 0]])
    cert = psd_certificate(m)
    assert isinstance(cert, NegativeWitness)
    assert cert.value < 0


def _random_fraction(rng, span=6):
    return Fraction(rng.randint(-span, span), rng.randint(1, 4))


def _random_gram(rng):
    n = rng.randint(1, 6)
    m = rng.randint(1, 6)
    a = [[_random_fraction(rng) for _ in range(n)] for _ in range(m)]
    rows = [
        [sum(a[k][i] * a[k][j] for k in range(m)) for j in range(n)] for i in range(n)
    ]
    return SymMatrixQ(rows)


def test_random_grams_factor_and_reconstruct():
    rng = random.Random(7)
    for _ in range(200):
        m = _random_gram(rng)
        cert = psd_certificate(m)
        assert isinstance(cert, LdlFactorization)
        assert all(d >= 0 for d in cert.diag)
        assert cert.reconstruct() == m


def test_random_planted_negative_direction():
    rng = random.Random(8)
    for _ in range(200):
        g = _random_gram(rng)
        n = g.n
        v = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
        while not any(v):
            v = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
        # subtract a rank-1 with weight beyond g's value in direction v
        q = g.quad_form(v)
        outer = SymMatrixQ([[v[i] * v[j] for j in range(n)] for i in range(n)])
        vv = sum(x * x for x in v)
        m = g + outer.scale(Fraction(-(q + 1), vv * vv))
        assert m.quad_form(v) == Fraction(-1)
        cert = psd_certificate(m)
        assert isinstance(cert, NegativeWitness)
        assert cert.value < 0
        assert m.quad_form(cert.vector) == cert.value


def test_weighted_sum_and_frobenius():
    a = SymMatrixQ([[1, 0], [0, 0]])
    b = SymMatrixQ([[0, Fraction(1, 2)], [Fraction(1, 2), 0]])
    s = weighted_sum([a, b], [Fraction(2), Fraction(4)])
    assert s == SymMatrixQ([[2, 2], [2, 0]])
    assert a.frobenius(s) == Fraction(2)
    assert b.frobenius(s) == Fraction(2)


def test_symmetry_enforced():
    with pytest.raises(ValueError):
        SymMatrixQ([[1, 2], [3, 1]])
