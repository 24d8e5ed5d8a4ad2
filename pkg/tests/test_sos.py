import random
from fractions import Fraction

import pytest

from relaxforge.conic import relax
from relaxforge.polynomial import Polynomial
from relaxforge.qphp import php_negation_hqfp, qphp_dual_witness
from relaxforge.sos import Degree2SoSCert, sos_from_dual, verify_sos


def _random_poly(rng, nvars=4, nterms=4):
    p = Polynomial()
    terms = {}
    for _ in range(nterms):
        deg = rng.randint(0, 2)
        mono = tuple(sorted(rng.randrange(nvars) for _ in range(deg)))
        terms[mono] = terms.get(mono, Fraction(0)) + Fraction(rng.randint(-5, 5))
    return Polynomial(terms)


def test_polynomial_distributivity():
    rng = random.Random(31)
    for _ in range(500):
        f, g, h = (_random_poly(rng) for _ in range(3))
        assert (f + g) * h == f * h + g * h


def test_polynomial_basics():
    x = Polynomial.variable("x")
    y = Polynomial.variable("y")
    assert (x + y).square() == x * x + 2 * x * y + y * y
    assert (x - x).is_zero()
    assert Polynomial.constant(3).constant_term() == 3
    assert (x * y).degree() == 2


@pytest.mark.parametrize(
    "p,h,constant",
    [(3, 2, Fraction(-1, 2)), (4, 3, Fraction(-1, 3)), (5, 2, Fraction(-3, 2))],
)
def test_certificate_constants(p, h, constant):
    prob = relax(php_negation_hqfp(p, h))
    cert = sos_from_dual(prob, qphp_dual_witness(p, h))
    assert cert.constant == constant
    ok, diff = verify_sos(cert, prob)
    assert ok and diff is None


def test_expansion_variable_count_32():
    prob = relax(php_negation_hqfp(3, 2))
    cert = sos_from_dual(prob, qphp_dual_witness(3, 2))
    assert cert.n == 7  # 49 scalar variables in the factor matrix
    vars_seen = {v for sq in cert.squares for v, _ in sq.form}
    assert all(0 <= k < 7 and 0 <= j < 7 for k, j in vars_seen)


def test_perturbed_weight_rejected_with_monomial():
    prob = relax(php_negation_hqfp(3, 2))
    cert = sos_from_dual(prob, qphp_dual_witness(3, 2))
    weights = list(cert.weights)
    weights[3] += 1
    bad = Degree2SoSCert(
        n=cert.n, weights=tuple(weights), squares=cert.squares, constant=cert.constant
    )
    ok, monomial = verify_sos(bad, prob)
    assert not ok
    assert monomial is not None and len(monomial) == 2


def test_round_trip_full_sweep():
    for p in range(2, 11):
        for h in range(1, p):
            prob = relax(php_negation_hqfp(p, h))
            cert = sos_from_dual(prob, qphp_dual_witness(p, h))
            assert cert.constant == 1 - Fraction(p, h)
            ok, _ = verify_sos(cert, prob)
            assert ok


def test_unverified_dual_is_refused():
    prob = relax(php_negation_hqfp(2, 2))
    from relaxforge.conic import DualWitness

    with pytest.raises(ValueError):
        sos_from_dual(prob, DualWitness.of([0] * prob.m))
