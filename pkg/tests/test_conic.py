import random
from fractions import Fraction

import pytest

from relaxforge.conic import (
    DualWitness,
    PrimalSolution,
    relax,
    verify_dual,
    verify_primal,
)
from relaxforge.qphp import php_negation_hqfp, qphp_dual_witness
from relaxforge.symmatrix import SymMatrixQ


def bijection_solution_22():
    # lam=1, v[1,1]=1, v[2,2]=1, rest 0
    x = [Fraction(0)] * 5
    x[0] = Fraction(1)
    x[1] = Fraction(1)  # v[1,1]
    x[4] = Fraction(1)  # v[2,2]
    return PrimalSolution.from_rank1(x)


def test_relax_is_payload_identity():
    p = php_negation_hqfp(2, 2)
    r = relax(p)
    assert r.mode == "sdfp"
    assert r.constraints is p.constraints
    assert relax(r) is r


def test_relax_32_mode():
    assert relax(php_negation_hqfp(3, 2)).mode == "sdfp"


def test_php_22_bijection_accepts():
    p = php_negation_hqfp(2, 2)
    report = verify_primal(p, bijection_solution_22())
    assert report.ok


def test_php_11_identity_assignment():
    p = php_negation_hqfp(1, 1)
    report = verify_primal(p, PrimalSolution.from_rank1([1, 1]))
    assert report.ok


def test_rank1_lifts_to_sdfp():
    p = php_negation_hqfp(2, 2)
    x = bijection_solution_22().rank1
    z = SymMatrixQ([[x[i] * x[j] for j in range(5)] for i in range(5)])
    report = verify_primal(relax(p), PrimalSolution.from_gram(z))
    assert report.ok


def _random_psd_gram(rng, n):
    m = rng.randint(1, n)
    a = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(m)]
    return SymMatrixQ(
        [[sum(a[k][i] * a[k][j] for k in range(m)) for j in range(n)] for i in range(n)]
    )


def test_php_32_rejects_every_submitted_gram():
    p = relax(php_negation_hqfp(3, 2))
    rng = random.Random(3)
    for _ in range(20):
        z = _random_psd_gram(rng, p.n)
        report = verify_primal(p, PrimalSolution.from_gram(z))
        assert not report.ok


def test_dual_witness_32_accepts():
    p = relax(php_negation_hqfp(3, 2))
    w = qphp_dual_witness(3, 2)
    report = verify_dual(p, w)
    assert report.ok
    assert report.details["objective"] == Fraction(-1, 2)


def test_dual_template_at_boundary_rejects():
    # p = h = 2: same template, objective 1 - p/h = 0, not a refutation
    p = relax(php_negation_hqfp(2, 2))
    w = []
    for c in p.constraints:
        if c.label == "y0:norm":
            w.append(Fraction(0))  # 1 - p/h
        elif c.label.startswith("y1a"):
            w.append(Fraction(1, 2))
        elif c.label.startswith("y1b"):
            w.append(Fraction(-1))
        elif c.label.startswith("y2"):
            w.append(Fraction(0))
        else:
            w.append(Fraction(1))
    report = verify_dual(p, DualWitness.of(w))
    assert not report.ok
    assert report.details["objective"] == 0


def test_zero_witness_rejects():
    p = relax(php_negation_hqfp(3, 2))
    report = verify_dual(p, DualWitness.of([0] * p.m))
    assert not report.ok


def test_weak_duality_excludes_random_grams():
    rng = random.Random(5)
    for (pp, hh) in [(3, 2), (4, 3), (5, 2)]:
        prob = relax(php_negation_hqfp(pp, hh))
        assert verify_dual(prob, qphp_dual_witness(pp, hh)).ok
        for _ in range(50):
            z = _random_psd_gram(rng, prob.n)
            assert not verify_primal(prob, PrimalSolution.from_gram(z)).ok


def test_mode_and_dimension_guards():
    p = php_negation_hqfp(2, 2)
    with pytest.raises(ValueError):
        verify_primal(p, PrimalSolution.from_gram(SymMatrixQ.identity(p.n)))
    with pytest.raises(ValueError):
        verify_primal(relax(p), bijection_solution_22())
    with pytest.raises(ValueError):
        verify_dual(relax(p), DualWitness.of([1]))
