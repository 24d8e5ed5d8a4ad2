"""Degree-2 sum-of-squares refutations extracted from dual witnesses.

Writing a PSD solution candidate as Z = X^T X for a matrix X of scalar
variables x[k][j] turns each constraint <A_i, Z> = b_i into a quadratic
polynomial.  A verified dual witness w yields the identity

    sum_i (-w_i) * (<A_i, X^T X> - b_i)  +  sum_{k,r} D_k * (L-column_k . X-row_r)^2
        =  <w, b>  <  0 ,

with L, D taken from the exact LDL^T factorization of sum_i w_i A_i.  All
certificate data stays rational; the verifier re-expands the identity fully
symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .conic import DualWitness, FeasibilityProblem, verify_dual
from .polynomial import Polynomial
from .symmatrix import LdlFactorization

# Variable keys are (row, col) positions of the scalar factor matrix X.


def constraint_polynomial(matrix, rhs: Fraction, n: int) -> Polynomial:
    """<A, X^T X> - b   as a polynomial in the n*n entries of X."""
    terms: dict[tuple, Fraction] = {}
    for (j1, j2), a in matrix.nonzeros().items():
        for k in range(n):
            mono = tuple(sorted(((k, j1), (k, j2))))
            v = terms.get(mono, Fraction(0)) + a
            if v:
                terms[mono] = v
            elif mono in terms:
                del terms[mono]
    if rhs:
        terms[()] = terms.get((), Fraction(0)) - rhs
        if not terms[()]:
            del terms[()]
    p = Polynomial()
    p.terms = terms
    return p


@dataclass(frozen=True)
class WeightedSquare:
    weight: Fraction
    form: tuple[tuple[tuple[int, int], Fraction], ...]  # linear form: var -> coeff

    def polynomial(self) -> Polynomial:
        p = Polynomial()
        p.terms = {(var,): c for var, c in self.form}
        return p


@dataclass(frozen=True)
class Degree2SoSCert:
    n: int
    weights: tuple[Fraction, ...]  # coefficients on the constraint polynomials (= -w)
    squares: tuple[WeightedSquare, ...]
    constant: Fraction  # claimed value of the full expansion; negative


def sos_from_dual(problem: FeasibilityProblem, witness: DualWitness) -> Degree2SoSCert:
    """Turn a verified dual witness into an explicit degree-2 refutation.

    One weighted square per (factorization column, X-row) pair keeps every
    coefficient rational; the pivots D_k absorb the square roots.
    """
    report = verify_dual(problem, witness)
    if not report.ok:
        raise ValueError(f"dual witness not verified: {report.summary()}")
    cert = report.details["certificate"]
    assert isinstance(cert, LdlFactorization)
    n = problem.n
    squares = []
    for k, d in enumerate(cert.diag):
        if not d:
            continue
        column = [(j, cert.lower[j][k]) for j in range(n) if cert.lower[j][k]]
        for r in range(n):
            form = tuple(((r, j), c) for j, c in column)
            squares.append(WeightedSquare(weight=d, form=form))
    value = witness.objective(problem)
    return Degree2SoSCert(
        n=n,
        weights=tuple(-w for w in witness.weights),
        squares=tuple(squares),
        constant=value,
    )


def verify_sos(cert: Degree2SoSCert, problem: FeasibilityProblem) -> tuple[bool, Optional[tuple]]:
    """Fully symbolic check that the certificate expands to its claimed constant.

    Returns (ok, first_differing_monomial).  A negative claimed constant that
    expands correctly refutes the problem: any solution would make the linear
    combination zero and the squares non-negative.  Terms accumulate into one
    dict so the expansion stays linear in the total monomial count.
    """
    if len(cert.weights) != problem.m:
        return False, None
    n = problem.n
    acc: dict[tuple, Fraction] = {}

    def bump(mono: tuple, value: Fraction) -> None:
        v = acc.get(mono, Fraction(0)) + value
        if v:
            acc[mono] = v
        elif mono in acc:
            del acc[mono]

    for coeff, c in zip(cert.weights, problem.constraints):
        if not coeff:
            continue
        for (j1, j2), a in c.matrix.nonzeros().items():
            a = a * coeff
            for k in range(n):
                v1, v2 = (k, j1), (k, j2)
                bump((v1, v2) if v1 <= v2 else (v2, v1), a)
        if c.rhs:
            bump((), -coeff * c.rhs)
    get = acc.get
    for sq in cert.squares:
        if sq.weight < 0:
            return False, None
        form = sorted(sq.form)
        w = sq.weight
        w2 = 2 * w
        for a, (v1, c1) in enumerate(form):
            bump((v1, v1), w * c1 * c1)
            wc = w2 * c1
            for v2, c2 in form[a + 1 :]:
                mono = (v1, v2)
                v = get(mono)
                v = wc * c2 if v is None else v + wc * c2
                if v:
                    acc[mono] = v
                else:
                    del acc[mono]
    expected = {(): cert.constant} if cert.constant else {}
    if acc == expected and cert.constant < 0:
        return True, None
    keys = set(acc) | set(expected)
    diff = [
        m for m in keys if acc.get(m, Fraction(0)) != (cert.constant if m == () else Fraction(0))
    ]
    surviving = [m for m in diff if m]
    return False, (min(surviving) if surviving else None)
