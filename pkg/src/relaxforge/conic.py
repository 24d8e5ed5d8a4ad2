"""Feasibility problems over symmetric matrices, and their exact verification.

One constraint payload serves two interpretations: at rank 1 the problem asks
for a rational vector x with  x^T A_i x = b_i  (a homogeneous quadratic
feasibility problem); over the PSD cone it asks for a Gram matrix Z with
<A_i, Z> = b_i.  Relaxation is just the change of interpretation.

Infeasibility of the relaxed problem is certified by a dual witness: rational
weights w with  sum_i w_i A_i  PSD and <w, b> < 0.  Weak duality then rules
out every primal solution, of any rank.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .reports import VerificationReport
from .space import Vec, gram_of
from .symmatrix import LdlFactorization, SymMatrixQ, psd_certificate, weighted_sum

HQFP = "hqfp"
SDFP = "sdfp"


@dataclass(frozen=True)
class Constraint:
    matrix: SymMatrixQ
    rhs: Fraction
    label: str


@dataclass(frozen=True)
class FeasibilityProblem:
    n: int
    mode: str
    constraints: tuple[Constraint, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if self.mode not in (HQFP, SDFP):
            raise ValueError(f"unknown mode {self.mode!r}")
        if len(self.labels) != self.n:
            raise ValueError("need one variable label per dimension")
        for c in self.constraints:
            if c.matrix.n != self.n:
                raise ValueError(f"constraint {c.label!r} has wrong dimension")

    @property
    def m(self) -> int:
        return len(self.constraints)

    def rhs_vector(self) -> tuple[Fraction, ...]:
        return tuple(c.rhs for c in self.constraints)

    def weight_of(self, label: str, weights: Sequence[Fraction]) -> Fraction:
        for c, w in zip(self.constraints, weights):
            if c.label == label:
                return w
        raise KeyError(label)


def relax(problem: FeasibilityProblem) -> FeasibilityProblem:
    """Drop the rank-1 restriction; the payload is untouched."""
    if problem.mode == SDFP:
        return problem
    return FeasibilityProblem(
        n=problem.n, mode=SDFP, constraints=problem.constraints, labels=problem.labels
    )


@dataclass(frozen=True)
class PrimalSolution:
    """Either a rank-1 rational vector, a vector family, or an explicit Gram."""

    rank1: Optional[tuple[Fraction, ...]] = None
    vectors: Optional[tuple[Vec, ...]] = None
    gram: Optional[SymMatrixQ] = None

    @classmethod
    def from_rank1(cls, x: Sequence[Union[int, Fraction]]) -> "PrimalSolution":
        return cls(rank1=tuple(Fraction(v) for v in x))

    @classmethod
    def from_vectors(cls, vecs: Sequence[Vec]) -> "PrimalSolution":
        return cls(vectors=tuple(vecs))

    @classmethod
    def from_gram(cls, z: SymMatrixQ) -> "PrimalSolution":
        return cls(gram=z)


@dataclass(frozen=True)
class DualWitness:
    weights: tuple[Fraction, ...]

    @classmethod
    def of(cls, w: Sequence[Union[int, Fraction]]) -> "DualWitness":
        return cls(weights=tuple(Fraction(v) for v in w))

    def matrix(self, problem: FeasibilityProblem) -> SymMatrixQ:
        if len(self.weights) != problem.m:
            raise ValueError("witness length does not match constraint count")
        return weighted_sum((c.matrix for c in problem.constraints), self.weights)

    def objective(self, problem: FeasibilityProblem) -> Fraction:
        if len(self.weights) != problem.m:
            raise ValueError("witness length does not match constraint count")
        return sum(
            (w * c.rhs for w, c in zip(self.weights, problem.constraints)), Fraction(0)
        )


def _rank1_gram(x: Sequence[Fraction], n: int) -> SymMatrixQ:
    return SymMatrixQ([[x[i] * x[j] for j in range(n)] for i in range(n)])


def verify_primal(problem: FeasibilityProblem, solution: PrimalSolution) -> VerificationReport:
    """Check a claimed solution constraint by constraint, exactly.

    Rank-1 vectors are admitted only in HQFP mode; vector families and Gram
    matrices only in SDFP mode.  Submitted Grams are additionally PSD-checked,
    guarding hand-entered matrices.
    """
    report = VerificationReport()
    if solution.rank1 is not None:
        if problem.mode != HQFP:
            raise ValueError("rank-1 solutions apply to HQFP mode only")
        x = solution.rank1
        if len(x) != problem.n:
            raise ValueError("solution dimension mismatch")
        z = _rank1_gram(x, problem.n)
    else:
        if problem.mode != SDFP:
            raise ValueError("vector/Gram solutions apply to SDFP mode only")
        if solution.vectors is not None:
            if len(solution.vectors) != problem.n:
                raise ValueError("solution dimension mismatch")
            z = gram_of(list(solution.vectors))
        elif solution.gram is not None:
            z = solution.gram
            if z.n != problem.n:
                raise ValueError("solution dimension mismatch")
        else:
            raise ValueError("empty primal solution")
        cert = psd_certificate(z)
        report.tick()
        if not isinstance(cert, LdlFactorization):
            report.fail(
                "psd", "gram", f"witness direction has value {cert.value}"
            )
    for c in problem.constraints:
        report.tick()
        got = c.matrix.frobenius(z)
        if got != c.rhs:
            report.fail("constraint", c.label, f"got {got}, want {c.rhs}")
    report.details["gram"] = z
    return report


def verify_dual(problem: FeasibilityProblem, witness: DualWitness) -> VerificationReport:
    """Accept iff  sum_i w_i A_i  is PSD and <w, b> < 0.

    Acceptance certifies infeasibility of the SDFP by weak duality, and hence
    of the underlying HQFP.
    """
    report = VerificationReport()
    if len(witness.weights) != problem.m:
        raise ValueError("witness length does not match constraint count")
    value = witness.objective(problem)
    report.details["objective"] = value
    report.tick()
    if value >= 0:
        report.fail("objective", "<w,b>", f"got {value}, need < 0")
    m = witness.matrix(problem)
    cert = psd_certificate(m)
    report.details["matrix"] = m
    report.details["certificate"] = cert
    report.tick()
    if isinstance(cert, LdlFactorization):
        report.details["rank"] = cert.rank
    else:
        report.fail("psd", "sum w_i A_i", f"direction with value {cert.value}")
    return report
