"""Pigeonhole constructions: feasibility problem, dual refutation, tight
geometric families, symmetrization, and the iterated two-hole bound.

A pigeon family is p unit initial vectors v_i, each split into h mutually
orthogonal parts v_{i,j}.  With fewer holes than pigeons, two parts in some
hole must overlap; the modules below realize that statement as an exact
feasibility problem, certify its infeasibility with an explicit dual witness,
and construct families meeting the quantitative bound with equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence, Union

from .conic import HQFP, Constraint, DualWitness, FeasibilityProblem
from .errors import NotARefutationError
from .reports import VerificationReport
from .scalar import ZERO
from .space import InnerProductSpace, Vec, inner, norm2, rational_inner
from .symmatrix import SymMatrixQ


@dataclass(frozen=True)
class PigeonFamily:
    space: object
    p: int
    h: int
    initial: tuple[Vec, ...]  # v_i
    parts: tuple[tuple[Vec, ...], ...]  # parts[i][j] = v_{i,j}


def verify_family(family: PigeonFamily) -> VerificationReport:
    """Unit norms, the two sum identities, and within-pigeon orthogonality.

    The vector-sum condition  sum_j v_{i,j} = v_i  is equivalent, under the
    orthogonality of the parts, to the two inner-product identities checked
    here, which is what keeps the constraints linear in the Gram.
    """
    report = VerificationReport()
    one = Fraction(1)
    for i in range(family.p):
        vi = family.initial[i]
        ni = inner(vi, vi)
        report.tick()
        if ni != one:
            report.fail("norm", f"pigeon {i}", f"|v_{i}|^2 = {ni}")
        parts = family.parts[i]
        sum_a = reduce(lambda s, v: s + inner(v, v), parts, ZERO)
        report.tick()
        if sum_a != ni:
            report.fail("sum-a", f"pigeon {i}", f"sum of part norms {sum_a} != {ni}")
        sum_b = reduce(lambda s, v: s + inner(v, vi), parts, ZERO)
        report.tick()
        if sum_b != ni:
            report.fail("sum-b", f"pigeon {i}", f"sum of overlaps {sum_b} != {ni}")
        for j in range(family.h):
            for jp in range(j + 1, family.h):
                report.tick()
                val = inner(parts[j], parts[jp])
                if val:
                    report.fail(
                        "orthogonality", f"pigeon {i} holes ({j},{jp})", f"got {val}"
                    )
    return report


def _var_index(p: int, h: int, i: int, j: int) -> int:
    return 1 + i * h + j


def php_negation_hqfp(p: int, h: int) -> FeasibilityProblem:
    """Quadratic feasibility problem whose rank-1 solutions are classical
    pigeon-to-hole assignments; variables are lam and the parts v[i,j].

    Constraint labels carry the dual-variable names y0 / y1a / y1b / y2 / y3.
    """
    if p < 1 or h < 1:
        raise ValueError("need p, h >= 1")
    n = 1 + p * h
    labels = ["lam"] + [f"v[{i + 1},{j + 1}]" for i in range(p) for j in range(h)]
    half = Fraction(1, 2)
    constraints = [
        Constraint(SymMatrixQ.from_entries(n, {(0, 0): Fraction(1)}), Fraction(1), "y0:norm")
    ]
    for i in range(p):
        entries = {(_var_index(p, h, i, j),) * 2: Fraction(1) for j in range(h)}
        entries[(0, 0)] = Fraction(-1)
        constraints.append(
            Constraint(SymMatrixQ.from_entries(n, entries), Fraction(0), f"y1a[{i + 1}]")
        )
    for i in range(p):
        entries = {(0, _var_index(p, h, i, j)): half for j in range(h)}
        entries[(0, 0)] = Fraction(-1)
        constraints.append(
            Constraint(SymMatrixQ.from_entries(n, entries), Fraction(0), f"y1b[{i + 1}]")
        )
    for i in range(p):
        for j in range(h):
            for jp in range(j + 1, h):
                entries = {(_var_index(p, h, i, j), _var_index(p, h, i, jp)): half}
                constraints.append(
                    Constraint(
                        SymMatrixQ.from_entries(n, entries),
                        Fraction(0),
                        f"y2[{i + 1},{j + 1},{jp + 1}]",
                    )
                )
    for j in range(h):
        for i in range(p):
            for ip in range(i + 1, p):
                entries = {(_var_index(p, h, i, j), _var_index(p, h, ip, j)): half}
                constraints.append(
                    Constraint(
                        SymMatrixQ.from_entries(n, entries),
                        Fraction(0),
                        f"y3[{j + 1},{i + 1},{ip + 1}]",
                    )
                )
    return FeasibilityProblem(n=n, mode=HQFP, constraints=tuple(constraints), labels=tuple(labels))


def qphp_dual_witness(p: int, h: int) -> DualWitness:
    """Explicit dual refutation of the relaxed problem, objective 1 - p/h.

    The produced matrix W has first row/column -1/h on the parts, 1/h on the
    part diagonal, and 1/h between distinct pigeons sharing a hole.  Because
    quadratic monomials are encoded with 1/2 on each symmetric entry, weights
    on purely off-diagonal constraints carry a factor 2 relative to the
    matrix entries they produce.
    """
    if p <= h:
        raise NotARefutationError(
            f"objective 1 - p/h = {1 - Fraction(p, h)} is non-negative for p <= h"
        )
    w = [Fraction(1) - Fraction(p, h)]
    w += [Fraction(1, h)] * p  # y1a: part-diagonal entries
    w += [Fraction(-2, h)] * p  # y1b: first row/column entries
    w += [Fraction(0)] * (p * h * (h - 1) // 2)  # y2 unused
    w += [Fraction(2, h)] * (h * p * (p - 1) // 2)  # y3: shared-hole entries
    return DualWitness.of(w)


def classical_family(p: int, h: int, assignment: Sequence[int]) -> PigeonFamily:
    """Identical unit pigeons placed classically: pigeon i fully in hole
    assignment[i]."""
    if len(assignment) != p or any(not 0 <= a < h for a in assignment):
        raise ValueError("assignment must give a hole index per pigeon")
    space = InnerProductSpace("classical")
    lam = space.add_unit("lam")
    unit = Vec.of_atom(space, lam)
    zero = space.zero_vec()
    initial = tuple(unit for _ in range(p))
    parts = tuple(
        tuple(unit if assignment[i] == j else zero for j in range(h)) for i in range(p)
    )
    return PigeonFamily(space=space, p=p, h=h, initial=initial, parts=parts)


def tight_example(p: int, h: int, beta: Union[int, Fraction]) -> PigeonFamily:
    """Family meeting the quantitative overlap bound with equality.

    Three flowers drive the construction: initial pigeons with mutual overlap
    beta; hole directions s_j summing to zero; and pigeon directions t_i whose
    common overlap is chosen so every within-hole part overlap lands exactly on
    alpha = (beta - (h-1)/(p-1)) / h^2.  The residual part of v_{i,j} is the
    atom t_i (x) s_j, with the 1/(1/h - 1/h^2) normalization carried as a
    rational factor on the tensor Gram so that every inner product stays
    rational.
    """
    beta = Fraction(beta)
    if h < 1 or p <= h:
        raise ValueError("need p > h >= 1")
    if beta > 1 or (p > 1 and beta < Fraction(-1, p - 1)):
        raise ValueError(f"beta={beta} outside [-1/(p-1), 1]")
    space = InnerProductSpace(f"tight[{p},{h}]")
    space.add_flower("init", p, Fraction(1), beta)
    initial = tuple(Vec.of_atom(space, space.atom("init", i)) for i in range(p))
    if h == 1:
        parts = tuple((initial[i],) for i in range(p))
        return PigeonFamily(space=space, p=p, h=h, initial=initial, parts=parts)
    a_res = Fraction(1, h) - Fraction(1, h * h)
    alpha = (beta - Fraction(h - 1, p - 1)) / (h * h)
    space.add_flower("sdir", h, a_res, Fraction(-1, h * h))
    space.add_flower("tdir", p, a_res, alpha - beta / (h * h))
    space.add_tensor("res", "tdir", "sdir", scale=Fraction(1) / a_res)
    inv_h = Fraction(1, h)
    parts = []
    for i in range(p):
        row = []
        for j in range(h):
            vec = Vec.combination(
                space,
                [
                    (space.atom("init", i), inv_h),
                    (space.atom("res", (i, j)), 1),
                ],
            )
            row.append(vec)
        parts.append(tuple(row))
    return PigeonFamily(space=space, p=p, h=h, initial=initial, parts=tuple(parts))


def max_overlap(family: PigeonFamily) -> tuple[Fraction, tuple[int, int, int]]:
    """Maximum within-hole overlap over pigeon pairs, with witness indices."""
    if family.p < 2:
        raise ValueError("need at least two pigeons")
    best: Optional[Fraction] = None
    arg = (0, 1, 0)
    for j in range(family.h):
        for i in range(family.p):
            for ip in range(i + 1, family.p):
                val = rational_inner(
                    family.parts[i][j], family.parts[ip][j], context="overlap"
                )
                if best is None or val > best:
                    best, arg = val, (i, ip, j)
    assert best is not None
    return best, arg


def average_initial_overlap(family: PigeonFamily) -> Fraction:
    p = family.p
    total = Fraction(0)
    for i in range(p):
        for ip in range(i + 1, p):
            total += rational_inner(family.initial[i], family.initial[ip], "initial overlap")
    return 2 * total / (p * (p - 1))


def overlap_bound(p: int, h: int, beta: Fraction) -> Fraction:
    return (beta - Fraction(h - 1, p - 1)) / (h * h)


def check_quantitative_bound(family: PigeonFamily) -> bool:
    """max overlap >= (beta - (h-1)/(p-1)) / h^2, with beta the average
    initial overlap."""
    if family.p < 2:
        return True
    beta = average_initial_overlap(family)
    best, _ = max_overlap(family)
    return best >= overlap_bound(family.p, family.h, beta)


@dataclass(frozen=True)
class SymmetrizedGram:
    """Orbit averages of the family Gram under pigeon and hole permutations."""

    beta: Fraction  # <w_i, w_i'> for i != i'
    part_norm: Fraction  # <w_ij, w_ij>, always 1/h
    alpha: Fraction  # <w_ij, w_i'j> for i != i'
    init_part_same: Fraction  # <w_i, w_ij>
    init_part_other: Fraction  # <w_i, w_i'j> for i != i'


def symmetrize(family: PigeonFamily) -> SymmetrizedGram:
    """Average the Gram over all pigeon and hole relabelings.

    The direct-sum construction over all p!h! permutation pairs realizes these
    averages as honest inner products; computing orbit sums over the index set
    avoids materializing it.  Symmetrization can only shrink the worst
    within-hole overlap.
    """
    p, h = family.p, family.h
    if p < 2:
        raise ValueError("need at least two pigeons to symmetrize")
    beta = average_initial_overlap(family)
    part_norm = Fraction(0)
    same_pairs = Fraction(0)
    init_same = Fraction(0)
    init_other = Fraction(0)
    for i in range(p):
        for j in range(h):
            part_norm += rational_inner(family.parts[i][j], family.parts[i][j], "part norm")
            init_same += rational_inner(family.initial[i], family.parts[i][j], "cross")
    for j in range(h):
        for i in range(p):
            for ip in range(p):
                if i == ip:
                    continue
                same_pairs += rational_inner(
                    family.parts[i][j], family.parts[ip][j], "overlap"
                )
                init_other += rational_inner(family.initial[i], family.parts[ip][j], "cross")
    part_norm /= p * h
    alpha = same_pairs / (p * (p - 1) * h)
    init_same /= p * h
    init_other /= p * (p - 1) * h
    assert part_norm == Fraction(1, h), f"part norm average {part_norm} != 1/{h}"
    best, _ = max_overlap(family)
    assert alpha <= best
    return SymmetrizedGram(
        beta=beta,
        part_norm=part_norm,
        alpha=alpha,
        init_part_same=init_same,
        init_part_other=init_other,
    )


def weak_qphp_check(
    psis: Sequence[Vec],
    splits: Sequence[tuple[Vec, Vec]],
    require_orthogonal: bool = False,
) -> bool:
    """Two-hole inequality: |S| <= 2(|S0| + |S1|) for the summed Gram masses.

    S sums <psi_i, psi_j> over all ordered pairs, S0 and S1 likewise for the
    two split components.  Orthogonality of each split pair is not needed for
    the inequality and is checked only on request.
    """
    from .errors import InvalidSplitError

    if len(psis) != len(splits):
        raise ValueError("one split per vector required")
    for i, (psi, (a, b)) in enumerate(zip(psis, splits)):
        residue = psi - a - b
        if norm2(residue):
            raise InvalidSplitError(f"split {i} does not sum back to the vector")
        if require_orthogonal and inner(a, b):
            raise InvalidSplitError(f"split {i} components are not orthogonal")

    def mass(vectors: Sequence[Vec]) -> Fraction:
        total = Fraction(0)
        for i in range(len(vectors)):
            total += rational_inner(vectors[i], vectors[i], "mass")
            for j in range(i + 1, len(vectors)):
                total += 2 * rational_inner(vectors[i], vectors[j], "mass")
        return total

    s = mass(psis)
    s0 = mass([a for a, _ in splits])
    s1 = mass([b for _, b in splits])
    return abs(s) <= 2 * (abs(s0) + abs(s1))


@dataclass(frozen=True)
class WeakIterationStep:
    holes: tuple[int, ...]
    left: tuple[int, ...]
    right: tuple[int, ...]
    left_mass: Fraction
    right_mass: Fraction
    chosen: tuple[int, ...]


@dataclass(frozen=True)
class WeakIterationTrace:
    steps: tuple[WeakIterationStep, ...]
    final_hole: int
    final_mass: Fraction
    guaranteed: Fraction  # p^2 / 4^ceil(log2 h)
    bound_holds: bool
    witness: Optional[tuple[int, int, int, Fraction]]  # (i, i', j, overlap)
    witness_route: Optional[str]


def iterate_weak_qphp(family: PigeonFamily) -> WeakIterationTrace:
    """Binary hole-splitting for identical pigeons, following the heavier side.

    Each split loses at most a factor 4 of summed Gram mass, so the surviving
    single hole retains at least p^2 / 4^ceil(log2 h).  When h < sqrt(p)/4
    that guaranteed mass exceeds the total part-norm budget p, and an
    overlapping pair inside the final hole is found by scanning; otherwise
    (p > h) a pair is still guaranteed and is located by a full overlap scan.
    """
    p, h = family.p, family.h
    for i in range(p):
        for ip in range(i + 1, p):
            if rational_inner(family.initial[i], family.initial[ip], "initial") != 1:
                raise ValueError("iterated bound needs identical unit pigeons")

    def partial(i: int, holes: Sequence[int]) -> Vec:
        return reduce(lambda s, j: s + family.parts[i][j], holes, family.space.zero_vec())

    def mass(holes: Sequence[int]) -> Fraction:
        vs = [partial(i, holes) for i in range(p)]
        total = Fraction(0)
        for i in range(p):
            total += rational_inner(vs[i], vs[i], "mass")
            for j in range(i + 1, p):
                total += 2 * rational_inner(vs[i], vs[j], "mass")
        return total

    steps = []
    current = tuple(range(h))
    while len(current) > 1:
        mid = (len(current) + 1) // 2
        left, right = current[:mid], current[mid:]
        lm, rm = mass(left), mass(right)
        chosen = left if abs(lm) >= abs(rm) else right
        steps.append(
            WeakIterationStep(
                holes=current, left=left, right=right, left_mass=lm, right_mass=rm, chosen=chosen
            )
        )
        current = chosen
    final_hole = current[0]
    final_mass = mass(current)
    guaranteed = Fraction(p * p, 4 ** ((h - 1).bit_length()))
    bound_holds = abs(final_mass) >= guaranteed

    witness = None
    route = None
    if 16 * h * h < p:
        for i in range(p):
            for ip in range(i + 1, p):
                val = rational_inner(
                    family.parts[i][final_hole], family.parts[ip][final_hole], "overlap"
                )
                if val:
                    witness = (i, ip, final_hole, val)
                    route = "iterated-sum"
                    break
            if witness:
                break
    if witness is None and p > h:
        best, (i, ip, j) = max_overlap(family)
        if best:
            witness = (i, ip, j, best)
            route = "max-overlap"
    return WeakIterationTrace(
        steps=tuple(steps),
        final_hole=final_hole,
        final_mass=final_mass,
        guaranteed=guaranteed,
        bound_holds=bound_holds,
        witness=witness,
        witness_route=route,
    )
