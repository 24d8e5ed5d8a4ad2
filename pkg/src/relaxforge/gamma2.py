"""Tree-structured vector protocols generalizing deterministic communication.

A protocol assigns vectors alpha_t(x), beta_t(y) to every tree node so that
the root vectors all coincide with one unit vector, the speaking side's
children orthogonally decompose the parent vector, the silent side is
unchanged, and leaf vectors for wrong outputs are orthogonal.  Node matrices
M_t[x,y] = <alpha_t(x), beta_t(y)> then behave like protocol rectangles:
they sum across children, telescope to the all-ones matrix at the root, and
each admits a factorization with row norms at most 1.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

from .conic import HQFP, Constraint, FeasibilityProblem, PrimalSolution
from .errors import CoefficientBoundError, CompositionError, SizeCapError
from .prototree import ALICE, BOB, Node, ProtocolStructure, node_label
from .relations import RelationSpec, eq_relation
from .reports import VerificationReport
from .scalar import ONE, ZERO, Scalar
from .space import (
    InnerProductSpace,
    SpaceBase,
    TensorProductSpace,
    Vec,
    inner,
    norm2,
    rational_inner,
)
from .symmatrix import SymMatrixQ

DISC_CAP_ENV = "RELAXFORGE_CAP"


@dataclass
class Gamma2Protocol:
    structure: ProtocolStructure
    space: SpaceBase
    xs: tuple
    ys: tuple
    alpha: dict  # (node, x) -> Vec
    beta: dict  # (node, y) -> Vec

    def a(self, t: Node, x) -> Vec:
        return self.alpha[(t, x)]

    def b(self, t: Node, y) -> Vec:
        return self.beta[(t, y)]


def verify_gamma2(
    protocol: Gamma2Protocol, relation: Optional[RelationSpec] = None
) -> VerificationReport:
    """Exact check of root, speaking-side, silent-side, and output constraints.

    With relation=None only the structural constraints are checked.  Output
    bits are read from the last k arcs of each leaf, which must be binary.
    """
    report = VerificationReport()
    st = protocol.structure
    xs, ys = protocol.xs, protocol.ys
    if relation is not None and (tuple(relation.xs) != xs or tuple(relation.ys) != ys):
        raise ValueError("relation domains do not match the protocol inputs")
    root = ()
    for i, x in enumerate(xs):
        for xp in xs[i:]:
            report.tick()
            if inner(protocol.a(root, x), protocol.a(root, xp)) != ONE:
                report.fail("root", f"alpha({x}),alpha({xp})", "inner product != 1")
    for i, y in enumerate(ys):
        for yp in ys[i:]:
            report.tick()
            if inner(protocol.b(root, y), protocol.b(root, yp)) != ONE:
                report.fail("root", f"beta({y}),beta({yp})", "inner product != 1")
    for x in xs:
        for y in ys:
            report.tick()
            if inner(protocol.a(root, x), protocol.b(root, y)) != ONE:
                report.fail("root", f"alpha({x}),beta({y})", "inner product != 1")

    for t in st.internal_nodes():
        owner = st.owner(t)
        kids = st.children(t)
        speak, silent, speak_in, silent_in = (
            (protocol.a, protocol.b, xs, ys)
            if owner == ALICE
            else (protocol.b, protocol.a, ys, xs)
        )
        where = f"{owner}@{node_label(t)}"
        for u in speak_in:
            parent = speak(t, u)
            pnorm = inner(parent, parent)
            child_vecs = [speak(c, u) for c in kids]
            report.tick(2)
            total = reduce(lambda s, v: s + inner(v, v), child_vecs, ZERO)
            if total != pnorm:
                report.fail("speak-norms", where, f"input {u}: {total} != {pnorm}")
            cross = reduce(lambda s, v: s + inner(v, parent), child_vecs, ZERO)
            if cross != pnorm:
                report.fail("speak-sum", where, f"input {u}: {cross} != {pnorm}")
            for a in range(len(kids)):
                for b in range(a + 1, len(kids)):
                    report.tick()
                    if inner(child_vecs[a], child_vecs[b]):
                        report.fail(
                            "speak-orthogonality",
                            where,
                            f"input {u}: children {a},{b} overlap",
                        )
        for u in silent_in:
            parent = silent(t, u)
            pnorm = inner(parent, parent)
            for c in kids:
                child = silent(c, u)
                report.tick(2)
                if inner(child, child) != pnorm:
                    report.fail("silent-norm", where, f"input {u}: child {c[-1]}")
                if inner(child, parent) != pnorm:
                    report.fail("silent-sum", where, f"input {u}: child {c[-1]}")

    if relation is not None:
        k = relation.k
        for leaf in st.leaves():
            zbits = st.leaf_output_bits(leaf, k)
            if zbits is None:
                raise ValueError(
                    f"leaf {node_label(leaf)} lacks a {k}-bit binary output tail"
                )
            for x in xs:
                for y in ys:
                    if relation.admits(x, y, zbits):
                        continue
                    report.tick()
                    value = inner(protocol.a(leaf, x), protocol.b(leaf, y))
                    if value:
                        report.fail(
                            "computational",
                            f"leaf {node_label(leaf)} output {zbits}",
                            f"({x},{y}): <alpha,beta> = {value}",
                        )
    return report


@dataclass(frozen=True)
class NodeMatrix:
    node: Node
    xs: tuple
    ys: tuple
    entries: tuple  # entries[i][j] = <alpha_t(xs[i]), beta_t(ys[j])>, Scalars

    def entry(self, x, y) -> Scalar:
        return self.entries[self.xs.index(x)][self.ys.index(y)]


def node_matrix(protocol: Gamma2Protocol, t: Node) -> NodeMatrix:
    entries = tuple(
        tuple(inner(protocol.a(t, x), protocol.b(t, y)) for y in protocol.ys)
        for x in protocol.xs
    )
    return NodeMatrix(node=t, xs=protocol.xs, ys=protocol.ys, entries=entries)


def structure_check(protocol: Gamma2Protocol) -> VerificationReport:
    """Node-matrix laws: all-ones root, additivity across children, and the
    norm bounds that witness a unit factorization at every node."""
    report = VerificationReport()
    st = protocol.structure
    matrices = {t: node_matrix(protocol, t) for t in st.nodes()}
    root = matrices[()]
    for row in root.entries:
        for v in row:
            report.tick()
            if v != ONE:
                report.fail("root-matrix", "root", f"entry {v} != 1")
    for t in st.internal_nodes():
        kids = st.children(t)
        for i in range(len(protocol.xs)):
            for j in range(len(protocol.ys)):
                report.tick()
                total = reduce(
                    lambda s, c: s + matrices[c].entries[i][j], kids, ZERO
                )
                if total != matrices[t].entries[i][j]:
                    report.fail(
                        "additivity",
                        node_label(t),
                        f"entry ({protocol.xs[i]},{protocol.ys[j]})",
                    )
    one = Fraction(1)
    for t in st.nodes():
        for x in protocol.xs:
            report.tick()
            if rational_inner(protocol.a(t, x), protocol.a(t, x), "norm") > one:
                report.fail("row-norm", node_label(t), f"alpha({x}) exceeds unit")
        for y in protocol.ys:
            report.tick()
            if rational_inner(protocol.b(t, y), protocol.b(t, y), "norm") > one:
                report.fail("row-norm", node_label(t), f"beta({y}) exceeds unit")
    return report


def leaf_sum_check(protocol: Gamma2Protocol, antichain: Sequence[Node]) -> bool:
    """Sum of node-matrix entries over a maximal antichain is exactly 1."""
    st = protocol.structure
    if not st.is_maximal_antichain(antichain):
        raise ValueError("antichain is not maximal in the protocol tree")
    for x in protocol.xs:
        for y in protocol.ys:
            total = reduce(
                lambda s, t: s + inner(protocol.a(t, x), protocol.b(t, y)),
                antichain,
                ZERO,
            )
            if total != ONE:
                return False
    return True


@dataclass(frozen=True)
class DecompositionResult:
    ok: bool
    gamma2_upper_bound: int  # number of 1-leaves
    one_leaves: tuple
    nonzero_leaves: tuple  # 1-leaves whose node matrix is not identically zero


def mf_decomposition_check(
    protocol: Gamma2Protocol, relation: RelationSpec
) -> DecompositionResult:
    """Function matrix equals the sum of its one-leaf node matrices.

    A successful check certifies the factorization-norm bound
    gamma2(f) <= (number of 1-leaves), since every leaf matrix comes with a
    unit-norm factorization.
    """
    if not relation.is_function:
        raise ValueError("decomposition check requires a function relation")
    st = protocol.structure
    one_leaves = tuple(
        leaf for leaf in st.leaves() if st.leaf_output_bits(leaf, 1) == (1,)
    )
    ok = True
    nonzero = set()
    for x in protocol.xs:
        for y in protocol.ys:
            total = ZERO
            for t in one_leaves:
                value = inner(protocol.a(t, x), protocol.b(t, y))
                if value:
                    nonzero.add(t)
                    total = total + value
            if total != Scalar.rational(relation.value(x, y)):
                ok = False
    if ok:
        one = Fraction(1)
        for leaf in one_leaves:
            for x in protocol.xs:
                if rational_inner(protocol.a(leaf, x), protocol.a(leaf, x), "norm") > one:
                    ok = False
            for y in protocol.ys:
                if rational_inner(protocol.b(leaf, y), protocol.b(leaf, y), "norm") > one:
                    ok = False
    return DecompositionResult(
        ok=ok,
        gamma2_upper_bound=len(one_leaves),
        one_leaves=one_leaves,
        nonzero_leaves=tuple(t for t in one_leaves if t in nonzero),
    )


def _disc_cap() -> int:
    raw = os.environ.get(DISC_CAP_ENV)
    return int(raw) if raw else 8


def discrepancy(fmatrix: Sequence[Sequence[int]], mu: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact maximum rectangle imbalance |P[f=0, R] - P[f=1, R]| under mu.

    Brute force over all row subsets; for each, the best column subset takes
    every column whose signed mass has the majority sign.
    """
    nx = len(fmatrix)
    ny = len(fmatrix[0]) if nx else 0
    cap = _disc_cap()
    if nx > cap or ny > cap:
        raise SizeCapError(
            f"inputs {nx}x{ny} exceed the brute-force cap {cap}; "
            "use the numeric crosscheck package for larger instances"
        )
    signed = [
        [Fraction(mu[i][j]) * (1 - 2 * fmatrix[i][j]) for j in range(ny)]
        for i in range(nx)
    ]
    best = Fraction(0)
    for mask in range(1, 1 << nx):
        cols = [Fraction(0)] * ny
        for i in range(nx):
            if mask >> i & 1:
                row = signed[i]
                for j in range(ny):
                    cols[j] += row[j]
        pos = sum((c for c in cols if c > 0), Fraction(0))
        neg = -sum((c for c in cols if c < 0), Fraction(0))
        best = max(best, pos, neg)
    return best


def disc_uniform(fmatrix: Sequence[Sequence[int]]) -> Fraction:
    nx = len(fmatrix)
    ny = len(fmatrix[0])
    w = Fraction(1, nx * ny)
    return discrepancy(fmatrix, [[w] * ny for _ in range(nx)])


def t_ell_structure(ell: int) -> ProtocolStructure:
    """Alice sends one of ell messages, Bob answers with one bit."""
    owners = {(): ALICE}
    arities = {(): ell}
    for m in range(ell):
        owners[(m,)] = BOB
        arities[(m,)] = 2
    return ProtocolStructure(owners, arities)


def equality_protocol(ell: int, d: int) -> Gamma2Protocol:
    """Two-round protocol for equality on [d]: Alice sends one of ell
    messages, Bob replies with the answer bit.

    Alice's message vectors mix the shared unit with simplex directions
    phi_m and rho_m (x) eta_x; Bob's answers re-weight the same directions so
    that the off-output leaf inner products cancel exactly.  The coefficient
    system is solvable with a non-negative leftover square only for
    ell >= 11.
    """
    if d < 2:
        raise ValueError("equality needs d >= 2 to be non-trivial")
    if ell < 11:
        raise CoefficientBoundError(
            f"ell={ell} < 11: coefficient bound 0 <= q^2 <= 1/4 - p^2 can fail"
        )
    space = InnerProductSpace(f"eq[{ell},{d}]")
    psi_atom = space.add_unit("psi")
    space.add_flower("phi", ell, 1, Fraction(-1, ell - 1))
    space.add_flower("rho", ell, 1, Fraction(-1, ell - 1))
    space.add_flower("eta", d, 1, Fraction(-1, d - 1))
    chi = space.add_units("chi", range(d))
    space.add_tensor("rho_eta", "rho", "eta")
    psi = Vec.of_atom(space, psi_atom)

    c = Scalar.sqrt(Fraction(ell - 1, 2 * ell * ell))
    cl = c * ell
    p_coef = Scalar.rational(Fraction(1, 2) - Fraction(1, d)) / cl
    q_coef = Scalar.rational(1 - Fraction(1, d)) / cl
    p2 = Fraction(2, ell - 1) * (Fraction(1, 2) - Fraction(1, d)) ** 2
    q2 = Fraction(2, ell - 1) * (1 - Fraction(1, d)) ** 2
    r2 = Fraction(1, 4) - p2 - q2
    if r2 < 0:
        raise CoefficientBoundError(f"leftover square 1/4 - p^2 - q^2 = {r2} < 0")
    r_coef = Scalar.sqrt(r2)

    xs = ys = tuple(range(d))
    alpha: dict = {}
    beta: dict = {}
    for x in xs:
        alpha[((), x)] = psi
    for y in ys:
        beta[((), y)] = psi
    inv_l = Scalar.rational(Fraction(1, ell))
    half = Scalar.rational(Fraction(1, 2))
    for m in range(ell):
        phi_m = space.atom("phi", m)
        for x in xs:
            vec = Vec.combination(
                space,
                [
                    (psi_atom, inv_l),
                    (phi_m, c),
                    (space.atom("rho_eta", (m, x)), c),
                ],
            )
            alpha[((m,), x)] = vec
            alpha[((m, 0), x)] = vec
            alpha[((m, 1), x)] = vec
        for y in ys:
            beta[((m,), y)] = psi
            for b in (0, 1):
                sign = 1 if b == 0 else -1
                beta[((m, b), y)] = Vec.combination(
                    space,
                    [
                        (psi_atom, half),
                        (phi_m, p_coef * sign),
                        (space.atom("rho_eta", (m, y)), q_coef * (-sign)),
                        (chi[y], r_coef * sign),
                    ],
                )
    return Gamma2Protocol(
        structure=t_ell_structure(ell), space=space, xs=xs, ys=ys, alpha=alpha, beta=beta
    )


def protocol_variables(structure: ProtocolStructure, xs: tuple, ys: tuple) -> list[tuple]:
    """Canonical variable order for the protocol feasibility problem."""
    out = []
    for t in structure.nodes():
        for x in xs:
            out.append(("A", t, x))
    for t in structure.nodes():
        for y in ys:
            out.append(("B", t, y))
    return out


def protocol_hqfp(relation: RelationSpec, structure: ProtocolStructure) -> FeasibilityProblem:
    """Quadratic feasibility problem whose rank-1 solutions are exactly the
    classical protocols with the given binary structure computing the relation."""
    if any(a != 2 for a in structure.arities.values()):
        raise ValueError("protocol feasibility problems use binary structures")
    xs, ys = tuple(relation.xs), tuple(relation.ys)
    variables = protocol_variables(structure, xs, ys)
    index = {v: i for i, v in enumerate(variables)}
    n = len(variables)
    labels = tuple(f"{side}[{node_label(t)}]({u})" for side, t, u in variables)
    half = Fraction(1, 2)
    one = Fraction(1)
    constraints = []

    def pair_entry(v1, v2):
        i, j = index[v1], index[v2]
        if i == j:
            return {(i, i): one}
        return {(i, j): half}

    def add(entries, rhs, label):
        constraints.append(
            Constraint(SymMatrixQ.from_entries(n, entries), Fraction(rhs), label)
        )

    root = ()
    for i, x in enumerate(xs):
        for xp in xs[i:]:
            add(pair_entry(("A", root, x), ("A", root, xp)), 1, f"root:AA({x},{xp})")
    for i, y in enumerate(ys):
        for yp in ys[i:]:
            add(pair_entry(("B", root, y), ("B", root, yp)), 1, f"root:BB({y},{yp})")
    for x in xs:
        for y in ys:
            add(pair_entry(("A", root, x), ("B", root, y)), 1, f"root:AB({x},{y})")

    for t in structure.internal_nodes():
        owner = structure.owner(t)
        t0, t1 = structure.children(t)
        speak_side, speak_in = ("A", xs) if owner == ALICE else ("B", ys)
        silent_side, silent_in = ("B", ys) if owner == ALICE else ("A", xs)
        lab = node_label(t)
        for u in speak_in:
            vt = (speak_side, t, u)
            v0 = (speak_side, t0, u)
            v1 = (speak_side, t1, u)
            entries = dict(pair_entry(v0, v0))
            entries.update(pair_entry(v1, v1))
            entries[(index[vt], index[vt])] = -one
            add(entries, 0, f"speak-norms[{lab}]({u})")
            entries = {}
            for v in (v0, v1):
                for ij, val in pair_entry(v, vt).items():
                    entries[ij] = entries.get(ij, Fraction(0)) + val
            entries[(index[vt], index[vt])] = entries.get(
                (index[vt], index[vt]), Fraction(0)
            ) - one
            add(entries, 0, f"speak-sum[{lab}]({u})")
            add(pair_entry(v0, v1), 0, f"speak-orth[{lab}]({u})")
        for u in silent_in:
            vt = (silent_side, t, u)
            for ci, vc in ((0, (silent_side, t0, u)), (1, (silent_side, t1, u))):
                entries = dict(pair_entry(vc, vc))
                entries[(index[vt], index[vt])] = (
                    entries.get((index[vt], index[vt]), Fraction(0)) - one
                )
                add(entries, 0, f"silent-norm[{lab}]({u}):{ci}")
                entries = dict(pair_entry(vc, vt))
                entries[(index[vt], index[vt])] = (
                    entries.get((index[vt], index[vt]), Fraction(0)) - one
                )
                add(entries, 0, f"silent-sum[{lab}]({u}):{ci}")

    k = relation.k
    for leaf in structure.leaves():
        zbits = structure.leaf_output_bits(leaf, k)
        lab = node_label(leaf)
        for x in xs:
            for y in ys:
                if zbits is not None and relation.admits(x, y, zbits):
                    continue
                add(
                    pair_entry(("A", leaf, x), ("B", leaf, y)),
                    0,
                    f"compute[{lab}]({x},{y})",
                )
    return FeasibilityProblem(
        n=n, mode=HQFP, constraints=tuple(constraints), labels=labels
    )


def gamma2_primal_solution(protocol: Gamma2Protocol) -> PrimalSolution:
    """Package a protocol's vectors in the canonical variable order."""
    variables = protocol_variables(protocol.structure, protocol.xs, protocol.ys)
    vecs = [
        protocol.a(t, u) if side == "A" else protocol.b(t, u)
        for side, t, u in variables
    ]
    return PrimalSolution.from_vectors(vecs)


def compose_sequential(
    base: Gamma2Protocol,
    grafts: dict[Node, Gamma2Protocol],
    relation: Optional[RelationSpec] = None,
) -> Gamma2Protocol:
    """Graft sub-protocols under leaves of a base protocol by tensoring.

    Below a grafted leaf, node vectors are the leaf vector tensored with the
    sub-protocol's vectors; elsewhere vectors are padded with the shared
    sub-root unit.  Soundness is enforced by re-verification: structurally
    always, and against the supplied relation when one is given.
    """
    if not grafts:
        return base
    leaves = set(base.structure.leaves())
    for leaf in grafts:
        if leaf not in leaves:
            raise CompositionError(f"graft target {node_label(leaf)} is not a leaf")
    sub_space = None
    unit2 = None
    for g in grafts.values():
        if tuple(g.xs) != base.xs or tuple(g.ys) != base.ys:
            raise CompositionError("grafted protocol has mismatched inputs")
        if sub_space is None:
            sub_space = g.space
            unit2 = g.a((), g.xs[0])
        elif g.space is not sub_space:
            raise CompositionError("grafted protocols must share one space")
        sub_report = verify_gamma2(g)
        if not sub_report.ok:
            raise CompositionError(
                "grafted protocol fails structural verification", report=sub_report
            )
        for x in g.xs:
            if norm2(g.a((), x) - unit2):
                raise CompositionError("grafted protocols must share the root unit")

    owners = dict(base.structure.owners)
    arities = dict(base.structure.arities)
    for leaf, g in grafts.items():
        for t, owner in g.structure.owners.items():
            owners[leaf + t] = owner
            arities[leaf + t] = g.structure.arities[t]
    structure = ProtocolStructure(owners, arities)

    space = TensorProductSpace(base.space, sub_space)
    pad_a = {x: unit2 for x in base.xs}
    pad_b = {y: unit2 for y in base.ys}
    alpha: dict = {}
    beta: dict = {}
    for t in base.structure.nodes():
        grafted = grafts.get(t)
        if grafted is None:
            for x in base.xs:
                alpha[(t, x)] = space.tensor_vec(base.a(t, x), pad_a[x])
            for y in base.ys:
                beta[(t, y)] = space.tensor_vec(base.b(t, y), pad_b[y])
        else:
            for s in grafted.structure.nodes():
                for x in base.xs:
                    alpha[(t + s, x)] = space.tensor_vec(base.a(t, x), grafted.a(s, x))
                for y in base.ys:
                    beta[(t + s, y)] = space.tensor_vec(base.b(t, y), grafted.b(s, y))
    composite = Gamma2Protocol(
        structure=structure, space=space, xs=base.xs, ys=base.ys, alpha=alpha, beta=beta
    )
    report = verify_gamma2(composite, relation)
    if not report.ok:
        raise CompositionError("composite fails verification", report=report)
    return composite


def pullback(
    protocol: Gamma2Protocol, xs: tuple, ys: tuple, gx, gy
) -> Gamma2Protocol:
    """Reindex a protocol along input maps gx: xs -> protocol.xs and gy."""
    alpha = {
        (t, x): protocol.a(t, gx(x))
        for t in protocol.structure.nodes()
        for x in xs
    }
    beta = {
        (t, y): protocol.b(t, gy(y))
        for t in protocol.structure.nodes()
        for y in ys
    }
    return Gamma2Protocol(
        structure=protocol.structure,
        space=protocol.space,
        xs=tuple(xs),
        ys=tuple(ys),
        alpha=alpha,
        beta=beta,
    )


def _eq_with_announcement(
    eq2: Gamma2Protocol, announce: tuple, xs: tuple, ys: tuple, gx, gy
) -> Gamma2Protocol:
    """Final search round: one equality test whose answer arrives after Bob
    re-announces the earlier outcome bits, so the last bits spell the index.

    Bob's chain below each Alice message broadcasts the fixed announce bits
    (the off bits carry the zero vector) and ends with the equality answer.
    """
    ell = eq2.structure.arities[()]
    depth = len(announce) + 1
    owners = {(): ALICE}
    arities = {(): ell}
    for m in range(ell):
        base: Node = (m,)
        for j in range(depth):
            for bits in _all_bits(j):
                owners[base + bits] = BOB
                arities[base + bits] = 2
    structure = ProtocolStructure(owners, arities)
    zero = eq2.space.zero_vec()
    alpha: dict = {}
    beta: dict = {}
    for x in xs:
        alpha[((), x)] = eq2.a((), gx(x))
    for y in ys:
        beta[((), y)] = eq2.b((), gy(y))
    for m in range(ell):
        for x in xs:
            vec = eq2.a((m,), gx(x))
            alpha[((m,), x)] = vec
            for j in range(1, depth + 1):
                for bits in _all_bits(j):
                    alpha[((m,) + bits, x)] = vec
        for y in ys:
            for j in range(depth):
                for bits in _all_bits(j):
                    beta[((m,) + bits, y)] = (
                        eq2.b((m,), gy(y)) if bits == announce[:j] else zero
                    )
            for bits in _all_bits(depth):
                if bits[:-1] == announce:
                    beta[((m,) + bits, y)] = eq2.b((m, bits[-1]), gy(y))
                else:
                    beta[((m,) + bits, y)] = zero
    return Gamma2Protocol(
        structure=structure, space=eq2.space, xs=xs, ys=ys, alpha=alpha, beta=beta
    )


def _all_bits(j: int):
    if j == 0:
        yield ()
        return
    for v in range(1 << j):
        yield tuple((v >> (j - 1 - i)) & 1 for i in range(j))


@dataclass(frozen=True)
class KwEqualityResult:
    protocol: Gamma2Protocol
    relation: RelationSpec
    rounds: int
    round_depth: int
    bit_depth: int
    report: VerificationReport


_search_composites: dict = {}


def _search_composite(n: int, ell: int) -> Gamma2Protocol:
    """Coordinate-search composite over the full n-bit input domain.

    The construction is independent of the function being attacked (only the
    admissible input sets change), so it is built once per (n, ell) and
    restricted per call; revisits then hit the space's inner-product cache.
    """
    from .relations import bitstring, output_width

    key = (n, ell)
    hit = _search_composites.get(key)
    if hit is not None:
        return hit
    big = output_width(n)
    padded = 1 << big
    full = tuple(bitstring(i, n) for i in range(1 << n))

    def pad(s: str) -> str:
        return s + "0" * (padded - n)

    def interval(outs: tuple) -> tuple[int, int]:
        a, b = 0, padded
        for o in outs:
            mid = (a + b) // 2
            a, b = (a, mid) if o == 0 else (mid, b)
        return a, b

    def extractor(a: int, b: int):
        return lambda s: int(pad(s)[a:b], 2)

    composite = None
    for r in range(1, big):
        width = padded >> r
        eq = equality_protocol(ell, 1 << width)
        if composite is None:
            g = extractor(0, width)
            composite = pullback(eq, full, full, g, g)
        else:
            grafts = {}
            for leaf in composite.structure.leaves():
                a, b = interval(leaf[1::2])
                g = extractor(a, (a + b) // 2)
                grafts[leaf] = pullback(eq, full, full, g, g)
            composite = compose_sequential(composite, grafts)
    eq2 = equality_protocol(ell, 2)
    if composite is None:
        g = extractor(0, 1)
        composite = _eq_with_announcement(eq2, (), full, full, g, g)
    else:
        grafts = {}
        for leaf in composite.structure.leaves():
            outs = leaf[1::2]
            a, b = interval(outs)
            g = extractor(a, a + 1)
            grafts[leaf] = _eq_with_announcement(eq2, outs, full, full, g, g)
        composite = compose_sequential(composite, grafts)
    _search_composites[key] = composite
    return composite


def kw_via_equality(table, ell: int = 11) -> KwEqualityResult:
    """Solve the find-a-differing-coordinate relation by binary search over
    coordinate blocks, each probe one equality protocol on the left half.

    Outcome bits trace the differing coordinate top-down, and the final round
    re-announces them so the last k arcs carry the index.  The composite is
    re-verified against the relation; a failure here is a construction bug
    and is never silently accepted.
    """
    from .relations import kw_relation

    relation = kw_relation(table)
    n = table.n
    xs, ys = relation.xs, relation.ys
    if n == 1:
        space = InnerProductSpace("kw-trivial")
        psi = Vec.of_atom(space, space.add_unit("psi"))
        zero = space.zero_vec()
        structure = ProtocolStructure({(): BOB}, {(): 2})
        alpha = {((), x): psi for x in xs}
        alpha.update({((c,), x): psi for c in (0, 1) for x in xs})
        beta = {((), y): psi for y in ys}
        beta.update({((0,), y): psi for y in ys})
        beta.update({((1,), y): zero for y in ys})
        protocol = Gamma2Protocol(
            structure=structure, space=space, xs=xs, ys=ys, alpha=alpha, beta=beta
        )
    else:
        master = _search_composite(n, ell)
        protocol = pullback(master, xs, ys, lambda s: s, lambda s: s)
    report = verify_gamma2(protocol, relation)
    if not report.ok:
        raise CompositionError("search composite fails verification", report=report)
    return KwEqualityResult(
        protocol=protocol,
        relation=relation,
        rounds=protocol.structure.turns(),
        round_depth=protocol.structure.round_depth(),
        bit_depth=protocol.structure.bit_depth(),
        report=report,
    )
