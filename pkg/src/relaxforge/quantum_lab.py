"""Shared-state protocols where players alternate projective measurements.

Each tree node carries one unnormalized state per input pair.  The speaking
player's two branch states orthogonally decompose the parent, and branch 0
states are orthogonal to branch 1 states across every value of the other
player's input, which is exactly the condition for the branches to be images
of one input-dependent binary measurement.

The universal construction computes any Boolean function in three rounds and
four announced bits: Bob entangles his input's sign, Alice hers, Alice then
splits off a one-qubit register holding the x/y superposition whose relative
sign is the function value, and Bob's final measurement reads it out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import NoGuaranteeError
from .prototree import ALICE, BOB, Node, ProtocolStructure, node_label
from .qphp import PigeonFamily, verify_family
from .relations import PairTable, RelationSpec, bitstring
from .reports import VerificationReport
from .scalar import ONE, ZERO, Scalar
from .space import InnerProductSpace, Vec, inner, rational_inner

BOT = ("bot",)


@dataclass
class QLabProtocol:
    structure: ProtocolStructure
    space: InnerProductSpace
    xs: tuple
    ys: tuple
    psi: dict  # (node, x, y) -> Vec

    def state(self, t: Node, x, y) -> Vec:
        return self.psi[(t, x, y)]


def verify_qlab(
    protocol: QLabProtocol, relation: Optional[RelationSpec] = None
) -> VerificationReport:
    """Exact check of the root, measurement, and output constraints."""
    report = VerificationReport()
    st = protocol.structure
    xs, ys = protocol.xs, protocol.ys
    if relation is not None and (tuple(relation.xs) != xs or tuple(relation.ys) != ys):
        raise ValueError("relation domains do not match the protocol inputs")
    pairs = [(x, y) for x in xs for y in ys]
    root = ()
    for i, (x, y) in enumerate(pairs):
        for (xp, yp) in pairs[i:]:
            report.tick()
            if inner(protocol.state(root, x, y), protocol.state(root, xp, yp)) != ONE:
                report.fail("root", f"({x},{y}) vs ({xp},{yp})", "inner product != 1")
    for t in st.internal_nodes():
        owner = st.owner(t)
        t0, t1 = st.children(t)
        where = f"{owner}@{node_label(t)}"
        for x, y in pairs:
            parent = protocol.state(t, x, y)
            pnorm = inner(parent, parent)
            c0 = protocol.state(t0, x, y)
            c1 = protocol.state(t1, x, y)
            report.tick(2)
            if inner(c0, c0) + inner(c1, c1) != pnorm:
                report.fail("norms", where, f"({x},{y})")
            if inner(c0, parent) + inner(c1, parent) != pnorm:
                report.fail("sum", where, f"({x},{y})")
        if owner == ALICE:
            for x in xs:
                for y in ys:
                    c0 = protocol.state(t0, x, y)
                    if c0.is_zero():
                        continue
                    for yp in ys:
                        report.tick()
                        if inner(c0, protocol.state(t1, x, yp)):
                            report.fail(
                                "cross-orthogonality",
                                where,
                                f"x={x}: branch states at y={y}, y'={yp} overlap",
                            )
        else:
            for y in ys:
                for x in xs:
                    c0 = protocol.state(t0, x, y)
                    if c0.is_zero():
                        continue
                    for xp in xs:
                        report.tick()
                        if inner(c0, protocol.state(t1, xp, y)):
                            report.fail(
                                "cross-orthogonality",
                                where,
                                f"y={y}: branch states at x={x}, x'={xp} overlap",
                            )
    if relation is not None:
        k = relation.k
        for leaf in st.leaves():
            zbits = st.leaf_output_bits(leaf, k)
            if zbits is None:
                raise ValueError(
                    f"leaf {node_label(leaf)} lacks a {k}-bit binary output tail"
                )
            for x, y in pairs:
                if relation.admits(x, y, zbits):
                    continue
                report.tick()
                state = protocol.state(leaf, x, y)
                if inner(state, state):
                    report.fail(
                        "computational",
                        f"leaf {node_label(leaf)} output {zbits}",
                        f"({x},{y}) reaches it with positive mass",
                    )
    return report


def level_normalization(protocol: QLabProtocol) -> bool:
    """Total squared mass across each depth level is 1 for every input pair.

    A level is the maximal antichain of all depth-d nodes plus shallower
    leaves.
    """
    st = protocol.structure
    max_depth = max(len(t) for t in st.nodes())
    for depth in range(max_depth + 1):
        level = [
            t
            for t in st.nodes()
            if len(t) == depth or (st.is_leaf(t) and len(t) < depth)
        ]
        for x in protocol.xs:
            for y in protocol.ys:
                total = ZERO
                for t in level:
                    s = protocol.state(t, x, y)
                    total = total + inner(s, s)
                if total != ONE:
                    return False
    return True


_universal_spaces: dict = {}


def _universal_space(xs: tuple, ys: tuple):
    key = (xs, ys)
    hit = _universal_spaces.get(key)
    if hit is not None:
        return hit
    space = InnerProductSpace("lab")
    kets = [BOT] + [("x", x) for x in xs] + [("y", y) for y in ys]
    labels = [(b, u, v) for b in (0, 1) for u in kets for v in kets]
    space.add_units("reg", labels)
    _universal_spaces[key] = space
    return space


_universal_masters: dict = {}


def _universal_master(xs: tuple, ys: tuple):
    """Input-pair states of the universal protocol, for both possible values
    of the function bit; shared across functions on the same domain."""
    key = (xs, ys)
    hit = _universal_masters.get(key)
    if hit is not None:
        return hit
    space = _universal_space(xs, ys)

    def unit(b, u, v, coeff) -> tuple:
        return (space.atom("reg", (b, u, v)), coeff)

    eighth = Fraction(1, 8)
    amp = Scalar.sqrt(Fraction(1, 32))  # 1/2 * 1/(2*sqrt(2)) = sqrt(2)/8
    root = Vec.of_atom(space, space.atom("reg", (0, BOT, BOT)))
    level1 = {}
    level2 = {}
    level3 = {}
    for y in ys:
        ky = ("y", y)
        for b1 in (0, 1):
            s1 = 1 if b1 == 0 else -1
            level1[(b1, y)] = Vec.combination(
                space,
                [unit(0, BOT, BOT, Fraction(1, 2)), unit(0, ky, BOT, Fraction(s1, 2))],
            )
            for x in xs:
                kx = ("x", x)
                for b2 in (0, 1):
                    s2 = 1 if b2 == 0 else -1
                    level2[(b1, b2, x, y)] = Vec.combination(
                        space,
                        [
                            unit(0, BOT, BOT, Fraction(1, 4)),
                            unit(0, ky, BOT, Fraction(s1, 4)),
                            unit(0, BOT, kx, Fraction(s2, 4)),
                            unit(0, ky, kx, Fraction(s1 * s2, 4)),
                        ],
                    )
                    for b3 in (0, 1):
                        s3 = 1 if b3 == 0 else -1
                        for bit in (0, 1):
                            sf = 1 if bit == 0 else -1
                            level3[(b1, b2, b3, x, y, bit)] = Vec.combination(
                                space,
                                [
                                    unit(0, BOT, BOT, eighth),
                                    unit(0, ky, BOT, s1 * eighth),
                                    unit(0, BOT, kx, s2 * eighth),
                                    unit(0, ky, kx, s1 * s2 * eighth),
                                    unit(1, kx, BOT, amp * s3),
                                    unit(1, ky, BOT, amp * (s3 * s1 * sf)),
                                ],
                            )
    master = (space, root, level1, level2, level3)
    _universal_masters[key] = master
    return master


def universal_structure() -> ProtocolStructure:
    owners: dict[Node, str] = {(): BOB}
    arities: dict[Node, int] = {(): 2}
    for b1 in (0, 1):
        owners[(b1,)] = ALICE
        arities[(b1,)] = 2
        for b2 in (0, 1):
            owners[(b1, b2)] = ALICE
            arities[(b1, b2)] = 2
            for b3 in (0, 1):
                owners[(b1, b2, b3)] = BOB
                arities[(b1, b2, b3)] = 2
    return ProtocolStructure(owners, arities)


def universal_protocol(table: PairTable) -> QLabProtocol:
    """Three-round, four-bit protocol computing an arbitrary Boolean function.

    Depth-4 leaf states are the depth-3 states kept when the announced answer
    matches the function value and zeroed otherwise, which is the projection
    onto the matching half of the final register.
    """
    n = table.n
    xs = ys = tuple(bitstring(i, n) for i in range(1 << n))
    return universal_protocol_for(xs, ys, lambda x, y: table.value(int(x, 2), int(y, 2)))


def universal_protocol_for(xs: tuple, ys: tuple, value) -> QLabProtocol:
    space, root, level1, level2, level3 = _universal_master(tuple(xs), tuple(ys))
    zero = space.zero_vec()
    psi: dict = {}
    for x in xs:
        for y in ys:
            bit = int(value(x, y))
            psi[((), x, y)] = root
            for b1 in (0, 1):
                psi[((b1,), x, y)] = level1[(b1, y)]
                for b2 in (0, 1):
                    psi[((b1, b2), x, y)] = level2[(b1, b2, x, y)]
                    for b3 in (0, 1):
                        state = level3[(b1, b2, b3, x, y, bit)]
                        psi[((b1, b2, b3), x, y)] = state
                        psi[((b1, b2, b3, bit), x, y)] = state
                        psi[((b1, b2, b3, 1 - bit), x, y)] = zero
    return QLabProtocol(
        structure=universal_structure(), space=space, xs=tuple(xs), ys=tuple(ys), psi=psi
    )


def graph_relation(xs: tuple, ys: tuple, value, name: str = "graph") -> RelationSpec:
    return RelationSpec.from_function(xs, ys, value, name=name)


def classical_qlab_embedding(
    structure: ProtocolStructure, xs: tuple, ys: tuple, indicator
) -> QLabProtocol:
    """Deterministic protocol as a one-dimensional lab protocol: the state at
    node t on (x, y) is the shared unit when the pair reaches t, else zero."""
    space = InnerProductSpace("classical-lab")
    e = Vec.of_atom(space, space.add_unit("e"))
    zero = space.zero_vec()
    psi = {
        (t, x, y): (e if indicator(t, x, y) else zero)
        for t in structure.nodes()
        for x in xs
        for y in ys
    }
    return QLabProtocol(structure=structure, space=space, xs=xs, ys=ys, psi=psi)


@dataclass(frozen=True)
class MeasurementPair:
    node: Node
    input: object
    basis0: tuple  # spanning vectors of the 0-outcome branch
    basis1: tuple


def extract_measurement(protocol: QLabProtocol, t: Node, value) -> MeasurementPair:
    """Spanning sets of the two branch subspaces for one input of the owner;
    their mutual orthogonality is asserted exactly."""
    st = protocol.structure
    if st.is_leaf(t):
        raise ValueError("measurements live at internal nodes")
    t0, t1 = st.children(t)
    owner = st.owner(t)
    if owner == ALICE:
        states0 = [protocol.state(t0, value, y) for y in protocol.ys]
        states1 = [protocol.state(t1, value, y) for y in protocol.ys]
    else:
        states0 = [protocol.state(t0, x, value) for x in protocol.xs]
        states1 = [protocol.state(t1, x, value) for x in protocol.xs]

    def dedupe(states):
        seen = set()
        out = []
        for s in states:
            if s.is_zero() or s.uid in seen:
                continue
            seen.add(s.uid)
            out.append(s)
        return tuple(out)

    basis0, basis1 = dedupe(states0), dedupe(states1)
    for u in basis0:
        for v in basis1:
            if inner(u, v):
                raise AssertionError(
                    f"branch spans at {node_label(t)} are not orthogonal"
                )
    return MeasurementPair(node=t, input=value, basis0=basis0, basis1=basis1)


@dataclass(frozen=True)
class TwoRoundViolation:
    message: int
    first: int
    second: int
    overlap: Fraction
    conclusion: str


def two_round_violation(decomposition: PigeonFamily, k: int) -> TwoRoundViolation:
    """Witness against two-round equality: some message leaves two inputs'
    states non-orthogonal, so no later measurement separates them.

    The decomposition plays Alice's opening k measurements: per input, the
    shared initial state splits orthogonally into 2^k message states.  With
    fewer messages than inputs an overlapping pair is guaranteed.
    """
    p, h = decomposition.p, decomposition.h
    if h != 1 << k:
        raise ValueError(f"decomposition has {h} parts, expected 2^{k}")
    if h >= p:
        raise NoGuaranteeError(
            f"2^k = {h} >= {p} inputs: no overlap is forced"
        )
    report = verify_family(decomposition)
    if not report.ok:
        raise ValueError(f"invalid decomposition: {report.summary()}")
    for i in range(p):
        for ip in range(i + 1, p):
            if rational_inner(
                decomposition.initial[i], decomposition.initial[ip], "initial"
            ) != 1:
                raise ValueError("two-round search needs a shared initial state")
    for t in range(h):
        for i in range(p):
            for ip in range(i + 1, p):
                val = rational_inner(
                    decomposition.parts[i][t], decomposition.parts[ip][t], "overlap"
                )
                if val:
                    conclusion = (
                        f"after message {t}, inputs {i} and {ip} have overlap "
                        f"{val}; on the other player's input equal to input {i} "
                        f"the required answers differ (equal vs unequal), yet "
                        f"every binary measurement keeps both branch states "
                        f"nonzero for some outcome, so that leaf admits both"
                    )
                    return TwoRoundViolation(
                        message=t, first=i, second=ip, overlap=val, conclusion=conclusion
                    )
    raise AssertionError("pigeonhole guarantee failed to produce a witness")
