"""Boolean formulas and the classical protocols they induce.

A formula over AND/OR gates with literal or constant leaves yields a
deterministic find-a-differing-coordinate protocol: Alice owns OR gates and
walks to her leftmost child evaluating 1, Bob owns AND gates and walks to his
leftmost child evaluating 0.  The resulting 0/1 node indicators double as a
rank-1 solution of the protocol feasibility problem for the same tree shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .conic import PrimalSolution
from .gamma2 import Gamma2Protocol, protocol_variables
from .prototree import ALICE, BOB, Node, ProtocolStructure
from .relations import RelationSpec, TruthTable, bits_of, kw_relation, output_width
from .space import InnerProductSpace, Vec

# Formula nodes: ("and", f, g) | ("or", f, g) | ("not", f) | ("lit", i) with
# 1-based variable index (negative i for a negated literal) | ("const", 0/1).
Formula = tuple


def parse_formula(text: str) -> Formula:
    """Parse infix syntax: x1 & ~x2 | (x3 & 0); & binds tighter than |."""
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()&|~01":
            tokens.append(ch)
            i += 1
        elif ch == "x":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ValueError(f"bad variable at position {i}")
            tokens.append(("var", int(text[i + 1 : j])))
            i = j
        else:
            raise ValueError(f"unexpected character {ch!r} at position {i}")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def atom() -> Formula:
        tok = take()
        if tok == "~":
            return ("not", atom())
        if tok == "(":
            f = disjunction()
            if take() != ")":
                raise ValueError("unbalanced parenthesis")
            return f
        if tok in ("0", "1"):
            return ("const", int(tok))
        if isinstance(tok, tuple) and tok[0] == "var":
            return ("lit", tok[1])
        raise ValueError(f"unexpected token {tok!r}")

    def conjunction() -> Formula:
        f = atom()
        while peek() == "&":
            take()
            f = ("and", f, atom())
        return f

    def disjunction() -> Formula:
        f = conjunction()
        while peek() == "|":
            take()
            f = ("or", f, conjunction())
        return f

    result = disjunction()
    if pos != len(tokens):
        raise ValueError("trailing tokens after formula")
    return result


def formula_vars(formula: Formula) -> int:
    kind = formula[0]
    if kind == "lit":
        return abs(formula[1])
    if kind == "const":
        return 0
    if kind == "not":
        return formula_vars(formula[1])
    return max(formula_vars(formula[1]), formula_vars(formula[2]))


def eval_formula(formula: Formula, x: str) -> int:
    kind = formula[0]
    if kind == "lit":
        i = formula[1]
        bit = int(x[abs(i) - 1])
        return bit if i > 0 else 1 - bit
    if kind == "const":
        return formula[1]
    if kind == "not":
        return 1 - eval_formula(formula[1], x)
    a = eval_formula(formula[1], x)
    b = eval_formula(formula[2], x)
    return a & b if kind == "and" else a | b


def push_negations(formula: Formula, negate: bool = False) -> Formula:
    """De Morgan pass: produce an equivalent AND/OR formula with negations
    only on literals (stored as negative indices)."""
    kind = formula[0]
    if kind == "not":
        return push_negations(formula[1], not negate)
    if kind == "lit":
        return ("lit", -formula[1] if negate else formula[1])
    if kind == "const":
        return ("const", 1 - formula[1] if negate else formula[1])
    a = push_negations(formula[1], negate)
    b = push_negations(formula[2], negate)
    flipped = ("or" if kind == "and" else "and") if negate else kind
    return (flipped, a, b)


def normalize_alternating(formula: Formula) -> Formula:
    """Strictly alternate AND/OR levels by duplicating same-gate children
    under a dual gate (g = dual(g', g') preserves the value)."""
    formula = push_negations(formula)

    def walk(f: Formula, parent: Optional[str]) -> Formula:
        kind = f[0]
        if kind in ("lit", "const"):
            return f
        if kind == parent:
            dual = "or" if kind == "and" else "and"
            return (dual, walk(f, dual), walk(f, dual))
        return (kind, walk(f[1], kind), walk(f[2], kind))

    return walk(formula, None)


def is_alternating(formula: Formula) -> bool:
    def walk(f: Formula, parent: Optional[str]) -> bool:
        kind = f[0]
        if kind in ("lit", "const"):
            return True
        if kind == "not":
            return False
        if kind == parent:
            return False
        return walk(f[1], kind) and walk(f[2], kind)

    return walk(formula, None)


@dataclass(frozen=True)
class CircuitAssignment:
    """Per-input gate values Out_x(t) of an alternating formula tree."""

    formula: Formula
    n: int
    gates: dict  # node address -> subformula
    out: dict  # (node, x) -> 0/1

    def value(self, t: Node, x: str) -> int:
        return self.out[(t, x)]


def circuit_assignment(formula: Formula, inputs) -> CircuitAssignment:
    if not is_alternating(formula):
        formula = normalize_alternating(formula)
    n = formula_vars(formula)
    gates: dict[Node, Formula] = {}

    def collect(f: Formula, addr: Node):
        gates[addr] = f
        if f[0] in ("and", "or"):
            collect(f[1], addr + (0,))
            collect(f[2], addr + (1,))

    collect(formula, ())
    out = {}
    for t, sub in gates.items():
        for x in inputs:
            out[(t, x)] = eval_formula(sub, x)
    for (t, x), v in list(out.items()):
        sub = gates[t]
        if sub[0] == "and":
            assert v == out[(t + (0,), x)] * out[(t + (1,), x)]
        elif sub[0] == "or":
            assert 1 - v == (1 - out[(t + (0,), x)]) * (1 - out[(t + (1,), x)])
    return CircuitAssignment(formula=formula, n=n, gates=gates, out=out)


@dataclass(frozen=True)
class FormulaProtocolResult:
    protocol: Gamma2Protocol
    relation: RelationSpec
    structure: ProtocolStructure
    assignment: CircuitAssignment
    values_a: dict  # (node, x) -> Fraction
    values_b: dict  # (node, y) -> Fraction


def formula_structure(formula: Formula, k: int) -> ProtocolStructure:
    """Tree shape of the formula with a k-deep binary index spine under each
    leaf; OR gates are Alice nodes, AND gates Bob nodes, spines Alice-owned."""
    owners: dict[Node, str] = {}
    arities: dict[Node, int] = {}

    def spine(addr: Node, depth: int):
        if depth == 0:
            return
        owners[addr] = ALICE
        arities[addr] = 2
        spine(addr + (0,), depth - 1)
        spine(addr + (1,), depth - 1)

    def walk(f: Formula, addr: Node):
        if f[0] in ("and", "or"):
            owners[addr] = ALICE if f[0] == "or" else BOB
            arities[addr] = 2
            walk(f[1], addr + (0,))
            walk(f[2], addr + (1,))
        else:
            spine(addr, k)

    walk(formula, ())
    return ProtocolStructure(owners, arities)


def protocol_from_formula(formula: Union[Formula, str]) -> FormulaProtocolResult:
    """Classical (one-dimensional) protocol for the formula's differing-
    coordinate relation, together with its 0/1 node-indicator tables."""
    if isinstance(formula, str):
        formula = parse_formula(formula)
    if not is_alternating(formula):
        formula = normalize_alternating(formula)
    n = formula_vars(formula)
    if n == 0:
        raise ValueError("formula has no variables")
    table = TruthTable.from_callable(lambda x: eval_formula(formula, x), n)
    if table.is_constant():
        raise ValueError("formula computes a constant function")
    relation = kw_relation(table)
    k = relation.k
    assignment = circuit_assignment(formula, relation.xs + relation.ys)
    structure = formula_structure(assignment.formula, k)

    values_a: dict = {}
    values_b: dict = {}

    def fill(addr: Node, f: Formula):
        if f[0] in ("and", "or"):
            t0, t1 = addr + (0,), addr + (1,)
            if f[0] == "or":
                for x in relation.xs:
                    out0 = assignment.value(t0, x)
                    values_a[(t0, x)] = values_a[(addr, x)] * out0
                    values_a[(t1, x)] = values_a[(addr, x)] * (1 - out0)
                for y in relation.ys:
                    values_b[(t0, y)] = values_b[(addr, y)]
                    values_b[(t1, y)] = values_b[(addr, y)]
            else:
                for y in relation.ys:
                    out0 = assignment.value(t0, y)
                    values_b[(t0, y)] = values_b[(addr, y)] * (1 - out0)
                    values_b[(t1, y)] = values_b[(addr, y)] * out0
                for x in relation.xs:
                    values_a[(t0, x)] = values_a[(addr, x)]
                    values_a[(t1, x)] = values_a[(addr, x)]
            fill(t0, f[1])
            fill(t1, f[2])
        else:
            if f[0] == "lit":
                index_bits = bits_of(abs(f[1]) - 1, k)
            else:
                index_bits = (0,) * k
            frontier = [addr]
            for bit in index_bits:
                nxt = []
                for t in frontier:
                    for c in (0, 1):
                        for x in relation.xs:
                            values_a[(t + (c,), x)] = (
                                values_a[(t, x)] if c == bit else Fraction(0)
                            )
                        for y in relation.ys:
                            values_b[(t + (c,), y)] = values_b[(t, y)]
                    nxt.extend([t + (0,), t + (1,)])
                frontier = nxt

    for x in relation.xs:
        values_a[((), x)] = Fraction(1)
    for y in relation.ys:
        values_b[((), y)] = Fraction(1)
    fill((), assignment.formula)

    space = InnerProductSpace("classical")
    e = Vec.of_atom(space, space.add_unit("e"))
    zero = space.zero_vec()
    alpha = {
        key: (e if v == 1 else zero) for key, v in values_a.items()
    }
    beta = {key: (e if v == 1 else zero) for key, v in values_b.items()}
    protocol = Gamma2Protocol(
        structure=structure,
        space=space,
        xs=relation.xs,
        ys=relation.ys,
        alpha=alpha,
        beta=beta,
    )
    return FormulaProtocolResult(
        protocol=protocol,
        relation=relation,
        structure=structure,
        assignment=assignment,
        values_a=values_a,
        values_b=values_b,
    )


def hqfp_embedding(formula: Union[Formula, str]) -> tuple[FormulaProtocolResult, PrimalSolution]:
    """Rank-1 solution of the protocol feasibility problem induced by the
    formula shape, in the canonical variable order."""
    result = protocol_from_formula(formula)
    variables = protocol_variables(result.structure, result.relation.xs, result.relation.ys)
    x = [
        result.values_a[(t, u)] if side == "A" else result.values_b[(t, u)]
        for side, t, u in variables
    ]
    return result, PrimalSolution.from_rank1(x)
