"""Bit-exact JSON interchange for every artifact the workbench produces.

Rationals travel as "p/q" strings, scalars as term lists with explicit
radicands, spaces as family declarations, and protocols as structure plus
coefficient tables indexed in canonical node/input order.  Every document
carries schema: 1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .conic import (
    Constraint,
    DualWitness,
    FeasibilityProblem,
    PrimalSolution,
)
from .gamma2 import Gamma2Protocol
from .prototree import ProtocolStructure
from .qphp import PigeonFamily
from .quantum_lab import QLabProtocol
from .relations import RelationSpec
from .reports import VerificationReport
from .scalar import Scalar
from .sos import Degree2SoSCert, WeightedSquare
from .space import (
    Atom,
    FlowerFamily,
    InnerProductSpace,
    SiblingTensorFamily,
    TensorAtom,
    TensorProductSpace,
    UnitFamily,
    Vec,
)
from .symmatrix import SymMatrixQ

SCHEMA = 1


def frac_to_json(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

def frac_from_json(s) -> Fraction:
    return Fraction(s)


def scalar_to_json(s: Scalar) -> list:
    return [
        {"num": c.numerator, "den": c.denominator, "radicand": r} for c, r in s.terms
    ]


def scalar_from_json(data) -> Scalar:
    return Scalar(
        [(Fraction(t["num"], t["den"]), t["radicand"]) for t in data]
    )


def _index_to_json(index):
    if isinstance(index, (int, str)):
        return index
    if isinstance(index, tuple):
        return {"t": [_index_to_json(v) for v in index]}
    raise TypeError(f"cannot encode atom index {index!r}")


def _index_from_json(data):
    if isinstance(data, dict):
        return tuple(_index_from_json(v) for v in data["t"])
    return data


def matrix_to_json(m: SymMatrixQ) -> dict:
    return {
        "n": m.n,
        "rows": [[frac_to_json(v) for v in row] for row in m.rows],
    }


def matrix_from_json(data) -> SymMatrixQ:
    return SymMatrixQ([[Fraction(v) for v in row] for row in data["rows"]])


def problem_to_json(p: FeasibilityProblem) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "feasibility_problem",
        "n": p.n,
        "mode": p.mode,
        "labels": list(p.labels),
        "constraints": [
            {
                "label": c.label,
                "b": frac_to_json(c.rhs),
                "A": {
                    f"{i},{j}": frac_to_json(v)
                    for (i, j), v in sorted(c.matrix.nonzeros().items())
                    if i <= j
                },
            }
            for c in p.constraints
        ],
    }


def problem_from_json(data) -> FeasibilityProblem:
    constraints = []
    for c in data["constraints"]:
        entries = {}
        for key, v in c["A"].items():
            i, j = (int(part) for part in key.split(","))
            entries[(i, j)] = Fraction(v)
        constraints.append(
            Constraint(
                SymMatrixQ.from_entries(data["n"], entries),
                Fraction(c["b"]),
                c["label"],
            )
        )
    return FeasibilityProblem(
        n=data["n"],
        mode=data["mode"],
        constraints=tuple(constraints),
        labels=tuple(data["labels"]),
    )


def witness_to_json(w: DualWitness) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "dual_witness",
        "w": [frac_to_json(v) for v in w.weights],
    }


def witness_from_json(data) -> DualWitness:
    return DualWitness.of([Fraction(v) for v in data["w"]])


def primal_to_json(s: PrimalSolution) -> dict:
    out = {"schema": SCHEMA, "kind": "primal_solution"}
    if s.rank1 is not None:
        out["rank1"] = [frac_to_json(v) for v in s.rank1]
    elif s.gram is not None:
        out["gram"] = matrix_to_json(s.gram)
    else:
        raise ValueError("vector-family solutions serialize via their Gram")
    return out


def primal_from_json(data) -> PrimalSolution:
    if "rank1" in data:
        return PrimalSolution.from_rank1([Fraction(v) for v in data["rank1"]])
    return PrimalSolution.from_gram(matrix_from_json(data["gram"]))


def cert_to_json(cert: Degree2SoSCert) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "sos_certificate",
        "n": cert.n,
        "weights": [frac_to_json(v) for v in cert.weights],
        "squares": [
            {
                "weight": frac_to_json(sq.weight),
                "form": {f"{k},{j}": frac_to_json(c) for (k, j), c in sq.form},
            }
            for sq in cert.squares
        ],
        "constant": frac_to_json(cert.constant),
    }


def cert_from_json(data) -> Degree2SoSCert:
    squares = []
    for sq in data["squares"]:
        form = []
        for key, c in sq["form"].items():
            k, j = (int(part) for part in key.split(","))
            form.append(((k, j), Fraction(c)))
        squares.append(
            WeightedSquare(weight=Fraction(sq["weight"]), form=tuple(form))
        )
    return Degree2SoSCert(
        n=data["n"],
        weights=tuple(Fraction(v) for v in data["weights"]),
        squares=tuple(squares),
        constant=Fraction(data["constant"]),
    )


def space_to_json(space) -> dict:
    if isinstance(space, TensorProductSpace):
        return {
            "kind": "tensor_space",
            "name": space.name,
            "left": space_to_json(space.left),
            "right": space_to_json(space.right),
        }
    families = []
    for fam in space.families.values():
        if isinstance(fam, UnitFamily):
            families.append(
                {
                    "kind": "unit",
                    "name": fam.name,
                    "labels": [_index_to_json(v) for v in fam.labels],
                }
            )
        elif isinstance(fam, FlowerFamily):
            families.append(
                {
                    "kind": "flower",
                    "name": fam.name,
                    "d": fam.d,
                    "a": frac_to_json(fam.a),
                    "b": frac_to_json(fam.b),
                }
            )
        elif isinstance(fam, SiblingTensorFamily):
            families.append(
                {
                    "kind": "tensor",
                    "name": fam.name,
                    "left": fam.left,
                    "right": fam.right,
                    "scale": frac_to_json(fam.scale),
                }
            )
        else:
            raise TypeError(f"unknown family {fam!r}")
    return {"kind": "space", "name": space.name, "families": families}


def space_from_json(data):
    if data["kind"] == "tensor_space":
        return TensorProductSpace(
            space_from_json(data["left"]),
            space_from_json(data["right"]),
            name=data.get("name", ""),
        )
    space = InnerProductSpace(name=data.get("name", "space"))
    for fam in data["families"]:
        if fam["kind"] == "unit":
            space.add_units(fam["name"], [_index_from_json(v) for v in fam["labels"]])
        elif fam["kind"] == "flower":
            space.add_flower(fam["name"], fam["d"], Fraction(fam["a"]), Fraction(fam["b"]))
        elif fam["kind"] == "tensor":
            space.add_tensor(
                fam["name"], fam["left"], fam["right"], Fraction(fam["scale"])
            )
        else:
            raise ValueError(f"unknown family kind {fam['kind']!r}")
    return space


def _atom_to_json(atom):
    if isinstance(atom, Atom):
        return {"family": atom.family, "index": _index_to_json(atom.index)}
    if isinstance(atom, TensorAtom):
        return {"tensor": [_atom_to_json(atom.left), _atom_to_json(atom.right)]}
    raise TypeError(f"cannot encode atom {atom!r}")


def _atom_from_json(data):
    if "tensor" in data:
        left, right = data["tensor"]
        return TensorAtom(_atom_from_json(left), _atom_from_json(right))
    return Atom(data["family"], _index_from_json(data["index"]))


def vec_to_json(v: Vec) -> list:
    return [[_atom_to_json(a), scalar_to_json(c)] for a, c in v.coeffs.items()]


def vec_from_json(data, space) -> Vec:
    return Vec(
        space,
        {_atom_from_json(a): scalar_from_json(c) for a, c in data},
    )


def structure_to_json(st: ProtocolStructure):
    return st.to_nested()


def structure_from_json(data) -> ProtocolStructure:
    return ProtocolStructure.from_nested(data)


def pigeon_family_to_json(f: PigeonFamily) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "pigeon_family",
        "p": f.p,
        "h": f.h,
        "space": space_to_json(f.space),
        "initial": [vec_to_json(v) for v in f.initial],
        "parts": [[vec_to_json(v) for v in row] for row in f.parts],
    }


def pigeon_family_from_json(data) -> PigeonFamily:
    space = space_from_json(data["space"])
    return PigeonFamily(
        space=space,
        p=data["p"],
        h=data["h"],
        initial=tuple(vec_from_json(v, space) for v in data["initial"]),
        parts=tuple(
            tuple(vec_from_json(v, space) for v in row) for row in data["parts"]
        ),
    )


def relation_to_json(r: RelationSpec) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "relation",
        "name": r.name,
        "k": r.k,
        "xs": list(r.xs),
        "ys": list(r.ys),
        "accepts": sorted(
            [x, y, "".join(map(str, z))] for (x, y, z) in r.accepts
        ),
    }


def relation_from_json(data) -> RelationSpec:
    accepts = frozenset(
        (x, y, tuple(int(c) for c in z)) for x, y, z in data["accepts"]
    )
    return RelationSpec(
        xs=tuple(data["xs"]),
        ys=tuple(data["ys"]),
        k=data["k"],
        accepts=accepts,
        name=data.get("name", ""),
    )


def gamma2_protocol_to_json(p: Gamma2Protocol) -> dict:
    nodes = p.structure.nodes()
    return {
        "schema": SCHEMA,
        "kind": "gamma2_protocol",
        "structure": structure_to_json(p.structure),
        "xs": list(p.xs),
        "ys": list(p.ys),
        "space": space_to_json(p.space),
        "alpha": [[vec_to_json(p.a(t, x)) for x in p.xs] for t in nodes],
        "beta": [[vec_to_json(p.b(t, y)) for y in p.ys] for t in nodes],
    }


def gamma2_protocol_from_json(data) -> Gamma2Protocol:
    structure = structure_from_json(data["structure"])
    space = space_from_json(data["space"])
    xs = tuple(data["xs"])
    ys = tuple(data["ys"])
    nodes = structure.nodes()
    alpha = {}
    beta = {}
    for t, row in zip(nodes, data["alpha"]):
        for x, vec in zip(xs, row):
            alpha[(t, x)] = vec_from_json(vec, space)
    for t, row in zip(nodes, data["beta"]):
        for y, vec in zip(ys, row):
            beta[(t, y)] = vec_from_json(vec, space)
    return Gamma2Protocol(
        structure=structure, space=space, xs=xs, ys=ys, alpha=alpha, beta=beta
    )


def qlab_protocol_to_json(p: QLabProtocol) -> dict:
    nodes = p.structure.nodes()
    return {
        "schema": SCHEMA,
        "kind": "qlab_protocol",
        "structure": structure_to_json(p.structure),
        "xs": list(p.xs),
        "ys": list(p.ys),
        "space": space_to_json(p.space),
        "psi": [
            [[vec_to_json(p.state(t, x, y)) for y in p.ys] for x in p.xs]
            for t in nodes
        ],
    }


def qlab_protocol_from_json(data) -> QLabProtocol:
    structure = structure_from_json(data["structure"])
    space = space_from_json(data["space"])
    xs = tuple(data["xs"])
    ys = tuple(data["ys"])
    psi = {}
    for t, grid in zip(structure.nodes(), data["psi"]):
        for x, row in zip(xs, grid):
            for y, vec in zip(ys, row):
                psi[(t, x, y)] = vec_from_json(vec, space)
    return QLabProtocol(structure=structure, space=space, xs=xs, ys=ys, psi=psi)


def report_to_json(r: VerificationReport) -> dict:
    return {
        "ok": r.ok,
        "checked": r.checked,
        "violations": [
            {"kind": v.kind, "where": v.where, "detail": v.detail}
            for v in r.violations
        ],
    }
