"""Symbolic inner-product spaces.

Vectors are never given coordinates.  A space declares named atom families
with an exact pairwise Gram, and every vector is a sparse Scalar combination
of atoms; all verification reduces to inner products computed from the
declared Gram.  Families supported:

  * unit      -- orthonormal atoms,
  * flower    -- equal norm ``a`` on the diagonal, common overlap ``b`` off it,
  * tensor    -- pairs of atoms from two sibling families, product Gram,
                 optionally rescaled by a positive rational Gram factor.

Distinct families are mutually orthogonal.  Whole spaces can also be tensored
(for sequential protocol composition), giving atoms that are pairs of atoms
of the two factors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import InfeasibleFlowerError, IrrationalGramError, SpaceMismatchError
from .scalar import ONE, ZERO, Scalar
from .symmatrix import SymMatrixQ

_uid_counter = itertools.count(1)


@dataclass(frozen=True)
class Atom:
    family: str
    index: object  # int, str, or (i, j) for sibling-tensor atoms


@dataclass(frozen=True)
class TensorAtom:
    left: object
    right: object


@dataclass(frozen=True)
class UnitFamily:
    name: str
    labels: tuple


@dataclass(frozen=True)
class FlowerFamily:
    """d equal-norm atoms with one common pairwise overlap.

    Admissible iff a >= b and b >= -a/(d-1); the members sum to the zero
    vector exactly when b sits on that lower boundary.
    """

    name: str
    d: int
    a: Fraction
    b: Fraction

    @property
    def sums_to_zero(self) -> bool:
        return self.b == -self.a / (self.d - 1)

    def gram(self) -> SymMatrixQ:
        return SymMatrixQ(
            [[self.a if i == j else self.b for j in range(self.d)] for i in range(self.d)]
        )


@dataclass(frozen=True)
class SiblingTensorFamily:
    """Atoms (u, s) with Gram  scale * <u,u'> * <s,s'>  over two sibling families."""

    name: str
    left: str
    right: str
    scale: Fraction


class SpaceBase:
    def atom_inner(self, x, y) -> Scalar:
        raise NotImplementedError

    def zero_vec(self) -> "Vec":
        return Vec(self, {})

    def _cached_inner(self, u: "Vec", v: "Vec") -> Scalar:
        key = (u.uid, v.uid) if u.uid <= v.uid else (v.uid, u.uid)
        cache = self._inner_cache
        hit = cache.get(key)
        if hit is None:
            hit = self._inner_raw(u, v)
            cache[key] = hit
        return hit

    def _inner_raw(self, u: "Vec", v: "Vec") -> Scalar:
        total = ZERO
        for a, ca in u.coeffs.items():
            for b, cb in v.coeffs.items():
                g = self.atom_inner(a, b)
                if g:
                    total = total + ca * cb * g
        return total


class InnerProductSpace(SpaceBase):
    """A space presented by a list of mutually orthogonal atom families."""

    def __init__(self, name: str = "space"):
        self.name = name
        self.families: dict[str, object] = {}
        self._atom_cache: dict[tuple, Scalar] = {}
        self._inner_cache: dict[tuple, Scalar] = {}

    def _register(self, fam) -> None:
        if fam.name in self.families:
            raise ValueError(f"family {fam.name!r} already declared")
        self.families[fam.name] = fam

    def add_units(self, name: str, labels: Iterable) -> list[Atom]:
        fam = UnitFamily(name=name, labels=tuple(labels))
        self._register(fam)
        return [Atom(name, lab) for lab in fam.labels]

    def add_unit(self, name: str) -> Atom:
        return self.add_units(name, (0,))[0]

    def add_flower(
        self, name: str, d: int, a: Union[int, Fraction], b: Union[int, Fraction]
    ) -> FlowerFamily:
        a, b = Fraction(a), Fraction(b)
        if d < 2:
            raise InfeasibleFlowerError(f"flower needs d >= 2, got d={d}")
        if a < b:
            raise InfeasibleFlowerError(f"flower needs a >= b, got a={a} < b={b}")
        if b < -a / (d - 1):
            raise InfeasibleFlowerError(
                f"flower needs b >= -a/(d-1), got b={b} < {-a / (d - 1)}"
            )
        fam = FlowerFamily(name=name, d=d, a=a, b=b)
        self._register(fam)
        return fam

    def add_tensor(
        self, name: str, left: str, right: str, scale: Union[int, Fraction] = 1
    ) -> SiblingTensorFamily:
        if left not in self.families or right not in self.families:
            raise ValueError("tensor factors must be declared families")
        scale = Fraction(scale)
        if scale <= 0:
            raise ValueError("tensor Gram scale must be positive")
        fam = SiblingTensorFamily(name=name, left=left, right=right, scale=scale)
        self._register(fam)
        return fam

    def atom(self, family: str, index) -> Atom:
        return Atom(family, index)

    def flower_atom(self, family: str, i: int) -> Atom:
        return Atom(family, i)

    def tensor_atom(self, family: str, i, j) -> Atom:
        return Atom(family, (i, j))

    def _family_inner(self, fam, i, j) -> Scalar:
        if isinstance(fam, UnitFamily):
            return ONE if i == j else ZERO
        if isinstance(fam, FlowerFamily):
            return Scalar.rational(fam.a if i == j else fam.b)
        if isinstance(fam, SiblingTensorFamily):
            li = self._family_inner(self.families[fam.left], i[0], j[0])
            if not li:
                return ZERO
            ri = self._family_inner(self.families[fam.right], i[1], j[1])
            if not ri:
                return ZERO
            return Scalar.rational(fam.scale) * li * ri
        raise TypeError(f"unknown family kind {fam!r}")

    def atom_inner(self, x: Atom, y: Atom) -> Scalar:
        if x.family != y.family:
            return ZERO
        key = (x.family, x.index, y.index)
        hit = self._atom_cache.get(key)
        if hit is None:
            hit = self._family_inner(self.families[x.family], x.index, y.index)
            self._atom_cache[key] = hit
            self._atom_cache[(x.family, y.index, x.index)] = hit
        return hit


class TensorProductSpace(SpaceBase):
    """Tensor product of two spaces; atoms are pairs with product Gram."""

    def __init__(self, left: SpaceBase, right: SpaceBase, name: str = ""):
        self.left = left
        self.right = right
        self.name = name or f"({getattr(left, 'name', '?')} (x) {getattr(right, 'name', '?')})"
        self._atom_cache: dict[tuple, Scalar] = {}
        self._inner_cache: dict[tuple, Scalar] = {}

    def atom_inner(self, x: TensorAtom, y: TensorAtom) -> Scalar:
        li = self.left.atom_inner(x.left, y.left)
        if not li:
            return ZERO
        ri = self.right.atom_inner(x.right, y.right)
        if not ri:
            return ZERO
        return li * ri

    def tensor_vec(self, u: "Vec", v: "Vec") -> "Vec":
        if u.space is not self.left or v.space is not self.right:
            raise SpaceMismatchError("tensor factors from wrong spaces")
        coeffs = {}
        for a, ca in u.coeffs.items():
            for b, cb in v.coeffs.items():
                coeffs[TensorAtom(a, b)] = ca * cb
        out = Vec(self, coeffs)
        out.tensor_of = (u, v)
        return out

    def _inner_raw(self, u: "Vec", v: "Vec") -> Scalar:
        # pure tensors factor through the (cached) component inner products
        if u.tensor_of is not None and v.tensor_of is not None:
            lu, ru = u.tensor_of
            lv, rv = v.tensor_of
            li = inner(lu, lv)
            if not li:
                return ZERO
            return li * inner(ru, rv)
        return SpaceBase._inner_raw(self, u, v)


class Vec:
    """Sparse Scalar combination of atoms of one space.  Treat as immutable."""

    __slots__ = ("space", "coeffs", "uid", "tensor_of")

    def __init__(self, space: SpaceBase, coeffs: dict):
        self.space = space
        self.coeffs = {a: c for a, c in coeffs.items() if c}
        self.uid = next(_uid_counter)
        self.tensor_of = None

    @classmethod
    def of_atom(cls, space: SpaceBase, atom, coeff: Union[int, Fraction, Scalar] = 1) -> "Vec":
        c = coeff if isinstance(coeff, Scalar) else Scalar.rational(coeff)
        return cls(space, {atom: c})

    @classmethod
    def combination(cls, space: SpaceBase, pairs: Iterable[tuple]) -> "Vec":
        coeffs: dict = {}
        for atom, c in pairs:
            c = c if isinstance(c, Scalar) else Scalar.rational(c)
            if atom in coeffs:
                coeffs[atom] = coeffs[atom] + c
            else:
                coeffs[atom] = c
        return cls(space, coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Vec") -> "Vec":
        if self.space is not other.space:
            raise SpaceMismatchError("cannot add vectors from different spaces")
        coeffs = dict(self.coeffs)
        for a, c in other.coeffs.items():
            coeffs[a] = coeffs.get(a, ZERO) + c
        return Vec(self.space, coeffs)

    def __sub__(self, other: "Vec") -> "Vec":
        return self + other.scale(-1)

    def scale(self, c: Union[int, Fraction, Scalar]) -> "Vec":
        c = c if isinstance(c, Scalar) else Scalar.rational(c)
        if not c:
            return Vec(self.space, {})
        return Vec(self.space, {a: v * c for a, v in self.coeffs.items()})

    def same_coeffs(self, other: "Vec") -> bool:
        return self.space is other.space and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Vec(0)"
        body = " + ".join(f"({c})*{a}" for a, c in self.coeffs.items())
        return f"Vec({body})"


def inner(u: Vec, v: Vec) -> Scalar:
    """Exact inner product from the declared atom Gram; bilinear and symmetric."""
    if u.space is not v.space:
        raise SpaceMismatchError("inner product of vectors from different spaces")
    if not u.coeffs or not v.coeffs:
        return ZERO
    return u.space._cached_inner(u, v)


def norm2(v: Vec) -> Scalar:
    return inner(v, v)


def rational_inner(u: Vec, v: Vec, context: str = "gram") -> Fraction:
    value = inner(u, v)
    if not value.is_rational():
        raise IrrationalGramError(
            f"{context}: inner product {value} is irrational", pair=(u, v)
        )
    return value.as_fraction()


def gram_of(family: list[Vec]) -> SymMatrixQ:
    """Exact Gram matrix of a vector family; every entry must be rational."""
    n = len(family)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            value = inner(family[i], family[j])
            if not value.is_rational():
                raise IrrationalGramError(
                    f"gram entry ({i},{j}) = {value} is irrational", pair=(i, j)
                )
            rows[i][j] = rows[j][i] = value.as_fraction()
    return SymMatrixQ(rows)


def flower_space(
    d: int, a: Union[int, Fraction], b: Union[int, Fraction], name: str = "flower"
) -> tuple[InnerProductSpace, FlowerFamily, list[Atom]]:
    """Fresh space holding one flower family; returns (space, family, atoms)."""
    space = InnerProductSpace(name=name)
    fam = space.add_flower(name, d, a, b)
    atoms = [Atom(name, i) for i in range(d)]
    return space, fam, atoms
