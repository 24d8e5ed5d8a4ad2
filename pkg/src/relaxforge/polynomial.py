"""Sparse multivariate polynomials over the rationals.

Monomials are sorted tuples of variable keys (one entry per power), so the
representation is canonical and equality is structural.  Only small degrees
appear in practice; arithmetic is kept simple and exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union


class Polynomial:
    __slots__ = ("terms",)

    def __init__(self, terms: Union[dict, None] = None):
        self.terms: dict[tuple, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                c = Fraction(coeff)
                if c:
                    self.terms[tuple(sorted(mono))] = self.terms.get(tuple(sorted(mono)), Fraction(0)) + c
            self.terms = {m: c for m, c in self.terms.items() if c}

    @classmethod
    def constant(cls, c: Union[int, Fraction]) -> "Polynomial":
        return cls({(): Fraction(c)})

    @classmethod
    def variable(cls, key) -> "Polynomial":
        return cls({(key,): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        out = Polynomial()
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m, Fraction(0)) + c
            if v:
                terms[m] = v
            elif m in terms:
                del terms[m]
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        out = Polynomial()
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            out = Polynomial()
            if c:
                out.terms = {m: v * c for m, v in self.terms.items()}
            return out
        out: dict[tuple, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                v = out.get(m, Fraction(0)) + c1 * c2
                if v:
                    out[m] = v
                elif m in out:
                    del out[m]
        p = Polynomial()
        p.terms = out
        return p

    __rmul__ = __mul__

    def square(self) -> "Polynomial":
        return self * self

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def first_monomial(self):
        """Smallest non-constant monomial by sort order, or None."""
        candidates = [m for m in self.terms if m]
        return min(candidates) if candidates else None

    def __repr__(self) -> str:
        if not self.terms:
            return "Polynomial(0)"
        body = " + ".join(
            f"{c}*{'*'.join(map(str, m)) if m else '1'}" for m, c in sorted(self.terms.items())
        )
        return f"Polynomial({body})"
