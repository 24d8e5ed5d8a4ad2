"""Exact arithmetic in real multi-quadratic fields.

A scalar is a finite sum  sum_i  c_i * sqrt(r_i)  with rational c_i and
squarefree positive integer radicands r_i.  The term with radicand 1 is the
rational part.  Canonical form (radicands squarefree, strictly increasing,
no zero coefficients) makes equality a structural check, so zero-testing is
exact and free of sign-determination issues.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

from .errors import UnsupportedDivisionError

RationalLike = Union[int, Fraction]


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return (s, r) with n = s*s*r and r squarefree, for n >= 1."""
    if n < 1:
        raise ValueError(f"radicand must be positive, got {n}")
    s, r = 1, 1
    d = 2
    m = n
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            s *= d ** (e // 2)
            if e % 2:
                r *= d
        d += 1 if d == 2 else 2
    return s, r * m


class Scalar:
    """Immutable exact scalar; supports +, -, * and restricted division."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[Fraction, int]] = (), *, _canonical: bool = False):
        if _canonical:
            self._terms = tuple(terms)
            return
        acc: dict[int, Fraction] = {}
        for coeff, rad in terms:
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            s, r = squarefree_decompose(rad)
            c = coeff * s
            acc[r] = acc.get(r, Fraction(0)) + c
        self._terms = tuple(sorted((r, c) for r, c in acc.items() if c != 0))
        self._terms = tuple((c, r) for r, c in self._terms)

    @property
    def terms(self) -> tuple[tuple[Fraction, int], ...]:
        return self._terms

    @classmethod
    def rational(cls, value: RationalLike) -> "Scalar":
        v = Fraction(value)
        if v == 0:
            return _ZERO
        return cls(((v, 1),), _canonical=True)

    @classmethod
    def sqrt(cls, value: RationalLike) -> "Scalar":
        """Exact square root of a non-negative rational: sqrt(p/q) = sqrt(p*q)/q."""
        v = Fraction(value)
        if v < 0:
            raise ValueError(f"cannot take sqrt of negative rational {v}")
        if v == 0:
            return _ZERO
        s, r = squarefree_decompose(v.numerator * v.denominator)
        return cls(((Fraction(s, v.denominator), r),), _canonical=True)

    @staticmethod
    def _coerce(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar.rational(value)
        return NotImplemented  # type: ignore[return-value]

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self._terms[0][1] == 1)

    def as_fraction(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and self._terms[0][1] == 1:
            return self._terms[0][0]
        raise ValueError(f"scalar {self} is not rational")

    def approx(self) -> float:
        return sum(float(c) * r ** 0.5 for c, r in self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __add__(self, other) -> "Scalar":
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms:
            return other
        if not other._terms:
            return self
        acc = dict((r, c) for c, r in self._terms)
        for c, r in other._terms:
            acc[r] = acc.get(r, Fraction(0)) + c
        return Scalar(
            tuple((c, r) for r, c in sorted(acc.items()) if c != 0), _canonical=True
        )

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(tuple((-c, r) for c, r in self._terms), _canonical=True)

    def __sub__(self, other) -> "Scalar":
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        return (-self) + other

    def __mul__(self, other) -> "Scalar":
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return _ZERO
        acc: dict[int, Fraction] = {}
        for c1, r1 in self._terms:
            for c2, r2 in other._terms:
                if r1 == r2:
                    r, c = 1, c1 * c2 * r1
                else:
                    from math import gcd

                    g = gcd(r1, r2)
                    r = (r1 // g) * (r2 // g)
                    c = c1 * c2 * g
                acc[r] = acc.get(r, Fraction(0)) + c
        return Scalar(
            tuple((c, r) for r, c in sorted(acc.items()) if c != 0), _canonical=True
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            raise UnsupportedDivisionError("division by zero scalar")
        if len(other._terms) != 1:
            raise UnsupportedDivisionError(
                f"division only supported by single-term scalars, got {other}"
            )
        c, r = other._terms[0]
        # 1 / (c*sqrt(r)) = sqrt(r) / (c*r)
        inv = Scalar(((Fraction(1) / (c * r), r),), _canonical=True)
        return self * inv

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (c, r) in enumerate(self._terms):
            sign = "-" if c < 0 else ("+" if i else "")
            mag = abs(c)
            if r == 1:
                body = str(mag)
            elif mag == 1:
                body = f"sqrt({r})"
            elif mag.denominator == 1:
                body = f"{mag}*sqrt({r})"
            else:
                body = f"({mag})*sqrt({r})"
            parts.append(f"{sign}{body}" if not i else f" {sign} {body}")
        return "".join(parts)


_ZERO = Scalar((), _canonical=True)

ZERO = _ZERO
ONE = Scalar.rational(1)
