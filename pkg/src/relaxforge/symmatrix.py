"""Symmetric rational matrices and exact positive-semidefiniteness certificates.

Matrices are stored sparsely (most constraint matrices have a handful of
entries); a dense grid is materialized only when needed.  A matrix is
certified PSD by an exact L*D*L^T factorization with non-negative diagonal,
or refuted by a rational vector v with v^T M v < 0.  The elimination is
fraction-free (Bareiss updates on a common-denominator integer scaling), so
cost is about rank * n^2 integer operations and low-rank matrices are cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

_ZERO = Fraction(0)


class SymMatrixQ:
    """Immutable symmetric matrix with Fraction entries, sparse storage."""

    __slots__ = ("n", "_entries", "_grid")

    def __init__(self, rows: Sequence[Sequence[Union[int, Fraction]]]):
        n = len(rows)
        entries: dict[tuple[int, int], Fraction] = {}
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("matrix must be square")
            for j, v in enumerate(row):
                v = Fraction(v)
                if v:
                    entries[(i, j)] = v
        for (i, j), v in entries.items():
            if entries.get((j, i), _ZERO) != v:
                raise ValueError(f"matrix not symmetric at ({i},{j})")
        self.n = n
        self._entries = entries
        self._grid = None

    @classmethod
    def _from_entries_trusted(cls, n: int, entries: dict) -> "SymMatrixQ":
        m = cls.__new__(cls)
        m.n = n
        m._entries = entries
        m._grid = None
        return m

    @classmethod
    def zero(cls, n: int) -> "SymMatrixQ":
        return cls._from_entries_trusted(n, {})

    @classmethod
    def identity(cls, n: int) -> "SymMatrixQ":
        one = Fraction(1)
        return cls._from_entries_trusted(n, {(i, i): one for i in range(n)})

    @classmethod
    def from_entries(cls, n: int, entries: dict[tuple[int, int], Fraction]) -> "SymMatrixQ":
        """Build from a sparse dict; (i,j) sets both (i,j) and (j,i)."""
        full: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in entries.items():
            v = Fraction(v)
            if not v:
                continue
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"entry ({i},{j}) out of range")
            full[(i, j)] = v
            full[(j, i)] = v
        return cls._from_entries_trusted(n, full)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return self._entries.get(ij, _ZERO)

    def nonzeros(self) -> dict[tuple[int, int], Fraction]:
        return self._entries

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        if self._grid is None:
            grid = [[_ZERO] * self.n for _ in range(self.n)]
            for (i, j), v in self._entries.items():
                grid[i][j] = v
            self._grid = tuple(tuple(row) for row in grid)
        return self._grid

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymMatrixQ)
            and self.n == other.n
            and self._entries == other._entries
        )

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._entries.items())))

    def __add__(self, other: "SymMatrixQ") -> "SymMatrixQ":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        entries = dict(self._entries)
        for ij, v in other._entries.items():
            s = entries.get(ij, _ZERO) + v
            if s:
                entries[ij] = s
            elif ij in entries:
                del entries[ij]
        return SymMatrixQ._from_entries_trusted(self.n, entries)

    def scale(self, c: Union[int, Fraction]) -> "SymMatrixQ":
        c = Fraction(c)
        if not c:
            return SymMatrixQ.zero(self.n)
        return SymMatrixQ._from_entries_trusted(
            self.n, {ij: c * v for ij, v in self._entries.items()}
        )

    def frobenius(self, other: "SymMatrixQ") -> Fraction:
        """<A, B> = sum_ij A_ij * B_ij, iterating the sparser operand."""
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        a, b = self._entries, other._entries
        if len(b) < len(a):
            a, b = b, a
        total = _ZERO
        for ij, v in a.items():
            w = b.get(ij)
            if w is not None:
                total += v * w
        return total

    def quad_form(self, v: Sequence[Union[int, Fraction]]) -> Fraction:
        """v^T M v, exactly."""
        if len(v) != self.n:
            raise ValueError("dimension mismatch")
        total = _ZERO
        for (i, j), a in self._entries.items():
            if v[i] and v[j]:
                total += a * v[i] * v[j]
        return total

    def __repr__(self) -> str:
        return f"SymMatrixQ({[[str(v) for v in row] for row in self.rows]})"


def weighted_sum(matrices: Iterable[SymMatrixQ], weights: Sequence[Fraction]) -> SymMatrixQ:
    mats = list(matrices)
    if len(mats) != len(weights):
        raise ValueError("length mismatch")
    n = mats[0].n
    entries: dict[tuple[int, int], Fraction] = {}
    for m, w in zip(mats, weights):
        if not w:
            continue
        if m.n != n:
            raise ValueError("dimension mismatch")
        for ij, v in m.nonzeros().items():
            s = entries.get(ij, _ZERO) + w * v
            if s:
                entries[ij] = s
            elif ij in entries:
                del entries[ij]
    return SymMatrixQ._from_entries_trusted(n, entries)


@dataclass(frozen=True)
class LdlFactorization:
    """M = L * diag(D) * L^T with L unit lower triangular and D >= 0 entrywise."""

    lower: tuple[tuple[Fraction, ...], ...]
    diag: tuple[Fraction, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)

    def reconstruct(self) -> SymMatrixQ:
        n = len(self.diag)
        rows = [[_ZERO] * n for _ in range(n)]
        for k, d in enumerate(self.diag):
            if not d:
                continue
            col = [self.lower[i][k] for i in range(n)]
            for i in range(n):
                if not col[i]:
                    continue
                for j in range(i + 1):
                    if col[j]:
                        rows[i][j] += d * col[i] * col[j]
        for i in range(n):
            for j in range(i):
                rows[j][i] = rows[i][j]
        return SymMatrixQ(rows)


@dataclass(frozen=True)
class NegativeWitness:
    """Rational direction with v^T M v < 0, refuting positive semidefiniteness."""

    vector: tuple[Fraction, ...]
    value: Fraction


PsdCertificate = Union[LdlFactorization, NegativeWitness]


def _backsubstitute(lower, pivots, tail: dict[int, Fraction], n: int) -> tuple[Fraction, ...]:
    """Extend a residual-coordinate direction to kill all processed L columns."""
    v = [_ZERO] * n
    for idx, val in tail.items():
        v[idx] = val
    for k in reversed(pivots):
        s = _ZERO
        for j in range(k + 1, n):
            if lower[j][k] and v[j]:
                s += lower[j][k] * v[j]
        v[k] = -s
    return tuple(v)


def psd_certificate(m: SymMatrixQ) -> PsdCertificate:
    """Certify M PSD via exact LDL^T, or produce a negative-value witness.

    A zero pivot whose residual row is zero is skipped (rank-deficient PSD is
    allowed); a zero pivot with a nonzero residual entry exposes an indefinite
    2x2 block from which a witness is assembled.
    """
    n = m.n
    if n == 0:
        return LdlFactorization(lower=(), diag=())
    entries = m.nonzeros()
    scale = lcm(*(v.denominator for v in entries.values())) if entries else 1
    r = [[0] * n for _ in range(n)]
    for (i, j), v in entries.items():
        r[i][j] = int(v * scale)
    one = Fraction(1)
    lower = [[one if i == j else _ZERO for j in range(n)] for i in range(n)]
    diag = [_ZERO] * n
    pivots: list[int] = []
    prev = 1
    for k in range(n):
        piv = r[k][k]
        if piv < 0:
            vec = _backsubstitute(lower, pivots, {k: one}, n)
            value = m.quad_form(vec)
            assert value < 0
            return NegativeWitness(vector=vec, value=value)
        if piv == 0:
            bad = next((j for j in range(k + 1, n) if r[j][k] != 0), None)
            if bad is None:
                continue
            # Indefinite block [[0, c], [c, d]]; pick t with -2*t*c + d = -1.
            c = Fraction(r[bad][k], prev * scale)
            d = Fraction(r[bad][bad], prev * scale)
            t = (d + 1) / (2 * c)
            vec = _backsubstitute(lower, pivots, {k: t, bad: Fraction(-1)}, n)
            value = m.quad_form(vec)
            assert value < 0
            return NegativeWitness(vector=vec, value=value)
        diag[k] = Fraction(piv, prev * scale)
        for j in range(k + 1, n):
            if r[j][k]:
                lower[j][k] = Fraction(r[j][k], piv)
        for j in range(k + 1, n):
            rjk = r[j][k]
            rowj = r[j]
            rowk = r[k]
            if rjk:
                for i in range(k + 1, j + 1):
                    rowj[i] = (piv * rowj[i] - rjk * rowk[i]) // prev
            elif prev != piv:
                for i in range(k + 1, j + 1):
                    rowj[i] = (piv * rowj[i]) // prev
        for j in range(k + 1, n):
            rowj = r[j]
            for i in range(k + 1, j):
                r[i][j] = rowj[i]
        pivots.append(k)
        prev = piv
    return LdlFactorization(
        lower=tuple(tuple(row) for row in lower), diag=tuple(diag)
    )


def is_psd(m: SymMatrixQ) -> bool:
    return isinstance(psd_certificate(m), LdlFactorization)
