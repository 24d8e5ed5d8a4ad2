"""Relations, truth tables, and their standard constructions.

A relation couples finite input sets X and Y with a k-bit output alphabet and
a membership table.  Truth tables travel as hex strings with an explicit bit
width: the string's bits, most significant first, list the function values in
row-major input order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence


def bits_of(value: int, width: int) -> tuple:
    return tuple((value >> (width - 1 - i)) & 1 for i in range(width))


def bitstring(value: int, width: int) -> str:
    return format(value, f"0{width}b")


@dataclass(frozen=True)
class TruthTable:
    """Boolean function on n-bit inputs, values in MSB-first input order."""

    n: int
    values: tuple  # length 2^n, entries 0/1

    def __post_init__(self):
        if len(self.values) != 1 << self.n:
            raise ValueError("truth table length must be 2^n")
        if any(v not in (0, 1) for v in self.values):
            raise ValueError("truth table entries must be bits")

    @classmethod
    def from_hex(cls, hex_str: str, n: int) -> "TruthTable":
        size = 1 << n
        if len(hex_str) * 4 != size:
            raise ValueError(
                f"hex table {hex_str!r} has {len(hex_str) * 4} bits, need {size}"
            )
        value = int(hex_str, 16)
        return cls(n=n, values=bits_of(value, size))

    @classmethod
    def from_callable(cls, fn: Callable[[str], int], n: int) -> "TruthTable":
        return cls(
            n=n, values=tuple(int(fn(bitstring(i, n))) for i in range(1 << n))
        )

    def to_hex(self) -> str:
        size = 1 << self.n
        value = 0
        for v in self.values:
            value = (value << 1) | v
        return format(value, f"0{(size + 3) // 4}x")

    def __call__(self, x: str) -> int:
        return self.values[int(x, 2)]

    def is_constant(self) -> bool:
        return len(set(self.values)) == 1


@dataclass(frozen=True)
class PairTable:
    """Boolean function on pairs of n-bit inputs; entry order is x-major."""

    n: int
    values: tuple  # length 2^(2n)

    def __post_init__(self):
        if len(self.values) != 1 << (2 * self.n):
            raise ValueError("pair table length must be 2^(2n)")

    @classmethod
    def from_hex(cls, hex_str: str, n: int) -> "PairTable":
        size = 1 << (2 * n)
        if len(hex_str) * 4 != size:
            raise ValueError(
                f"hex table {hex_str!r} has {len(hex_str) * 4} bits, need {size}"
            )
        return cls(n=n, values=bits_of(int(hex_str, 16), size))

    @classmethod
    def from_int(cls, table: int, n: int) -> "PairTable":
        return cls(n=n, values=bits_of(table, 1 << (2 * n)))

    def to_hex(self) -> str:
        size = 1 << (2 * self.n)
        value = 0
        for v in self.values:
            value = (value << 1) | v
        return format(value, f"0{(size + 3) // 4}x")

    def value(self, x: int, y: int) -> int:
        return self.values[(x << self.n) | y]

    def matrix(self) -> list[list[int]]:
        side = 1 << self.n
        return [[self.value(x, y) for y in range(side)] for x in range(side)]


@dataclass(frozen=True)
class RelationSpec:
    xs: tuple
    ys: tuple
    k: int
    accepts: frozenset  # triples (x, y, zbits)
    name: str = ""

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("output alphabet needs k >= 1 bits")

    def admits(self, x, y, zbits: tuple) -> bool:
        return (x, y, zbits) in self.accepts

    @property
    def is_function(self) -> bool:
        for x in self.xs:
            for y in self.ys:
                count = sum(
                    1 for z in ((0,), (1,)) if (x, y, z) in self.accepts
                )
                if self.k != 1 or count != 1:
                    return False
        return True

    def value(self, x, y) -> int:
        if (x, y, (1,)) in self.accepts:
            return 1
        if (x, y, (0,)) in self.accepts:
            return 0
        raise ValueError(f"no defined value at ({x},{y})")

    @classmethod
    def from_function(
        cls, xs: Sequence, ys: Sequence, value: Callable, name: str = ""
    ) -> "RelationSpec":
        accepts = frozenset(
            (x, y, (int(value(x, y)),)) for x in xs for y in ys
        )
        return cls(xs=tuple(xs), ys=tuple(ys), k=1, accepts=accepts, name=name)


def eq_relation(d: int) -> RelationSpec:
    """Equality of two values from [d]."""
    return RelationSpec.from_function(
        range(d), range(d), lambda x, y: x == y, name=f"EQ[{d}]"
    )


def eq_bits_relation(n: int) -> RelationSpec:
    """Equality of two n-bit strings."""
    xs = tuple(bitstring(i, n) for i in range(1 << n))
    return RelationSpec.from_function(xs, xs, lambda x, y: x == y, name=f"EQ[{1 << n} strings]")


def pair_function_relation(table: PairTable, name: str = "") -> RelationSpec:
    side = 1 << table.n
    xs = tuple(bitstring(i, table.n) for i in range(side))
    return RelationSpec.from_function(
        xs, xs, lambda x, y: table.value(int(x, 2), int(y, 2)), name=name or "pair-fn"
    )


def output_width(n: int) -> int:
    return max(1, (n - 1).bit_length())


def kw_relation(table: TruthTable) -> RelationSpec:
    """Find a coordinate where x in f^-1(1) and y in f^-1(0) differ.

    Outputs are 0-based coordinate indices in k = ceil(log2 n) bits, most
    significant bit first.
    """
    n = table.n
    xs = tuple(bitstring(i, n) for i in range(1 << n) if table.values[i] == 1)
    ys = tuple(bitstring(i, n) for i in range(1 << n) if table.values[i] == 0)
    if not xs or not ys:
        raise ValueError("constant function has an empty side")
    k = output_width(n)
    accepts = set()
    for x in xs:
        for y in ys:
            for idx in range(n):
                if x[idx] != y[idx]:
                    accepts.add((x, y, bits_of(idx, k)))
    return RelationSpec(
        xs=xs, ys=ys, k=k, accepts=frozenset(accepts), name=f"KW[{table.to_hex()}]"
    )
