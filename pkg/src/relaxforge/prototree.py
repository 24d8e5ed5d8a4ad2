"""Rooted ordered protocol trees with per-node owners.

Nodes are addressed by tuples of child indices from the root (); an internal
node has an owner (Alice or Bob) and at least two children.  The last k arcs
of a leaf, when they are all binary, spell the leaf's k-bit output.
"""

from __future__ import annotations

from typing import Iterable, Optional

Node = tuple  # tuple[int, ...]

ALICE = "A"
BOB = "B"


class ProtocolStructure:
    def __init__(self, owners: dict[Node, str], arities: dict[Node, int]):
        if set(owners) != set(arities):
            raise ValueError("owners and arities must cover the same internal nodes")
        for t, owner in owners.items():
            if owner not in (ALICE, BOB):
                raise ValueError(f"unknown owner {owner!r} at {t}")
            if arities[t] < 2:
                raise ValueError(f"internal node {t} needs at least 2 children")
        self.owners = dict(owners)
        self.arities = dict(arities)
        self._nodes = [()]
        self._leaves = []
        stack = [()]
        while stack:
            t = stack.pop()
            if t in self.arities:
                kids = [t + (c,) for c in range(self.arities[t])]
                self._nodes.extend(kids)
                stack.extend(reversed(kids))
            else:
                self._leaves.append(t)
        known = set(self._nodes)
        for t in owners:
            if t not in known:
                raise ValueError(f"internal node {t} unreachable from the root")
        self._nodes.sort(key=lambda t: (len(t), t))
        self._leaves.sort(key=lambda t: (len(t), t))

    @classmethod
    def from_nested(cls, spec) -> "ProtocolStructure":
        """Build from nested lists: ["A", child, child, ...] or "leaf"."""
        owners: dict[Node, str] = {}
        arities: dict[Node, int] = {}

        def walk(node, addr: Node):
            if node == "leaf":
                return
            owner, *children = node
            owners[addr] = owner
            arities[addr] = len(children)
            for c, child in enumerate(children):
                walk(child, addr + (c,))

        walk(spec, ())
        return cls(owners, arities)

    def to_nested(self):
        def walk(addr: Node):
            if addr not in self.arities:
                return "leaf"
            return [self.owners[addr]] + [
                walk(addr + (c,)) for c in range(self.arities[addr])
            ]

        return walk(())

    def is_leaf(self, t: Node) -> bool:
        return t not in self.arities

    def owner(self, t: Node) -> str:
        return self.owners[t]

    def children(self, t: Node) -> list[Node]:
        return [t + (c,) for c in range(self.arities[t])]

    def nodes(self) -> list[Node]:
        return list(self._nodes)

    def internal_nodes(self) -> list[Node]:
        return [t for t in self._nodes if t in self.arities]

    def leaves(self) -> list[Node]:
        return list(self._leaves)

    def round_depth(self) -> int:
        """Maximum leaf depth in tree edges."""
        return max((len(t) for t in self._leaves), default=0)

    def bit_depth(self) -> int:
        """Maximum total message length in bits along a root-to-leaf path."""
        best = 0
        for leaf in self._leaves:
            bits = 0
            for d in range(len(leaf)):
                bits += max(1, (self.arities[leaf[:d]] - 1).bit_length())
            best = max(best, bits)
        return best

    def turns(self) -> int:
        """Maximum number of speaker alternations (rounds) on any path."""
        best = 0
        for leaf in self._leaves:
            count = 0
            prev = None
            for d in range(len(leaf)):
                owner = self.owners[leaf[:d]]
                if owner != prev:
                    count += 1
                    prev = owner
            best = max(best, count)
        return best

    def leaf_output_bits(self, leaf: Node, k: int) -> Optional[tuple]:
        """Last k arcs of the leaf if they exist and are all binary, else None."""
        if len(leaf) < k:
            return None
        for d in range(len(leaf) - k, len(leaf)):
            if self.arities[leaf[:d]] != 2:
                return None
        return leaf[len(leaf) - k :]

    def is_maximal_antichain(self, nodes: Iterable[Node]) -> bool:
        chosen = list(nodes)
        known = set(self._nodes)
        if any(t not in known for t in chosen):
            return False
        for leaf in self._leaves:
            hits = sum(1 for t in chosen if leaf[: len(t)] == t)
            if hits != 1:
                return False
        return True

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ProtocolStructure)
            and self.owners == other.owners
            and self.arities == other.arities
        )

    def __repr__(self) -> str:
        return f"ProtocolStructure({len(self._nodes)} nodes, {len(self._leaves)} leaves)"


def node_label(t: Node) -> str:
    return ".".join(map(str, t)) if t else "root"


def binary_structure(pattern: str) -> ProtocolStructure:
    """Complete binary tree with level owners given by a string like "AB"."""
    owners: dict[Node, str] = {}
    arities: dict[Node, int] = {}

    def walk(addr: Node, depth: int):
        if depth == len(pattern):
            return
        owners[addr] = pattern[depth]
        arities[addr] = 2
        walk(addr + (0,), depth + 1)
        walk(addr + (1,), depth + 1)

    walk((), 0)
    return ProtocolStructure(owners, arities)
