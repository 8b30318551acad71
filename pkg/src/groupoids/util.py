"""Small shared helpers: canonical partitions and deterministic orderings."""

from __future__ import annotations

from typing import Hashable, Iterable, Iterator


class Partition:
    """Partition of a finite carrier set, stored as a canonical representative map.

    The representative of each class is its minimal element (sorted by str),
    so two partitions of the same carrier are equal iff their rep maps are.
    """

    def __init__(self, carrier: Iterable[str]):
        self._parent: dict[str, str] = {x: x for x in carrier}

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[str]]) -> "Partition":
        blocks = [list(b) for b in blocks]
        p = cls(x for b in blocks for x in b)
        for b in blocks:
            for x in b[1:]:
                p.union(b[0], x)
        return p

    @classmethod
    def from_pairs(cls, carrier: Iterable[str], pairs: Iterable[tuple[str, str]]) -> "Partition":
        p = cls(carrier)
        for a, b in pairs:
            p.union(a, b)
        return p

    def find(self, x: str) -> str:
        parent = self._parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # keep the lexicographically least element as root so reps are canonical
        if rb < ra:
            ra, rb = rb, ra
        self._parent[rb] = ra

    def same(self, a: str, b: str) -> bool:
        return self.find(a) == self.find(b)

    def __contains__(self, x: str) -> bool:
        return x in self._parent

    @property
    def carrier(self) -> frozenset[str]:
        return frozenset(self._parent)

    def rep_map(self) -> dict[str, str]:
        return {x: self.find(x) for x in self._parent}

    def blocks(self) -> list[tuple[str, ...]]:
        by_rep: dict[str, list[str]] = {}
        for x in sorted(self._parent):
            by_rep.setdefault(self.find(x), []).append(x)
        return [tuple(by_rep[r]) for r in sorted(by_rep)]

    def block_of(self, x: str) -> tuple[str, ...]:
        r = self.find(x)
        return tuple(y for y in sorted(self._parent) if self.find(y) == r)

    def n_blocks(self) -> int:
        return len({self.find(x) for x in self._parent})

    def is_discrete(self) -> bool:
        return all(self.find(x) == x for x in self._parent)

    def is_coarse(self) -> bool:
        return self.n_blocks() <= 1

    def refines(self, other: "Partition") -> bool:
        """True iff every block of self is contained in a block of other."""
        return all(other.same(x, self.find(x)) for x in self._parent)

    def copy(self) -> "Partition":
        p = Partition(self._parent)
        p._parent = dict(self.rep_map())
        return p

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.rep_map() == other.rep_map()

    def __hash__(self) -> int:
        return hash(frozenset(self.blocks()))

    def __repr__(self) -> str:
        return "Partition(%s)" % "|".join(",".join(b) for b in self.blocks())


def set_partitions(items: list[str]) -> Iterator[list[list[str]]]:
    """All set partitions of items (Bell-number many), deterministically ordered."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def pairs_of(items: Iterable[Hashable]) -> Iterator[tuple]:
    items = list(items)
    for a in items:
        for b in items:
            yield a, b
