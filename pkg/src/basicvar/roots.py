"""
Positive roots of type A_{n-1} realised as below-diagonal matrix positions,
the linear order on them, basic subsets and the singular/regular partition.

A root is a pair ``(row, col)`` with ``row != col``; it is positive when
``row > col``.  The order used throughout the package is

    (n,1) > (n-1,1) > ... > (2,1) > (n,2) > ... > (n,n-1)

i.e. a root is greater when it sits in an earlier column, or lower in the
same column.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Optional

__all__ = [
    "Root", "BasicSubset", "RootPartition",
    "order_key", "succ_gt", "sort_desc", "positive_roots",
    "is_basic", "root_sum", "classify", "enumerate_basic",
    "parse_roots", "format_roots",
]


class Root(NamedTuple):
    row: int
    col: int

    @property
    def positive(self) -> bool:
        return self.row > self.col

    def __str__(self) -> str:
        return f"({self.row},{self.col})"


def order_key(r: Root) -> tuple[int, int]:
    """Sort key: ascending key means descending in the root order."""
    return (r.col, -r.row)


def _check_positive(*roots: Root) -> None:
    for r in roots:
        if not r.row > r.col:
            raise ValueError(f"{r} is not a positive root")


def succ_gt(a: Root, b: Root) -> bool:
    """True iff ``a`` is strictly greater than ``b`` in the root order."""
    _check_positive(a, b)
    return order_key(a) < order_key(b)


def sort_desc(roots: Iterable[Root]) -> list[Root]:
    return sorted(roots, key=order_key)


def positive_roots(n: int) -> list[Root]:
    """All n(n-1)/2 positive roots, greatest first."""
    return [Root(i, j) for j in range(1, n) for i in range(n, j, -1)]


def root_sum(a: Root, b: Root) -> Optional[Root]:
    # (i,j) + (j,k) = (i,k), in either argument order
    if a.col == b.row and a.row != b.col:
        return Root(a.row, b.col)
    if b.col == a.row and b.row != a.col:
        return Root(b.row, a.col)
    return None


def _check_board(roots: Iterable[Root], n: int) -> None:
    for r in roots:
        if not (1 <= r.col < r.row <= n):
            raise ValueError(f"{r} is not a positive root for n={n}")


def is_basic(roots: Iterable[Root], n: int) -> bool:
    roots = list(roots)
    _check_board(roots, n)
    rows = [r.row for r in roots]
    cols = [r.col for r in roots]
    return len(set(rows)) == len(rows) and len(set(cols)) == len(cols)


@dataclass(frozen=True)
class BasicSubset:
    """A set of positive roots with at most one root per row and column."""

    n: int
    roots: frozenset[Root] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("board size must be positive")
        roots = frozenset(Root(*r) for r in self.roots)
        object.__setattr__(self, "roots", roots)
        if not is_basic(roots, self.n):
            raise ValueError(f"not a basic subset: {format_roots(roots)}")

    @classmethod
    def of(cls, n: int, *pairs) -> "BasicSubset":
        return cls(n, frozenset(Root(*p) for p in pairs))

    def __iter__(self) -> Iterator[Root]:
        return iter(sort_desc(self.roots))

    def __len__(self) -> int:
        return len(self.roots)

    def __contains__(self, r) -> bool:
        return r in self.roots

    def __str__(self) -> str:
        return format_roots(self.roots)

    def to_json(self) -> dict:
        return {"n": self.n, "roots": [list(r) for r in self]}

    @classmethod
    def from_json(cls, data) -> "BasicSubset":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["n"]), frozenset(Root(int(i), int(j)) for i, j in data["roots"]))


@dataclass(frozen=True)
class RootPartition:
    singular: frozenset[Root]
    regular: frozenset[Root]
    m_set: frozenset[Root]


def classify(D: BasicSubset) -> RootPartition:
    singular = set()
    for r in D.roots:
        # (i,k) = (i,j) + (j,k) for every k < j < i
        for j in range(r.col + 1, r.row):
            singular.add(Root(r.row, j))
            singular.add(Root(j, r.col))
    regular = frozenset(positive_roots(D.n)) - singular
    return RootPartition(frozenset(singular), regular, regular - D.roots)


def enumerate_basic(n: int) -> Iterator[BasicSubset]:
    """Every basic subset of the n x n board (non-attacking rooks below the diagonal)."""

    def rec(col: int, used: frozenset, acc: tuple):
        if col > n:
            yield acc
            return
        yield from rec(col + 1, used, acc)
        for row in range(col + 1, n + 1):
            if row not in used:
                yield from rec(col + 1, used | {row}, acc + (Root(row, col),))

    for roots in rec(1, frozenset(), ()):
        yield BasicSubset(n, frozenset(roots))


_PAIR = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def parse_roots(text: str) -> list[Root]:
    """Parse ``"(4,1),(7,2)"`` (whitespace tolerated) into roots."""
    text = text.strip()
    if not text:
        return []
    found = _PAIR.findall(text)
    leftover = _PAIR.sub("", text).replace(",", "").strip()
    if leftover:
        raise ValueError(f"cannot parse root list {text!r}")
    return [Root(int(i), int(j)) for i, j in found]


def format_roots(roots: Iterable[Root]) -> str:
    return ",".join(str(r) for r in sort_desc(roots))
