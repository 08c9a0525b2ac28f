"""
Permutations of {1..n} as Weyl group elements: w_D, homogeneity, the
reflection factorisation w_D = r_1 ... r_c along C(D), and the row/column
sets of the minors P_ij cutting out Schubert cells.

Products compose right to left: ``(u * v)(j) == u(v(j))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .diagram import extension
from .roots import BasicSubset, Root, classify, is_basic

__all__ = [
    "Permutation", "MinorSpec",
    "w_d", "basic_subset_of", "is_homogeneous", "i_wj", "minor_spec",
    "act_on_root", "reflection", "factorize", "partial_products",
    "homogeneous_elements",
]


@dataclass(frozen=True)
class Permutation:
    # images[j-1] == w(j)
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    def __call__(self, j: int) -> int:
        return self.images[j - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.n != self.n:
            raise ValueError("size mismatch")
        return Permutation(tuple(self(other(j)) for j in range(1, self.n + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, v in enumerate(self.images, 1):
            inv[v - 1] = j
        return Permutation(tuple(inv))

    def one_line(self) -> str:
        return " ".join(map(str, self.images))

    def two_line(self) -> str:
        width = len(str(self.n))
        top = " ".join(str(j).rjust(width) for j in range(1, self.n + 1))
        bottom = " ".join(str(v).rjust(width) for v in self.images)
        return f"{top}\n{bottom}"

    def to_json(self) -> list[int]:
        return list(self.images)

    def __str__(self) -> str:
        return f"[{', '.join(map(str, self.images))}]"


@dataclass(frozen=True)
class MinorSpec:
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != len(self.cols):
            raise ValueError("a minor needs as many rows as columns")


def w_d(D: BasicSubset) -> Permutation:
    """Greedy permutation: w(j) is the largest unused i with (i,j) outside M(D)."""
    m_set = classify(D).m_set
    used: set[int] = set()
    images = []
    for j in range(1, D.n + 1):
        for i in range(D.n, 0, -1):
            if i not in used and Root(i, j) not in m_set:
                break
        used.add(i)
        images.append(i)
    return Permutation(tuple(images))


def basic_subset_of(w: Permutation) -> Optional[BasicSubset]:
    """Inverse of :func:`w_d` on homogeneous elements, None elsewhere."""
    roots = [Root(w(j), j) for j in range(1, w.n + 1) if w(j) > j]
    if not is_basic(roots, w.n):
        return None
    D = BasicSubset(w.n, frozenset(roots))
    return D if w_d(D) == w else None


def i_wj(w: Permutation, j: int) -> set[int]:
    earlier = {w(b) for b in range(1, j)}
    return {k for k in range(w(j), w.n + 1) if k not in earlier}


def is_homogeneous(w: Permutation) -> bool:
    # k = w(j) itself belongs to I_{w,j} but indexes the nonvanishing minor
    for j in range(1, w.n + 1):
        for i in i_wj(w, j):
            if i <= j and i != w(j):
                return False
    return True


def minor_spec(w: Permutation, i: int, j: int) -> MinorSpec:
    jp = [b for b in range(1, j) if w(b) > i]
    cols = sorted(jp + [j])
    rows = sorted([w(b) for b in jp] + [i])
    return MinorSpec(tuple(rows), tuple(cols))


def act_on_root(w: Permutation, r: Root) -> Root:
    return Root(w(r.row), w(r.col))


def reflection(r: Root, n: int) -> Permutation:
    """The transposition (row col)."""
    images = list(range(1, n + 1))
    images[r.row - 1], images[r.col - 1] = r.col, r.row
    return Permutation(tuple(images))


def partial_products(D: BasicSubset) -> list[Permutation]:
    """[w_0, w_1, ..., w_c] with w_i = r_1 ... r_i along C(D)."""
    w = Permutation.identity(D.n)
    out = [w]
    for xi in extension(D):
        w = w * reflection(xi, D.n)
        out.append(w)
    return out


def factorize(D: BasicSubset) -> list[Root]:
    """
    The roots xi_1 > ... > xi_c whose reflections multiply to w_D.

    Raises AssertionError if the product or the positivity conditions fail;
    both are theorems, so a failure means a bug rather than bad input.
    """
    C = extension(D)
    ws = partial_products(D)
    assert ws[-1] == w_d(D), "reflection product differs from w_D"
    m_set = classify(D).m_set
    for j, xi in enumerate(C):
        assert xi not in m_set
        for i in range(1, j + 1):
            assert act_on_root(ws[i], xi).positive
    return C


def homogeneous_elements(n: int) -> Iterator[Permutation]:
    for images in itertools.permutations(range(1, n + 1)):
        w = Permutation(images)
        if is_homogeneous(w):
            yield w
