"""
The diagram filling procedure that extends a basic subset D to C(D).

Step 0 puts a bullet on every root of M(D).  Each later step puts a cross
on the greatest empty place xi = (s, t); for every intermediate k with
t < k < s the pair alpha = (k, t), beta = (s, k) is marked "+" / "-" when
both places are still empty, and left alone otherwise.  The crosses, in
the order they were placed, form C(D).
"""

from __future__ import annotations

import enum
import types
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional

from .roots import BasicSubset, Root, classify, positive_roots, sort_desc

__all__ = ["Cell", "Step", "Diagram", "build_diagram", "extension", "a_set"]


class Cell(enum.Enum):
    EMPTY = "empty"
    BULLET = "bullet"
    OTIMES = "otimes"
    PLUS = "plus"
    MINUS = "minus"

    @property
    def glyph(self) -> str:
        return _GLYPHS[self]


_GLYPHS = {
    Cell.EMPTY: ".",
    Cell.BULLET: "*",
    Cell.OTIMES: "x",
    Cell.PLUS: "+",
    Cell.MINUS: "-",
}


@dataclass(frozen=True)
class Step:
    index: int
    xi: Root
    # (plus, minus) places filled at this step
    pairs: tuple[tuple[Root, Root], ...]


@dataclass(frozen=True)
class Diagram:
    n: int
    D: BasicSubset
    # root -> (symbol, step at which it was placed); EMPTY cells carry None
    cells: Mapping[Root, tuple[Cell, Optional[int]]]
    steps: tuple[Step, ...]

    @property
    def extension(self) -> list[Root]:
        return [s.xi for s in self.steps]

    def symbol(self, r: Root) -> Cell:
        return self.cells[r][0]

    def symbol_after(self, r: Root, i: int) -> Cell:
        """Symbol on place ``r`` once step ``i`` has finished (i = 0 is the bullet step)."""
        sym, when = self.cells[r]
        if when is None or when > i:
            return Cell.EMPTY
        return sym

    def open_after(self, r: Root, i: int) -> bool:
        """Empty or bullet after step i."""
        return self.symbol_after(r, i) in (Cell.EMPTY, Cell.BULLET)

    def grid(self, upto: Optional[int] = None) -> list[str]:
        """ASCII rows, top to bottom; places on or above the diagonal are blank."""
        last = len(self.steps) if upto is None else upto
        rows = []
        for i in range(1, self.n + 1):
            line = []
            for j in range(1, self.n + 1):
                if j >= i:
                    line.append(" ")
                else:
                    line.append(self.symbol_after(Root(i, j), last).glyph)
            rows.append(" ".join(line).rstrip())
        return rows

    def render(self) -> str:
        return "\n".join(self.grid())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "cells": [
                {"root": list(r), "sym": self.symbol(r).value}
                for r in positive_roots(self.n)
            ],
            "extension": [list(r) for r in self.extension],
        }


def build_diagram(D: BasicSubset) -> Diagram:
    return _build(D)


@lru_cache(maxsize=4096)
def _build(D: BasicSubset) -> Diagram:
    cells: dict[Root, tuple[Cell, Optional[int]]] = {
        r: (Cell.EMPTY, None) for r in positive_roots(D.n)
    }
    for r in classify(D).m_set:
        cells[r] = (Cell.BULLET, 0)

    steps = []
    empties = sort_desc(r for r, (c, _) in cells.items() if c is Cell.EMPTY)
    while empties:
        k = len(steps) + 1
        xi = empties[0]
        cells[xi] = (Cell.OTIMES, k)
        s, t = xi
        pairs = []
        for m in range(t + 1, s):
            alpha, beta = Root(m, t), Root(s, m)
            if cells[alpha][0] is Cell.EMPTY and cells[beta][0] is Cell.EMPTY:
                cells[alpha] = (Cell.PLUS, k)
                cells[beta] = (Cell.MINUS, k)
                pairs.append((alpha, beta))
        steps.append(Step(k, xi, tuple(pairs)))
        empties = [r for r in empties if cells[r][0] is Cell.EMPTY]

    return Diagram(D.n, D, types.MappingProxyType(cells), tuple(steps))


def extension(D: BasicSubset) -> list[Root]:
    """C(D) as a list, greatest root first."""
    return build_diagram(D).extension


def a_set(D: BasicSubset, gamma: Root) -> set[Root]:
    """Roots of C(D) in the row of ``gamma``, strictly to its left."""
    return {
        r for r in extension(D)
        if r.row == gamma.row and r.col < gamma.col
    }

