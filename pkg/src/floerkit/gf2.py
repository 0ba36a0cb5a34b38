"""GF(2) linear algebra on int bitsets.

A vector is an int whose bit i is the coordinate on basis element i.
"""

from __future__ import annotations

from bisect import insort
from typing import Dict, Iterable, List, Optional, Tuple


class Echelon:
    """Echelon basis of a subspace, optionally tracking each row as a combination.

    ``reduce`` is the linear projection killing every pivot coordinate, so the
    remainder is a canonical representative modulo the subspace.
    """

    __slots__ = ("vec", "combo", "order")

    def __init__(self, vectors: Iterable[int] = ()):
        self.vec: Dict[int, int] = {}
        self.combo: Dict[int, int] = {}
        self.order: List[int] = []  # pivots, ascending
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.vec)

    def reduce(self, v: int, combo: int = 0) -> Tuple[int, int]:
        for p in reversed(self.order):
            if (v >> p) & 1:
                v ^= self.vec[p]
                combo ^= self.combo[p]
        return v, combo

    def add(self, v: int, combo: int = 0) -> bool:
        r, c = self.reduce(v, combo)
        if not r:
            return False
        p = r.bit_length() - 1
        self.vec[p] = r
        self.combo[p] = c
        insort(self.order, p)
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    def basis(self) -> List[int]:
        return [self.vec[p] for p in self.order]

    def copy(self) -> "Echelon":
        e = Echelon()
        e.vec = dict(self.vec)
        e.combo = dict(self.combo)
        e.order = list(self.order)
        return e


def rank(vectors: Iterable[int]) -> int:
    return len(Echelon(vectors))


def kernel(columns: List[int]) -> List[int]:
    """Basis of {c : sum of columns[i] over bits i of c is 0}, as bitsets over column indices."""
    ech = Echelon()
    out = []
    for i, col in enumerate(columns):
        r, c = ech.reduce(col, 1 << i)
        if r:
            p = r.bit_length() - 1
            ech.vec[p] = r
            ech.combo[p] = c
            insort(ech.order, p)
        else:
            out.append(c)
    return out


def combine(vectors: List[int], combo: int) -> int:
    out = 0
    i = 0
    while combo:
        if combo & 1:
            out ^= vectors[i]
        combo >>= 1
        i += 1
    return out


def solve(columns: List[int], target: int) -> Optional[int]:
    """Some c with combine(columns, c) == target, or None."""
    ech = Echelon()
    for i, col in enumerate(columns):
        ech.add(col, 1 << i)
    r, c = ech.reduce(target)
    return c if r == 0 else None


def intersection_dim(a: List[int], b: List[int]) -> int:
    ea, eb = Echelon(a), Echelon(b)
    both = ea.copy()
    for v in eb.basis():
        both.add(v)
    return len(ea) + len(eb) - len(both)


def intersection(a: List[int], b: List[int]) -> List[int]:
    """Basis of span(a) and span(b) intersected."""
    ba, bb = Echelon(a).basis(), Echelon(b).basis()
    # x in both iff x = sum ca_i a_i = sum cb_j b_j
    ker = kernel(ba + bb)
    out = Echelon()
    mask = (1 << len(ba)) - 1
    for c in ker:
        out.add(combine(ba, c & mask))
    return out.basis()


__all__ = ["Echelon", "rank", "kernel", "combine", "solve", "intersection_dim", "intersection"]
