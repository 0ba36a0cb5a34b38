"""Matrices over F2[v] and Smith reduction.

A polynomial in v is an int whose bit k is the coefficient of v^k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

Mat = List[List[int]]


def deg(a: int) -> int:
    return a.bit_length() - 1


def pmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def pdivmod(a: int, b: int) -> Tuple[int, int]:
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    q = 0
    db = deg(b)
    while a and deg(a) >= db:
        s = deg(a) - db
        q ^= 1 << s
        a ^= b << s
    return q, a


def pformat(a: int) -> str:
    if not a:
        return "0"
    parts = []
    for k in range(deg(a), -1, -1):
        if (a >> k) & 1:
            parts.append("1" if k == 0 else ("v" if k == 1 else f"v^{k}"))
    return " + ".join(parts)


def identity(n: int) -> Mat:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Mat:
    return [[0] * c for _ in range(r)]


def matmul(A: Mat, B: Mat, inner: Optional[int] = None) -> Mat:
    n = len(A)
    k = inner if inner is not None else (len(A[0]) if A else len(B))
    m = len(B[0]) if B else 0
    out = zeros(n, m)
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for t in range(k):
            a = Ai[t]
            if not a:
                continue
            Bt = B[t]
            for j in range(m):
                if Bt[j]:
                    row[j] ^= pmul(a, Bt[j])
    return out


def matvec(A: Mat, x: List[int]) -> List[int]:
    out = []
    for row in A:
        s = 0
        for a, b in zip(row, x):
            if a and b:
                s ^= pmul(a, b)
        out.append(s)
    return out


def column(A: Mat, j: int) -> List[int]:
    return [row[j] for row in A]


@dataclass
class Smith:
    """P @ M @ Q == D with D diagonal; the first ``rank`` diagonal entries are nonzero
    and each divides the next."""

    D: Mat
    P: Mat
    Pinv: Mat
    Q: Mat
    Qinv: Mat
    rank: int

    @property
    def diagonal(self) -> List[int]:
        return [self.D[i][i] for i in range(self.rank)]


def smith(M: Mat, nrows: Optional[int] = None, ncols: Optional[int] = None) -> Smith:
    """Smith form by Euclidean steps, pivoting on a minimal-degree entry
    (ties: lowest row, then lowest column)."""
    r = len(M) if nrows is None else nrows
    c = (len(M[0]) if M else 0) if ncols is None else ncols
    A = [list(row) for row in M]
    P, Pinv, Q, Qinv = identity(r), identity(r), identity(c), identity(c)

    def row_add(i: int, t: int, q: int) -> None:
        # row_i += q * row_t
        Ai, At = A[i], A[t]
        for j in range(c):
            if At[j]:
                Ai[j] ^= pmul(q, At[j])
        Pi, Pt = P[i], P[t]
        for j in range(r):
            if Pt[j]:
                Pi[j] ^= pmul(q, Pt[j])
        for row in Pinv:
            if row[i]:
                row[t] ^= pmul(q, row[i])

    def col_add(j: int, t: int, q: int) -> None:
        # col_j += q * col_t
        for row in A:
            if row[t]:
                row[j] ^= pmul(q, row[t])
        for row in Q:
            if row[t]:
                row[j] ^= pmul(q, row[t])
        Qt, Qj = Qinv[t], Qinv[j]
        for k in range(c):
            if Qj[k]:
                Qt[k] ^= pmul(q, Qj[k])

    def row_swap(i: int, t: int) -> None:
        if i == t:
            return
        A[i], A[t] = A[t], A[i]
        P[i], P[t] = P[t], P[i]
        for row in Pinv:
            row[i], row[t] = row[t], row[i]

    def col_swap(j: int, t: int) -> None:
        if j == t:
            return
        for row in A:
            row[j], row[t] = row[t], row[j]
        for row in Q:
            row[j], row[t] = row[t], row[j]
        Qinv[j], Qinv[t] = Qinv[t], Qinv[j]

    def min_entry(t: int) -> Optional[Tuple[int, int]]:
        best = None
        for i in range(t, r):
            for j in range(t, c):
                a = A[i][j]
                if a and (best is None or deg(a) < best[0]):
                    best = (deg(a), i, j)
        return None if best is None else (best[1], best[2])

    t = 0
    while t < min(r, c):
        pos = min_entry(t)
        if pos is None:
            break
        row_swap(pos[0], t)
        col_swap(pos[1], t)
        while True:
            dirty = False
            piv = A[t][t]
            for i in range(t + 1, r):
                if A[i][t]:
                    q, rem = pdivmod(A[i][t], piv)
                    row_add(i, t, q)
                    dirty = dirty or bool(rem)
            for j in range(t + 1, c):
                if A[t][j]:
                    q, rem = pdivmod(A[t][j], piv)
                    col_add(j, t, q)
                    dirty = dirty or bool(rem)
            if dirty:
                # a smaller remainder now sits in row t or column t
                best = None
                for i in range(t, r):
                    if A[i][t] and (best is None or deg(A[i][t]) < best[0]):
                        best = (deg(A[i][t]), i, t)
                for j in range(t, c):
                    if A[t][j] and (best is None or deg(A[t][j]) < best[0]):
                        best = (deg(A[t][j]), t, j)
                row_swap(best[1], t)
                col_swap(best[2], t)
                continue
            bad = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if A[i][j] and pdivmod(A[i][j], piv)[1]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        t += 1
    return Smith(A, P, Pinv, Q, Qinv, t)


def solve(M: Mat, b: List[int], ncols: Optional[int] = None) -> Optional[List[int]]:
    """Some x over F2[v] with M x = b, or None."""
    S = smith(M, len(b), ncols)
    c = len(S.Q)
    pb = matvec(S.P, b)
    y = [0] * c
    for i, val in enumerate(pb):
        if i < S.rank:
            q, rem = pdivmod(val, S.D[i][i])
            if rem:
                return None
            y[i] = q
        elif val:
            return None
    return matvec(S.Q, y)


def kernel_basis(M: Mat, ncols: int) -> List[List[int]]:
    """Basis of the (free) kernel of M as column vectors."""
    S = smith(M, len(M), ncols)
    return [column(S.Q, j) for j in range(S.rank, ncols)]


__all__ = ["deg", "pmul", "pdivmod", "pformat", "identity", "zeros", "matmul", "matvec",
           "column", "Smith", "smith", "solve", "kernel_basis"]
