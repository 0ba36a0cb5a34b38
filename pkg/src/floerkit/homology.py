"""Degreewise homology of complexes over F[u,v] and its specializations.

Every bidegree slice of a flavored complex is a finite-dimensional F2 vector
space spanned by pairs (generator, monomial).  All homology, action and
boundary questions are answered slice by slice with bitset elimination.  For
the circ flavor the full F[v]-module structure is recovered by Smith reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from . import fv
from .complex import Complex, Endomorphism, Entries
from .gf2 import Echelon, kernel
from .poly import (
    D_DEGREE, Bigrading, Flavor, Monomial, Poly, U, V, monomial_for_shift,
    v_bits,
)

HOMOLOGY_MARGIN = 1
ACTION_MARGIN = 2
DEFAULT_WINDOW = (-40, 8, -40, 8)
MAX_WINDOW_CELLS = 10 ** 4


class WindowError(ValueError):
    """A query needs data outside the trusted part of the window."""


@dataclass(frozen=True)
class Window:
    w_lo: int
    w_hi: int
    z_lo: int
    z_hi: int

    def __post_init__(self):
        if self.w_lo > self.w_hi or self.z_lo > self.z_hi:
            raise WindowError(f"empty window {self}")

    @property
    def cells(self) -> int:
        return (self.w_hi - self.w_lo + 1) * (self.z_hi - self.z_lo + 1)

    def interior(self, margin: int) -> "Window":
        try:
            return Window(self.w_lo + margin, self.w_hi - margin,
                          self.z_lo + margin, self.z_hi - margin)
        except WindowError:
            raise WindowError(f"window {self} has an empty trusted interior "
                              f"at margin {margin}") from None

    def __contains__(self, g: Bigrading) -> bool:
        return self.w_lo <= g.gr_w <= self.w_hi and self.z_lo <= g.gr_z <= self.z_hi

    def points(self) -> Iterator[Bigrading]:
        for w in range(self.w_lo, self.w_hi + 1):
            for z in range(self.z_lo, self.z_hi + 1):
                yield Bigrading(w, z)

    def require(self, g: Bigrading, margin: int) -> None:
        if g not in self.interior(margin):
            raise WindowError(f"bidegree {g} is outside the trusted region "
                              f"{self.interior(margin)} of window {self}")

    @classmethod
    def around(cls, C: Complex, margin: int = 4,
               base: Tuple[int, int, int, int] = DEFAULT_WINDOW,
               cap: int = MAX_WINDOW_CELLS) -> "Window":
        """The base window, grown until every generator grading plus margin is
        inside the action-trusted interior."""
        w_lo, w_hi, z_lo, z_hi = base
        pad = margin + ACTION_MARGIN
        for g in C.gens:
            w, z = g.grading
            w_lo, w_hi = min(w_lo, w - pad), max(w_hi, w + pad)
            z_lo, z_hi = min(z_lo, z - pad), max(z_hi, z + pad)
        win = cls(w_lo, w_hi, z_lo, z_hi)
        if win.cells > cap:
            raise WindowError(f"window {win} exceeds the cap of {cap} cells")
        return win

    @classmethod
    def hull(cls, C: Complex, pad: int = 4) -> "Window":
        """Smallest window whose action-trusted interior covers every generator
        grading plus pad."""
        ws = [g.grading.gr_w for g in C.gens]
        zs = [g.grading.gr_z for g in C.gens]
        p = pad + ACTION_MARGIN
        return cls(min(ws) - p, max(ws) + p, min(zs) - p, max(zs) + p)

    def as_list(self) -> List[int]:
        return [self.w_lo, self.w_hi, self.z_lo, self.z_hi]


class HilbertTable(dict):
    """Bigrading -> positive dimension."""

    def total(self) -> int:
        return sum(self.values())

    def shifted(self, s: Bigrading) -> "HilbertTable":
        return HilbertTable({g + s: d for g, d in self.items()})

    def restricted(self, W: Window) -> "HilbertTable":
        return HilbertTable({g: d for g, d in self.items() if g in W})

    def as_list(self) -> List[List[int]]:
        return [[g.gr_w, g.gr_z, d] for g, d in sorted(self.items())]

    def dominated_by(self, other: Mapping[Bigrading, int]) -> bool:
        return all(d <= other.get(g, 0) for g, d in self.items())


# ---------------------------------------------------------------- slices

Cell = Tuple[str, Monomial]


def _allowed(m: Monomial, flavor: Flavor) -> bool:
    if flavor is Flavor.MINUS:
        return True
    if flavor is Flavor.CIRC:
        return m[0] == 0
    return m == (0, 0)


class Slicer:
    """Bidegree slices of C over the flavored coefficient ring, with caches."""

    def __init__(self, C: Complex, flavor: "Flavor | str"):
        self.C = C
        self.flavor = Flavor.parse(flavor)
        self._basis: Dict[Bigrading, List[Cell]] = {}
        self._index: Dict[Bigrading, Dict[Cell, int]] = {}
        self._dcols: Dict[Bigrading, List[int]] = {}
        self._cycles: Dict[Bigrading, List[int]] = {}
        self._bounds: Dict[Bigrading, Echelon] = {}

    def basis(self, D: Bigrading) -> List[Cell]:
        b = self._basis.get(D)
        if b is None:
            b = []
            for g in self.C.gens:
                m = monomial_for_shift(D - g.grading)
                if m is not None and _allowed(m, self.flavor):
                    b.append((g.name, m))
            self._basis[D] = b
            self._index[D] = {c: i for i, c in enumerate(b)}
        return b

    def index(self, D: Bigrading) -> Dict[Cell, int]:
        self.basis(D)
        return self._index[D]

    def dim(self, D: Bigrading) -> int:
        return len(self.basis(D))

    def image(self, entries: Entries, degree: Bigrading, D: Bigrading, vec: int) -> int:
        """Apply a homogeneous map of the given degree to a slice vector at D."""
        src = self.basis(D)
        tgt_idx = self.index(D + degree)
        out = 0
        i = 0
        while vec:
            if vec & 1:
                x, (a, b) = src[i]
                for y, p in entries.get(x, {}).items():
                    for (c, e) in p.terms:
                        m = (a + c, b + e)
                        if not _allowed(m, self.flavor):
                            continue
                        j = tgt_idx.get((y, m))
                        if j is None:
                            raise ValueError(f"map is not homogeneous of degree {degree} at {x}->{y}")
                        out ^= 1 << j
            vec >>= 1
            i += 1
        return out

    def columns(self, entries: Entries, degree: Bigrading, D: Bigrading) -> List[int]:
        return [self.image(entries, degree, D, 1 << i) for i in range(self.dim(D))]

    def d_columns(self, D: Bigrading) -> List[int]:
        cols = self._dcols.get(D)
        if cols is None:
            cols = self.columns(self.C.diff, D_DEGREE, D)
            self._dcols[D] = cols
        return cols

    def cycles(self, D: Bigrading) -> List[int]:
        z = self._cycles.get(D)
        if z is None:
            cols = self.d_columns(D)
            z = kernel(cols)  # combos over the slice basis are the cycle vectors
            self._cycles[D] = z
        return z

    def boundaries(self, D: Bigrading) -> Echelon:
        e = self._bounds.get(D)
        if e is None:
            e = Echelon(self.d_columns(D - D_DEGREE))
            self._bounds[D] = e
        return e

    def homology_dim(self, D: Bigrading) -> int:
        return len(self.cycles(D)) - len(self.boundaries(D))

    def homology_basis(self, D: Bigrading) -> List[int]:
        """Cycle representatives completing the boundaries to all cycles."""
        ech = self.boundaries(D).copy()
        out = []
        for z in self.cycles(D):
            if ech.add(z):
                out.append(z)
        return out

    def mul_entries(self, p: Poly) -> Entries:
        return {g.name: {g.name: p} for g in self.C.gens}

    def encode(self, chain: Mapping[str, Poly], D: Bigrading) -> int:
        """Slice vector for the degree-D part of a chain (terms elsewhere ignored)."""
        idx = self.index(D)
        out = 0
        for x, p in chain.items():
            for m in p.terms:
                j = idx.get((x, m))
                if j is not None:
                    out ^= 1 << j
        return out

    def decode(self, vec: int, D: Bigrading) -> Dict[str, Poly]:
        b = self.basis(D)
        out: Dict[str, Poly] = {}
        i = 0
        while vec:
            if vec & 1:
                x, m = b[i]
                out[x] = out.get(x, Poly()) + Poly([m])
            vec >>= 1
            i += 1
        return out


def _action_entries(sl: Slicer, op, C: Complex) -> Tuple[Entries, Bigrading]:
    from .complex import phi, psi
    if isinstance(op, Endomorphism):
        return op.entries, op.degree
    if op == "mul_u":
        return sl.mul_entries(U), Bigrading(-2, 0)
    if op == "mul_v":
        return sl.mul_entries(V), Bigrading(0, -2)
    if op == "phi":
        f = phi(C)
        return f.entries, f.degree
    if op == "psi":
        f = psi(C)
        return f.entries, f.degree
    raise ValueError(f"unknown action {op!r}")


def induced_rank(sl: Slicer, entries: Entries, degree: Bigrading, D: Bigrading) -> int:
    """Rank of the induced map H(D) -> H(D + degree)."""
    tgt = D + degree
    ech = sl.boundaries(tgt).copy()
    base = len(ech)
    for z in sl.cycles(D):
        ech.add(sl.image(entries, degree, D, z))
    return len(ech) - base


# ---------------------------------------------------------------- public tables

def chain_dims(C: Complex, flavor: "Flavor | str", W: Window) -> HilbertTable:
    sl = Slicer(C, flavor)
    return HilbertTable({D: sl.dim(D) for D in W.points() if sl.dim(D)})


def homology_table(C: Complex, flavor: "Flavor | str", W: Window,
                   slicer: Optional[Slicer] = None) -> HilbertTable:
    sl = slicer or Slicer(C, flavor)
    out = HilbertTable()
    for D in W.interior(HOMOLOGY_MARGIN).points():
        if sl.dim(D):
            h = sl.homology_dim(D)
            if h:
                out[D] = h
    return out


def induced_action_rank(C: Complex, flavor: "Flavor | str", op, W: Window,
                        slicer: Optional[Slicer] = None) -> HilbertTable:
    sl = slicer or Slicer(C, flavor)
    entries, degree = _action_entries(sl, op, C)
    out = HilbertTable()
    for D in W.interior(ACTION_MARGIN).points():
        if sl.dim(D) and sl.dim(D + degree):
            r = induced_rank(sl, entries, degree, D)
            if r:
                out[D] = r
    return out


def is_boundary(C: Complex, flavor: "Flavor | str", cycle: Mapping[str, Poly],
                W: Optional[Window] = None, slicer: Optional[Slicer] = None) -> bool:
    """Whether a d-closed chain (generator -> coefficient) is a boundary."""
    sl = slicer or Slicer(C, flavor)
    f = sl.flavor
    from .poly import specialize
    chain = {x: specialize(p, f) for x, p in cycle.items()}
    chain = {x: p for x, p in chain.items() if p}
    degrees = set()
    for x, p in chain.items():
        for m in p.terms:
            degrees.add(C.grading(x) + Bigrading(-2 * m[0], -2 * m[1]))
    if W is not None:
        for D in degrees:
            W.require(D, HOMOLOGY_MARGIN)
    for D in sorted(degrees):
        vec = sl.encode(chain, D)
        dv = sl.image(C.diff, D_DEGREE, D, vec)
        if dv:
            raise ValueError(f"not a cycle: d has nonzero part {sl.decode(dv, D + D_DEGREE)}")
    for D in degrees:
        if not sl.boundaries(D).contains(sl.encode(chain, D)):
            return False
    return True


# ---------------------------------------------------------------- F[v]-modules

@dataclass(frozen=True, order=True)
class Summand:
    kind: str                 # "free" or "torsion"
    position: Bigrading
    order: int = 0            # k for F[v]/v^k; 0 for free

    def as_dict(self) -> dict:
        d = {"kind": self.kind, "position": list(self.position)}
        if self.kind == "torsion":
            d["order"] = self.order
        return d

    def __str__(self) -> str:
        if self.kind == "free":
            return f"F[v]{self.position}"
        return f"F[v]/v^{self.order}{self.position}"


def Free(position) -> Summand:
    return Summand("free", Bigrading.of(position), 0)


def Torsion(position, order: int) -> Summand:
    if order < 1:
        raise ValueError("torsion order must be at least 1")
    return Summand("torsion", Bigrading.of(position), order)


class ModuleDecomp(tuple):
    """Sorted multiset of summands of a graded F[v]-module."""

    def __new__(cls, summands: Iterable[Summand] = ()):
        return super().__new__(cls, sorted(summands))

    def shifted(self, s: Bigrading) -> "ModuleDecomp":
        return ModuleDecomp(Summand(x.kind, x.position + s, x.order) for x in self)

    @property
    def free(self) -> List[Summand]:
        return [x for x in self if x.kind == "free"]

    @property
    def torsion(self) -> List[Summand]:
        return [x for x in self if x.kind == "torsion"]

    def hilbert(self, W: Window) -> HilbertTable:
        out = HilbertTable()
        v = Bigrading(0, -2)
        for s in self:
            g = s.position
            steps = 0
            while g.gr_z >= W.z_lo and (s.kind == "free" or steps < s.order):
                if g in W:
                    out[g] = out.get(g, 0) + 1
                g = g + v
                steps += 1
        return out

    def as_list(self) -> List[dict]:
        return [s.as_dict() for s in self]

    def __str__(self) -> str:
        return " + ".join(str(s) for s in self) if self else "0"


@dataclass
class HomGen:
    """A homology generator: a cycle over F[v], its bidegree and order (0 = free)."""

    vector: Dict[str, int]
    position: Bigrading
    order: int


def _vector_position(C: Complex, vec: Mapping[str, int]) -> Bigrading:
    pos = None
    for x, c in vec.items():
        if not c:
            continue
        if c & (c - 1):
            raise ValueError(f"inhomogeneous coefficient {fv.pformat(c)} on {x}")
        g = C.grading(x) + Bigrading(0, -2 * fv.deg(c))
        if pos is None:
            pos = g
        elif pos != g:
            raise ValueError("inhomogeneous vector")
    if pos is None:
        raise ValueError("zero vector has no position")
    return pos


def circ_matrix(C: Complex, entries: Entries, rows: Sequence[str], cols: Sequence[str]) -> fv.Mat:
    """Matrix over F2[v] (u = 0) of a map, rows = targets, cols = sources."""
    M = fv.zeros(len(rows), len(cols))
    ridx = {y: i for i, y in enumerate(rows)}
    for j, x in enumerate(cols):
        for y, p in entries.get(x, {}).items():
            i = ridx.get(y)
            if i is not None:
                M[i][j] = v_bits(p)
    return M


@dataclass
class _Line:
    names: List[str]
    Qinv: fv.Mat
    r: int
    P2: fv.Mat
    orders: List[int]         # per kernel coordinate: -1 killed, 0 free, k torsion
    slots: List[int]          # per kernel coordinate: index into presentation gens or -1


class CircPresentation:
    """H_*(C with u = 0) as a direct sum of cyclic graded F[v]-modules,
    with explicit cycle generators and a coordinate map for arbitrary cycles."""

    def __init__(self, C: Complex):
        self.C = C
        self.gens: List[HomGen] = []
        self.lines: Dict[int, _Line] = {}
        by_line: Dict[int, List[str]] = {}
        for g in C.gens:
            by_line.setdefault(g.grading.gr_w, []).append(g.name)
        for w in sorted(by_line):
            names = by_line[w]
            below = by_line.get(w - 1, [])
            above = by_line.get(w + 1, [])
            B = circ_matrix(C, C.diff, below, names)
            S = fv.smith(B, len(below), len(names))
            A = circ_matrix(C, C.diff, names, above)
            QA = fv.matmul(S.Qinv, A, len(names)) if above else [[] for _ in names]
            AK = QA[S.rank:]
            p = len(names) - S.rank
            kerQ = [fv.column(S.Q, j) for j in range(S.rank, len(names))]
            S2 = fv.smith(AK, p, len(above))
            orders, slots = [], []
            for l in range(p):
                # generator l of the kernel, in the S2-adapted basis
                coeffs = [S2.Pinv[k][l] for k in range(p)]
                vec = [0] * len(names)
                for k, c in enumerate(coeffs):
                    if c:
                        for t in range(len(names)):
                            if kerQ[k][t]:
                                vec[t] ^= fv.pmul(c, kerQ[k][t])
                if l < S2.rank:
                    dl = S2.D[l][l]
                    if dl & (dl - 1):
                        raise ValueError("inhomogeneous circ differential")
                    order = fv.deg(dl)
                    if order == 0:
                        orders.append(-1)
                        slots.append(-1)
                        continue
                else:
                    order = 0
                named = {names[t]: vec[t] for t in range(len(names)) if vec[t]}
                orders.append(order)
                slots.append(len(self.gens))
                self.gens.append(HomGen(named, _vector_position(C, named), order))
            self.lines[w] = _Line(names, S.Qinv, S.rank, S2.P, orders, slots)

    def decomposition(self) -> ModuleDecomp:
        return ModuleDecomp(Free(g.position) if g.order == 0 else Torsion(g.position, g.order)
                            for g in self.gens)

    def coords(self, cycle: Mapping[str, int]) -> List[int]:
        """Coordinates of a circ cycle on self.gens (torsion entries reduced)."""
        out = [0] * len(self.gens)
        for w, ln in self.lines.items():
            z = [cycle.get(x, 0) for x in ln.names]
            if not any(z):
                continue
            y = fv.matvec(ln.Qinv, z)
            if any(y[:ln.r]):
                raise ValueError("not a cycle")
            c = fv.matvec(ln.P2, y[ln.r:])
            for l, val in enumerate(c):
                if ln.orders[l] < 0 or not val:
                    continue
                k = ln.orders[l]
                if k:
                    val &= (1 << k) - 1
                if val:
                    out[ln.slots[l]] = val
        for x in cycle:
            if x not in self.C.index:
                raise ValueError(f"unknown generator {x}")
        return out

    def induced_matrix(self, f: Endomorphism) -> fv.Mat:
        """Matrix of the induced map on this presentation (rows = targets)."""
        m = len(self.gens)
        M = fv.zeros(m, m)
        for j, g in enumerate(self.gens):
            img: Dict[str, int] = {}
            for x, c in g.vector.items():
                for y, p in f.entries.get(x, {}).items():
                    b = v_bits(p)
                    if b:
                        img[y] = img.get(y, 0) ^ fv.pmul(c, b)
            for i, val in enumerate(self.coords(img)):
                M[i][j] = val
        return M


def circ_decompose(C: Complex, W: Optional[Window] = None) -> ModuleDecomp:
    """Exact free and torsion summands of the circ homology.

    The computation does not depend on W; when W is given, summands whose
    position lies outside it are still reported (nothing is truncated)."""
    return CircPresentation(C).decomposition()


def quotient_decomposition(positions: Sequence[Bigrading], orders: Sequence[int],
                           basis: Sequence[Sequence[int]]) -> ModuleDecomp:
    """Decompose (submodule spanned by ``basis``) / (torsion relations of the
    ambient presentation), assuming every relation lies in the submodule.

    The ambient module is F[v]^m with generator positions ``positions``;
    ``orders[j] > 0`` adds the relation v^orders[j] e_j.
    """
    m = len(positions)
    G = [list(col) for col in basis]
    p = len(G)
    Gmat = [[G[k][j] for k in range(p)] for j in range(m)]
    rel_cols = []
    for j, k in enumerate(orders):
        if k > 0:
            target = [0] * m
            target[j] = 1 << k
            c = fv.solve(Gmat, target, p)
            if c is None:
                raise ValueError("relation outside the submodule")
            rel_cols.append(c)
    R = [[rel_cols[t][k] for t in range(len(rel_cols))] for k in range(p)]
    S = fv.smith(R, p, len(rel_cols))
    out = []
    for l in range(p):
        vec = [0] * m
        for k in range(p):
            c = S.Pinv[k][l]
            if c:
                for j in range(m):
                    if G[k][j]:
                        vec[j] ^= fv.pmul(c, G[k][j])
        pos = None
        for j, c in enumerate(vec):
            if c:
                if c & (c - 1):
                    raise ValueError("inhomogeneous submodule generator")
                pos = positions[j] + Bigrading(0, -2 * fv.deg(c))
                break
        if l < S.rank:
            k = fv.deg(S.D[l][l])
            if k == 0:
                continue
            out.append(Torsion(pos, k))
        else:
            out.append(Free(pos))
    return ModuleDecomp(out)


__all__ = [
    "Window", "WindowError", "HilbertTable", "Slicer", "Summand", "Free", "Torsion",
    "ModuleDecomp", "HomGen", "CircPresentation", "chain_dims", "homology_table",
    "induced_action_rank", "induced_rank", "is_boundary", "circ_decompose", "circ_matrix",
    "quotient_decomposition", "HOMOLOGY_MARGIN", "ACTION_MARGIN", "DEFAULT_WINDOW",
]
