"""Link invariants built from homology: the common kernel of the Phi actions
(hf), its intersection with the image of v (hf_w), closed forms for torus
knots, and trace classes of chain maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from . import fv
from .complex import (
    Complex, Endomorphism, PointedModel, check_map, dual, dual_name, staircase_b_values,
    tensor, torus_knot_exponents,
)
from .gf2 import Echelon, combine, intersection_dim, kernel
from .homology import (
    ACTION_MARGIN, CircPresentation, Free, HilbertTable, ModuleDecomp, Slicer, Torsion,
    Window, homology_table, is_boundary, quotient_decomposition,
)
from .poly import Bigrading, Flavor, Poly, V

V_DEGREE = Bigrading(0, -2)


def _model(M) -> PointedModel:
    return M if isinstance(M, PointedModel) else PointedModel.from_complex(M)


# ---------------------------------------------------------------- degreewise

def _kernel_space(sl: Slicer, maps: Sequence[Endomorphism], D: Bigrading) -> List[int]:
    """Cycles at D whose images under every map are boundaries (contains B(D))."""
    Z = sl.cycles(D)
    if not Z:
        return []
    cols = []
    offsets = []
    off = 0
    for f in maps:
        offsets.append(off)
        off += sl.dim(D + f.degree)
    for z in Z:
        acc = 0
        for f, o in zip(maps, offsets):
            tgt = D + f.degree
            if not sl.dim(tgt):
                continue
            img = sl.image(f.entries, f.degree, D, z)
            rem, _ = sl.boundaries(tgt).reduce(img)
            acc |= rem << o
        cols.append(acc)
    return [combine(Z, c) for c in kernel(cols)] if maps else list(Z)


def _v_image_space(sl: Slicer, D: Bigrading) -> List[int]:
    src = D - V_DEGREE
    ent = sl.mul_entries(V)
    return [sl.image(ent, V_DEGREE, src, z) for z in sl.cycles(src)] + sl.boundaries(D).basis()


def hf_dim_at(sl: Slicer, M: PointedModel, D: Bigrading) -> int:
    K = _kernel_space(sl, M.phi_maps, D)
    return len(Echelon(K)) - len(sl.boundaries(D))


def hf_w_dim_at(sl: Slicer, M: PointedModel, D: Bigrading) -> int:
    K = _kernel_space(sl, M.phi_maps, D)
    Vs = _v_image_space(sl, D)
    return intersection_dim(K, Vs) - len(sl.boundaries(D))


def hf_table(M, flavor: "Flavor | str", W: Window, slicer: Optional[Slicer] = None) -> HilbertTable:
    M = _model(M)
    sl = slicer or Slicer(M.complex, flavor)
    out = HilbertTable()
    for D in W.interior(ACTION_MARGIN).points():
        if sl.dim(D):
            h = hf_dim_at(sl, M, D)
            if h:
                out[D] = h
    return out


def hf_w_table(M, flavor: "Flavor | str", W: Window, slicer: Optional[Slicer] = None) -> HilbertTable:
    M = _model(M)
    f = Flavor.parse(flavor)
    if f is Flavor.HAT:
        raise ValueError("the weak group is defined for the minus and circ flavors only")
    sl = slicer or Slicer(M.complex, f)
    out = HilbertTable()
    for D in W.interior(ACTION_MARGIN).points():
        if sl.dim(D):
            h = hf_w_dim_at(sl, M, D)
            if h:
                out[D] = h
    return out


# ---------------------------------------------------------------- circ modules

def _stacked_kernel(pres: CircPresentation, maps: Sequence[Endomorphism]) -> List[List[int]]:
    """Basis (over F[v]) of the lift to F[v]^m of the common kernel of the
    induced maps on the presented module."""
    m = len(pres.gens)
    if not maps or m == 0:
        return [[1 << 0 if i == j else 0 for i in range(m)] for j in range(m)]
    blocks = [pres.induced_matrix(f) for f in maps]
    rows = []
    for blk in blocks:
        rows.extend(blk)
    rel = []
    for b in range(len(blocks)):
        for l, g in enumerate(pres.gens):
            if g.order > 0:
                rel.append((b * m + l, 1 << g.order))
    ncol = m + len(rel)
    S = [row + [0] * len(rel) for row in rows]
    for t, (r, val) in enumerate(rel):
        S[r][m + t] = val
    ker = fv.kernel_basis(S, ncol)
    return [vec[:m] for vec in ker]


def _intersect_v(basis: List[List[int]], m: int) -> List[List[int]]:
    """Basis of span(basis) intersected with v F[v]^m."""
    p = len(basis)
    if p == 0:
        return []
    M = [[basis[k][j] for k in range(p)] + [(1 << 1) if t == j else 0 for t in range(m)]
         for j in range(m)]
    ker = fv.kernel_basis(M, p + m)
    out = []
    for vec in ker:
        c = vec[:p]
        col = [0] * m
        for k, ck in enumerate(c):
            if ck:
                for j in range(m):
                    if basis[k][j]:
                        col[j] ^= fv.pmul(ck, basis[k][j])
        out.append(col)
    return out


def hf_circ_decomp(M) -> ModuleDecomp:
    M = _model(M)
    pres = CircPresentation(M.complex)
    G = _stacked_kernel(pres, M.phi_maps)
    return quotient_decomposition([g.position for g in pres.gens],
                                  [g.order for g in pres.gens], G)


def hf_w_circ_decomp(M) -> ModuleDecomp:
    M = _model(M)
    pres = CircPresentation(M.complex)
    G = _stacked_kernel(pres, M.phi_maps)
    Gw = _intersect_v(G, len(pres.gens))
    return quotient_decomposition([g.position for g in pres.gens],
                                  [g.order for g in pres.gens], Gw)


@dataclass
class InvariantReport:
    flavor: Flavor
    hfl: HilbertTable
    hf: HilbertTable
    hf_w: Optional[HilbertTable]
    hfl_decomp: Optional[ModuleDecomp] = None
    hf_decomp: Optional[ModuleDecomp] = None
    hf_w_decomp: Optional[ModuleDecomp] = None
    provenance: Dict[str, object] = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"flavor": self.flavor.value, "hfl": self.hfl.as_list(), "hf": self.hf.as_list()}
        if self.hf_w is not None:
            out["hf_w"] = self.hf_w.as_list()
        for key in ("hfl_decomp", "hf_decomp", "hf_w_decomp"):
            dec = getattr(self, key)
            if dec is not None:
                out[key] = dec.as_list()
        out["provenance"] = self.provenance
        return out


def invariant_report(M, flavor: "Flavor | str", W: Window, fixture: str = "") -> InvariantReport:
    M = _model(M)
    f = Flavor.parse(flavor)
    sl = Slicer(M.complex, f)
    hfl = homology_table(M.complex, f, W, sl).restricted(W.interior(ACTION_MARGIN))
    rep = InvariantReport(f, hfl, hf_table(M, f, W, sl),
                          None if f is Flavor.HAT else hf_w_table(M, f, W, sl),
                          provenance={"fixture": fixture or M.complex.name, "window": W.as_list()})
    if f is Flavor.CIRC:
        rep.hfl_decomp = CircPresentation(M.complex).decomposition()
        rep.hf_decomp = hf_circ_decomp(M)
        rep.hf_w_decomp = hf_w_circ_decomp(M)
    return rep


# ---------------------------------------------------------------- closed forms

@dataclass
class ClosedForm:
    p: int
    q: int
    exponents: List[int]
    circ_w: ModuleDecomp
    hatL_dim: int
    hat_dim: int


def torus_closed_form(p: int, q: int, pairing: str = "literal") -> ClosedForm:
    """Expected torus-knot invariants from the exponent sequence a_0 > ... > a_2n.

    ``pairing="literal"`` attaches the torsion order a_{2i-1}-a_{2i}-1 to the
    i-th position exactly as written.  ``pairing="graded"`` attaches it to
    position n+1-i instead, which is the assignment realized by a complex
    that is homogeneous for the stated generator gradings.
    """
    a = torus_knot_exponents(p, q)
    n = (len(a) - 1) // 2
    b = staircase_b_values(a)
    summands = [Free(Bigrading(0, -(2 * a[0] + 2)))]
    for i in range(1, n + 1):
        j = i if pairing == "literal" else n + 1 - i
        if pairing not in ("literal", "graded"):
            raise ValueError(f"unknown pairing {pairing!r}")
        order = a[2 * j - 1] - a[2 * j] - 1
        if order > 0:
            summands.append(Torsion(Bigrading(-b[i], -(b[n - i] + 2)), order))
    gaps = sum(1 for j in range(1, n + 1) if a[j - 1] - a[j] > 1)
    return ClosedForm(p, q, a, ModuleDecomp(summands), 2 * n + 1, (n + 1) + gaps)


@dataclass
class Comparison:
    match: bool
    shift: Optional[Bigrading]
    mismatches: List[str]

    def __bool__(self) -> bool:
        return self.match


def compare_decomps(actual: ModuleDecomp, expected: ModuleDecomp) -> Comparison:
    """Equality of summand multisets up to one global bigrading translation."""
    probs = []
    fa, fe = len(actual.free), len(expected.free)
    if fa != fe:
        probs.append(f"free summands: {fa} vs expected {fe}")
    oa = sorted(s.order for s in actual.torsion)
    oe = sorted(s.order for s in expected.torsion)
    if oa != oe:
        probs.append(f"torsion orders: {oa} vs expected {oe}")
    if not actual and not expected:
        return Comparison(True, Bigrading(0, 0), [])
    if probs:
        return Comparison(False, None, probs)
    anchor = expected[0]
    for s in actual:
        if s.kind != anchor.kind or s.order != anchor.order:
            continue
        shift = anchor.position - s.position
        if actual.shifted(shift) == expected:
            return Comparison(True, shift, [])
    return Comparison(False, None, [f"relative positions differ: {actual} vs expected {expected}"])


def compare_tables(actual: HilbertTable, expected: HilbertTable) -> Comparison:
    if not actual and not expected:
        return Comparison(True, Bigrading(0, 0), [])
    if sum(actual.values()) != sum(expected.values()):
        return Comparison(False, None, [f"total dimension {actual.total()} vs expected {expected.total()}"])
    ref = min(expected)
    for g in actual:
        s = ref - g
        if actual.shifted(s) == expected:
            return Comparison(True, s, [])
    return Comparison(False, None, ["relative grading pattern differs"])


def compare_torus(C: Complex, form: ClosedForm) -> Comparison:
    M = _model(C)
    probs = []
    cw = compare_decomps(hf_w_circ_decomp(M), form.circ_w)
    if not cw:
        probs += [f"circ_w: {m}" for m in cw.mismatches]
    W = Window.hull(C)
    hatl = homology_table(C, Flavor.HAT, W).total()
    if hatl != form.hatL_dim:
        probs.append(f"hatL dimension {hatl} vs expected {form.hatL_dim}")
    hat = hf_table(M, Flavor.HAT, W).total()
    if hat != form.hat_dim:
        probs.append(f"hat dimension {hat} vs expected {form.hat_dim}")
    return Comparison(not probs, cw.shift, probs)


# ---------------------------------------------------------------- trace classes

@dataclass
class TraceClass:
    ambient: Complex
    cycle: Dict[str, Poly]

    def __add__(self, other: "TraceClass") -> "TraceClass":
        if self.ambient != other.ambient:
            raise ValueError("trace classes live in different complexes")
        out = dict(self.cycle)
        for k, p in other.cycle.items():
            s = out.get(k, Poly()) + p
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return TraceClass(self.ambient, out)

    def bigradings(self) -> set:
        out = set()
        for x, p in self.cycle.items():
            for m in p.terms:
                out.add(self.ambient.grading(x) + Bigrading(-2 * m[0], -2 * m[1]))
        return out


def trace_class(C: Complex, f: Endomorphism) -> TraceClass:
    probs = check_map(C, C, f)
    if probs:
        raise ValueError("not a chain map: " + "; ".join(probs[:4]))
    amb = tensor(C, dual(C), name=f"{C.name}|dual")
    cyc: Dict[str, Poly] = {}
    for g in C.gens:
        for h, p in f.entries.get(g.name, {}).items():
            key = f"{h}|{dual_name(g.name)}"
            s = cyc.get(key, Poly()) + p
            if s:
                cyc[key] = s
            else:
                cyc.pop(key, None)
    tc = TraceClass(amb, cyc)
    if amb.d(cyc):
        raise AssertionError("trace class is not closed")
    return tc


def distinguish(t1: TraceClass, t2: TraceClass, flavor: "Flavor | str") -> bool:
    if t1.cycle and t2.cycle and t1.bigradings() != t2.bigradings():
        raise ValueError("trace classes sit in different bigradings")
    diff = t1 + t2
    return not is_boundary(diff.ambient, flavor, diff.cycle)


__all__ = [
    "hf_table", "hf_w_table", "hf_dim_at", "hf_w_dim_at", "hf_circ_decomp", "hf_w_circ_decomp",
    "InvariantReport", "invariant_report", "ClosedForm", "torus_closed_form", "Comparison",
    "compare_decomps", "compare_tables", "compare_torus", "TraceClass", "trace_class",
    "distinguish",
]
