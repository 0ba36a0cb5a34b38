"""Bigraded free chain complexes over F[u,v] and their structural operations.

Matrices are stored sparsely: ``diff[x][y]`` is the coefficient of ``y`` in
``d(x)``.  Only nonzero entries are kept.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .poly import (
    D_DEGREE, ONE, PHI_DEGREE, PSI_DEGREE, ZERO_GRADING, Bigrading, Poly,
    format_poly, monomial_bidegree, monomial_for_shift, parse_poly,
    u_derivative, v_derivative,
)

Entries = Dict[str, Dict[str, Poly]]
Vector = Dict[str, Poly]


@dataclass(frozen=True)
class Generator:
    name: str
    grading: Bigrading


def _freeze(entries: Mapping[str, Mapping[str, Poly]]) -> Entries:
    out: Entries = {}
    for x, col in entries.items():
        kept = {y: p for y, p in col.items() if p}
        if kept:
            out[x] = kept
    return out


def vec_add(a: Vector, b: Vector) -> Vector:
    out = dict(a)
    for k, p in b.items():
        q = out.get(k)
        s = p if q is None else q + p
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_scale(a: Vector, c: Poly) -> Vector:
    out = {}
    for k, p in a.items():
        q = p * c
        if q:
            out[k] = q
    return out


def apply_entries(entries: Entries, vec: Vector) -> Vector:
    out: Vector = {}
    for x, c in vec.items():
        col = entries.get(x)
        if col:
            out = vec_add(out, vec_scale(col, c))
    return out


def compose_entries(f: Entries, g: Entries) -> Entries:
    """Entries of f after g."""
    return _freeze({x: apply_entries(f, col) for x, col in g.items()})


def add_entries(f: Entries, g: Entries) -> Entries:
    keys = set(f) | set(g)
    return _freeze({x: vec_add(f.get(x, {}), g.get(x, {})) for x in keys})


class Complex:
    """Free bigraded complex with a (-1,-1) differential."""

    def __init__(self, gens: Sequence[Generator], diff: Mapping[str, Mapping[str, Poly]],
                 basepoint_pairs: int = 1, name: str = "C"):
        self.gens: Tuple[Generator, ...] = tuple(gens)
        self.name = name
        self.basepoint_pairs = int(basepoint_pairs)
        self.index: Dict[str, int] = {}
        for i, g in enumerate(self.gens):
            if g.name in self.index:
                raise ValueError(f"duplicate generator name {g.name!r}")
            self.index[g.name] = i
        self.diff: Entries = _freeze(diff)
        for x, col in self.diff.items():
            if x not in self.index:
                raise ValueError(f"differential mentions unknown generator {x!r}")
            for y in col:
                if y not in self.index:
                    raise ValueError(f"differential mentions unknown generator {y!r}")

    def grading(self, name: str) -> Bigrading:
        return self.gens[self.index[name]].grading

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.gens]

    def d(self, vec: Vector) -> Vector:
        return apply_entries(self.diff, vec)

    def entry(self, x: str, y: str) -> Poly:
        return self.diff.get(x, {}).get(y, Poly())

    def __len__(self) -> int:
        return len(self.gens)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return (self.gens == other.gens and self.diff == other.diff
                and self.basepoint_pairs == other.basepoint_pairs)

    def __repr__(self) -> str:
        return f"Complex({self.name!r}, {len(self.gens)} gens)"

    def renamed(self, mapping: Mapping[str, str], name: Optional[str] = None) -> "Complex":
        gens = [Generator(mapping[g.name], g.grading) for g in self.gens]
        diff = {mapping[x]: {mapping[y]: p for y, p in col.items()} for x, col in self.diff.items()}
        return Complex(gens, diff, self.basepoint_pairs, name or self.name)


@dataclass(frozen=True)
class Endomorphism:
    """Homogeneous module map between complexes over the same (or another) basis."""

    entries: Entries
    degree: Bigrading
    name: str = ""

    def __call__(self, vec: Vector) -> Vector:
        return apply_entries(self.entries, vec)

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        return Endomorphism(compose_entries(self.entries, other.entries),
                            self.degree + other.degree, f"{self.name}.{other.name}")

    def __add__(self, other: "Endomorphism") -> "Endomorphism":
        if self.degree != other.degree and self.entries and other.entries:
            raise ValueError(f"cannot add maps of degrees {self.degree} and {other.degree}")
        deg = self.degree if self.entries else other.degree
        return Endomorphism(add_entries(self.entries, other.entries), deg)

    def is_zero(self) -> bool:
        return not self.entries


def identity(C: Complex) -> Endomorphism:
    return Endomorphism({g.name: {g.name: ONE} for g in C.gens}, ZERO_GRADING, "id")


def zero_map(degree: Bigrading = ZERO_GRADING) -> Endomorphism:
    return Endomorphism({}, degree, "0")


# ---------------------------------------------------------------- validation

@dataclass
class ValidationReport:
    d_squared_zero: bool = True
    homogeneous: bool = True
    reduced: bool = True
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.d_squared_zero and self.homogeneous

    def __str__(self) -> str:
        if self.ok and not self.problems:
            return "ok" + ("" if self.reduced else " (not reduced)")
        return "; ".join(self.problems)


def _homogeneity_problems(src: Complex, tgt: Complex, entries: Entries,
                          degree: Bigrading, label: str) -> List[str]:
    out = []
    for x, col in entries.items():
        gx = src.grading(x)
        for y, p in col.items():
            gy = tgt.grading(y)
            for m in p.terms:
                if gy + monomial_bidegree(m) != gx + degree:
                    out.append(f"{label} entry {x} -> {y}: term {format_poly(Poly([m]))} "
                               f"is not of degree {degree}")
    return out


def validate(C: Complex) -> ValidationReport:
    rep = ValidationReport()
    if not C.gens:
        rep.problems.append("empty complex")
        rep.d_squared_zero = False
        return rep
    hom = _homogeneity_problems(C, C, C.diff, D_DEGREE, "d")
    if hom:
        rep.homogeneous = False
        rep.problems.extend(hom)
    dd = compose_entries(C.diff, C.diff)
    if dd:
        rep.d_squared_zero = False
        for x, col in dd.items():
            for y, p in col.items():
                rep.problems.append(f"d^2({x}) has coefficient {format_poly(p)} on {y}")
    for x, col in C.diff.items():
        for y, p in col.items():
            if p.has_constant():
                rep.reduced = False
                rep.problems.append(f"entry {x} -> {y} has a constant term (not reduced)")
    return rep


def check_map(src: Complex, tgt: Complex, f: Endomorphism) -> List[str]:
    """Problems preventing f from being a homogeneous chain map src -> tgt."""
    probs = _homogeneity_problems(src, tgt, f.entries, f.degree, f.name or "map")
    for x in f.entries:
        if x not in src.index:
            probs.append(f"map source {x!r} is not a generator")
    lhs = add_entries(compose_entries(tgt.diff, f.entries), compose_entries(f.entries, src.diff))
    for x, col in lhs.items():
        for y, p in col.items():
            probs.append(f"(d f + f d)({x}) has coefficient {format_poly(p)} on {y}")
    return probs


def is_chain_map(src: Complex, tgt: Complex, f: Endomorphism) -> bool:
    return not check_map(src, tgt, f)


# ---------------------------------------------------------------- constructors

def unknot() -> Complex:
    return Complex([Generator("x0", ZERO_GRADING)], {}, 1, "unknot")


def _check_exponents(a: Sequence[int]) -> None:
    if len(a) % 2 != 1:
        raise ValueError("exponent list must have odd length")
    if any(a[i] <= a[i + 1] for i in range(len(a) - 1)):
        raise ValueError("exponent list must be strictly decreasing")
    if any(a[i] != -a[len(a) - 1 - i] for i in range(len(a))):
        raise ValueError("exponent list must be antisymmetric (a_i = -a_{2n-i})")


def staircase_b_values(a: Sequence[int]) -> List[int]:
    """b_{2i} for i = 0..n, by the alternating sum over a_1..a_{2i}."""
    n = (len(a) - 1) // 2
    out = []
    for i in range(n + 1):
        out.append(-2 * sum((-1) ** j * a[j] for j in range(1, 2 * i + 1)))
    return out


def staircase_from_exponents(a: Sequence[int], name: str = "staircase") -> Complex:
    a = [int(t) for t in a]
    _check_exponents(a)
    n = (len(a) - 1) // 2
    b = staircase_b_values(a)
    gens = [Generator(f"x{i}", Bigrading(-b[i], -b[n - i])) for i in range(n + 1)]
    zs = [Generator(f"z{i}", Bigrading(-b[i] + 1, -b[n - i + 1] + 1)) for i in range(1, n + 1)]
    diff: Entries = {}
    for i, z in enumerate(zs, start=1):
        target = z.grading + D_DEGREE
        col = {}
        for xi, want in ((gens[i - 1], "u"), (gens[i], "v")):
            m = monomial_for_shift(target - xi.grading)
            if m is None or (want == "u" and (m[1] != 0 or m[0] == 0)) or \
                    (want == "v" and (m[0] != 0 or m[1] == 0)):
                raise ValueError(f"no homogeneous {want}-power from {z.name} to {xi.name}")
            col[xi.name] = Poly([m])
        diff[z.name] = col
    order = [gens[0]]
    for i in range(n):
        order += [zs[i], gens[i + 1]]
    return Complex(order, diff, 1, name)


def _int_poly_divide(num: List[int], den: List[int]) -> List[int]:
    """Exact long division of integer polynomials (coefficient lists, low degree first)."""
    num = num[:]
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        c = Fraction(num[k + len(den) - 1], lead)
        if c.denominator != 1:
            raise ArithmeticError("inexact division")
        out[k] = int(c)
        for j, dj in enumerate(den):
            num[k + j] -= out[k] * dj
    if any(num):
        raise ArithmeticError("nonzero remainder")
    return out


def _int_poly_mul(p: List[int], q: List[int]) -> List[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def torus_knot_alexander(p: int, q: int) -> Dict[int, int]:
    """Symmetrized Alexander polynomial of T(p,q) as {exponent: coefficient}."""
    if not (0 < p < q) or gcd(p, q) != 1:
        raise ValueError(f"need 0 < p < q coprime, got ({p},{q})")

    def tk_minus_1(k):
        return [-1] + [0] * (k - 1) + [1]

    num = _int_poly_mul(tk_minus_1(p * q), tk_minus_1(1))
    den = _int_poly_mul(tk_minus_1(p), tk_minus_1(q))
    quot = _int_poly_divide(num, den)
    shift = (p - 1) * (q - 1) // 2
    return {k - shift: c for k, c in enumerate(quot) if c}


def torus_knot_exponents(p: int, q: int) -> List[int]:
    poly = torus_knot_alexander(p, q)
    exps = sorted(poly, reverse=True)
    for k, e in enumerate(exps):
        if poly[e] != (-1) ** k:
            raise ArithmeticError(f"T({p},{q}) Alexander polynomial is not alternating")
    return exps


def torus_knot(p: int, q: int) -> Complex:
    return staircase_from_exponents(torus_knot_exponents(p, q), f"torus:{p},{q}")


FIG8_TEXT = """\
complex figure_eight
gen x 0 0
gen x0 0 0
gen x1 1 -1
gen y0 -1 1
gen y1 0 0
d x1 -> x0 : v
d y0 -> x0 : u
d y1 -> x1 : u
d y1 -> y0 : v
"""

FIG8_ROLLSPIN_TEXT = """\
map rollspin : x -> x
map rollspin : x0 -> x0
map rollspin : x1 -> x1
map rollspin : y0 -> y0
map rollspin : y1 -> y1 + x0
"""


def figure_eight() -> Complex:
    return parse_complex(FIG8_TEXT)


# ---------------------------------------------------------------- structural ops

def tensor(C1: Complex, C2: Complex, name: Optional[str] = None) -> Complex:
    gens = []
    for a in C1.gens:
        for b in C2.gens:
            gens.append(Generator(f"{a.name}|{b.name}", a.grading + b.grading))
    diff: Entries = {}
    for a in C1.gens:
        for b in C2.gens:
            col: Vector = {}
            for a2, p in C1.diff.get(a.name, {}).items():
                col = vec_add(col, {f"{a2}|{b.name}": p})
            for b2, p in C2.diff.get(b.name, {}).items():
                col = vec_add(col, {f"{a.name}|{b2}": p})
            if col:
                diff[f"{a.name}|{b.name}"] = col
    return Complex(gens, diff, C1.basepoint_pairs + C2.basepoint_pairs,
                   name or f"{C1.name}|{C2.name}")


def dual_name(name: str) -> str:
    return name + "*"


def dual(C: Complex, name: Optional[str] = None) -> Complex:
    gens = [Generator(dual_name(g.name), -g.grading) for g in C.gens]
    diff: Entries = {}
    for x, col in C.diff.items():
        for y, p in col.items():
            diff.setdefault(dual_name(y), {})[dual_name(x)] = p
    return Complex(gens, diff, C.basepoint_pairs, name or f"dual({C.name})")


def shift(C: Complex, s: Bigrading) -> Complex:
    s = Bigrading.of(s)
    gens = [Generator(g.name, g.grading + s) for g in C.gens]
    return Complex(gens, C.diff, C.basepoint_pairs, C.name)


def phi(C: Complex) -> Endomorphism:
    _require_reduced(C, "phi")
    return Endomorphism(_freeze({x: {y: u_derivative(p) for y, p in col.items()}
                                 for x, col in C.diff.items()}), PHI_DEGREE, "phi")


def psi(C: Complex) -> Endomorphism:
    _require_reduced(C, "psi")
    return Endomorphism(_freeze({x: {y: v_derivative(p) for y, p in col.items()}
                                 for x, col in C.diff.items()}), PSI_DEGREE, "psi")


def _require_reduced(C: Complex, what: str) -> None:
    for x, col in C.diff.items():
        for y, p in col.items():
            if p.has_constant():
                raise ValueError(f"{what} needs a reduced complex; entry {x} -> {y} is {p}")


@dataclass
class PointedModel:
    """A complex with one (Phi, Psi) pair of chain maps per basepoint pair."""

    complex: Complex
    phi_maps: List[Endomorphism]
    psi_maps: List[Endomorphism]

    def __post_init__(self):
        if len(self.phi_maps) != len(self.psi_maps):
            raise ValueError("phi_maps and psi_maps must be parallel lists")
        if len(self.phi_maps) != self.complex.basepoint_pairs:
            raise ValueError("one (phi, psi) pair is needed per basepoint pair")

    @classmethod
    def from_complex(cls, C: Complex) -> "PointedModel":
        if C.basepoint_pairs != 1:
            raise ValueError("from_complex builds single-pair models; supply maps explicitly")
        return cls(C, [phi(C)], [psi(C)])

    @property
    def pairs(self) -> int:
        return len(self.phi_maps)


STAB_MARK = "#"


def quasi_stabilize(M: "PointedModel | Complex") -> PointedModel:
    """C + C[[1,-1]] with the new pair acting between the two copies.

    The copy sits at grading offset (-1, 1), so the new Phi (copy -> original)
    has bidegree (1,-1) and the new Psi (original -> copy) has (-1,1).
    """
    if isinstance(M, Complex):
        M = PointedModel.from_complex(M)
    C = M.complex
    k = M.pairs
    tag = f"{STAB_MARK}{k}"
    copy = {g.name: g.name + tag for g in C.gens}
    offset = -PHI_DEGREE
    gens = list(C.gens) + [Generator(copy[g.name], g.grading + offset) for g in C.gens]
    diff: Entries = dict(C.diff)
    for x, col in C.diff.items():
        diff[copy[x]] = {copy[y]: p for y, p in col.items()}
    stab = Complex(gens, diff, C.basepoint_pairs + 1, C.name + tag)

    def doubled(f: Endomorphism) -> Endomorphism:
        ent = dict(f.entries)
        for x, col in f.entries.items():
            ent[copy[x]] = {copy[y]: p for y, p in col.items()}
        return Endomorphism(ent, f.degree, f.name)

    new_phi = Endomorphism({copy[g.name]: {g.name: ONE} for g in C.gens}, PHI_DEGREE, f"phi{tag}")
    new_psi = Endomorphism({g.name: {copy[g.name]: ONE} for g in C.gens}, PSI_DEGREE, f"psi{tag}")
    return PointedModel(stab, [doubled(f) for f in M.phi_maps] + [new_phi],
                        [doubled(f) for f in M.psi_maps] + [new_psi])


# ---------------------------------------------------------------- base change

def random_automorphism(C: Complex, rng: random.Random, density: float = 0.6,
                        max_exp: int = 3) -> Endomorphism:
    """Random unitriangular homogeneous degree-(0,0) automorphism."""
    ent: Entries = {g.name: {g.name: ONE} for g in C.gens}
    names = C.names
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            m = monomial_for_shift(C.grading(x) - C.grading(y))
            if m is None or max(m) > max_exp or rng.random() > density:
                continue
            ent[x][y] = Poly([m])
    return Endomorphism(ent, ZERO_GRADING, "T")


def unitriangular_inverse(C: Complex, T: Endomorphism) -> Endomorphism:
    """Inverse of I + N with N nilpotent, as I + N + N^2 + ... (characteristic 2)."""
    N = add_entries(T.entries, identity(C).entries)
    inv = identity(C).entries
    power = N
    for _ in range(len(C.gens)):
        if not power:
            break
        inv = add_entries(inv, power)
        power = compose_entries(N, power)
    if power:
        raise ValueError("automorphism is not unitriangular")
    return Endomorphism(inv, ZERO_GRADING, "T^-1")


def conjugate(C: Complex, T: Endomorphism) -> Complex:
    Tinv = unitriangular_inverse(C, T)
    diff = compose_entries(T.entries, compose_entries(C.diff, Tinv.entries))
    return Complex(C.gens, diff, C.basepoint_pairs, C.name + "^T")


# ---------------------------------------------------------------- fixture text

class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.line, self.col, self.msg = line, col, msg
        super().__init__(f"line {line}, col {col}: {msg}" if line else msg)


_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_'*|#.]*$")
_RESERVED = {"u", "v", "1", "0"}


def _check_name(tok: str, lineno: int, col: int) -> str:
    if not _NAME.match(tok) or tok in _RESERVED:
        raise ParseError(f"bad generator name {tok!r}", lineno, col)
    return tok


@dataclass
class Fixture:
    complex: Optional[Complex]
    maps: Dict[str, Dict[str, Vector]]


def _parse_combination(text: str, lineno: int, col: int) -> Vector:
    out: Vector = {}
    if text.strip() == "0":
        return out
    for chunk in text.split("+"):
        toks = chunk.split()
        if not toks:
            raise ParseError("empty term in combination", lineno, col)
        gen = _check_name(toks[-1], lineno, col)
        coeff = parse_poly(" ".join(toks[:-1])) if len(toks) > 1 else ONE
        out = vec_add(out, {gen: coeff})
    return out


def parse_fixture(text: str) -> Fixture:
    name = None
    pairs = 1
    gens: List[Generator] = []
    seen: Dict[str, int] = {}
    diff: Entries = {}
    d_lines: List[Tuple[int, str, str]] = []
    maps: Dict[str, Dict[str, Vector]] = {}
    map_refs: List[Tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        toks = line.split()
        kw = toks[0]
        if kw == "complex":
            if len(toks) != 2:
                raise ParseError("expected 'complex <name>'", lineno, col)
            name = toks[1]
        elif kw == "pairs":
            if len(toks) != 2 or not toks[1].isdigit():
                raise ParseError("expected 'pairs <count>'", lineno, col)
            pairs = int(toks[1])
        elif kw == "gen":
            if len(toks) != 4:
                raise ParseError("expected 'gen <name> <gr_w> <gr_z>'", lineno, col)
            g = _check_name(toks[1], lineno, line.index(toks[1]) + 1)
            if g in seen:
                raise ParseError(f"duplicate generator name {g!r} (first on line {seen[g]})",
                                 lineno, line.index(toks[1]) + 1)
            try:
                gr = Bigrading(int(toks[2]), int(toks[3]))
            except ValueError:
                raise ParseError("gradings must be integers", lineno, col) from None
            seen[g] = lineno
            gens.append(Generator(g, gr))
        elif kw == "d":
            m = re.match(r"^\s*d\s+(\S+)\s*->\s*(\S+)\s*:\s*(.+)$", line)
            if not m:
                raise ParseError("expected 'd <source> -> <target> : <poly>'", lineno, col)
            src, tgt, lit = m.groups()
            try:
                p = parse_poly(lit)
            except ValueError as e:
                raise ParseError(str(e), lineno, m.start(3) + 1) from None
            if src in diff and tgt in diff[src]:
                raise ParseError(f"repeated entry {src} -> {tgt}", lineno, col)
            diff.setdefault(src, {})[tgt] = p
            d_lines.append((lineno, src, tgt))
        elif kw == "map":
            m = re.match(r"^\s*map\s+(\S+)\s*:\s*(\S+)\s*->\s*(.+)$", line)
            if not m:
                raise ParseError("expected 'map <name> : <source> -> <combination>'", lineno, col)
            mname, src, comb = m.groups()
            try:
                vec = _parse_combination(comb, lineno, m.start(3) + 1)
            except ValueError as e:
                if isinstance(e, ParseError):
                    raise
                raise ParseError(str(e), lineno, m.start(3) + 1) from None
            entries = maps.setdefault(mname, {})
            if src in entries:
                raise ParseError(f"repeated source {src} for map {mname}", lineno, col)
            entries[src] = vec
            map_refs.append((lineno, src))
            map_refs.extend((lineno, t) for t in vec)
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, col)
    C = None
    if name is not None or gens or diff:
        if not gens:
            raise ParseError("empty complex")
        for lineno, src, tgt in d_lines:
            for g in (src, tgt):
                if g not in seen:
                    raise ParseError(f"unknown generator {g!r}", lineno, 1)
        C = Complex(gens, diff, pairs, name or "C")
    if C is not None:
        for lineno, g in map_refs:
            if g not in seen:
                raise ParseError(f"unknown generator {g!r}", lineno, 1)
    return Fixture(C, maps)


def _strip_comment(raw: str) -> str:
    i = raw.find("#")
    # '#' inside generator names (stabilized copies) is allowed when glued to a name
    while i >= 0:
        if i == 0 or raw[i - 1].isspace():
            return raw[:i]
        i = raw.find("#", i + 1)
    return raw


def parse_complex(text: str) -> Complex:
    fx = parse_fixture(text)
    if fx.complex is None:
        raise ParseError("empty complex")
    return fx.complex


def serialize_complex(C: Complex) -> str:
    lines = [f"complex {C.name}"]
    if C.basepoint_pairs != 1:
        lines.append(f"pairs {C.basepoint_pairs}")
    for g in C.gens:
        lines.append(f"gen {g.name} {g.grading.gr_w} {g.grading.gr_z}")
    for g in C.gens:
        col = C.diff.get(g.name, {})
        for y in sorted(col, key=C.index.__getitem__):
            lines.append(f"d {g.name} -> {y} : {format_poly(col[y])}")
    return "\n".join(lines) + "\n"


def format_vector(vec: Vector, order: Optional[Mapping[str, int]] = None) -> str:
    if not vec:
        return "0"
    keys = sorted(vec, key=(order.__getitem__ if order else str))
    parts = []
    for k in keys:
        p = vec[k]
        parts.append(k if p == ONE else f"{format_poly(p) if p.is_monomial() else '(' + format_poly(p) + ')'} {k}")
    return " + ".join(parts)


def serialize_map(name: str, C: Complex, entries: Mapping[str, Vector]) -> str:
    lines = []
    for g in C.gens:
        if g.name in entries:
            lines.append(f"map {name} : {g.name} -> {format_vector(entries[g.name], C.index)}")
    return "\n".join(lines) + "\n"


def map_from_fixture(C: Complex, entries: Mapping[str, Vector], name: str = "f") -> Endomorphism:
    """Build an endomorphism from fixture entries, inferring its bidegree."""
    degree = None
    for x, vec in entries.items():
        for y, p in vec.items():
            for m in p.terms:
                dgr = C.grading(y) + monomial_bidegree(m) - C.grading(x)
                if degree is None:
                    degree = dgr
                elif dgr != degree:
                    raise ValueError(f"map {name} is not homogeneous ({x} -> {y})")
    return Endomorphism(_freeze(entries), degree or ZERO_GRADING, name)


def fig8_rollspin() -> Endomorphism:
    fx = parse_fixture(FIG8_ROLLSPIN_TEXT)
    return map_from_fixture(figure_eight(), fx.maps["rollspin"], "rollspin")


__all__ = [
    "Generator", "Complex", "Endomorphism", "PointedModel", "ValidationReport", "ParseError",
    "Fixture", "validate", "check_map", "is_chain_map", "unknot", "staircase_from_exponents",
    "staircase_b_values", "torus_knot_alexander", "torus_knot_exponents", "torus_knot",
    "figure_eight", "fig8_rollspin", "tensor", "dual", "dual_name", "shift", "phi", "psi",
    "quasi_stabilize", "identity", "zero_map", "random_automorphism", "unitriangular_inverse",
    "conjugate", "parse_fixture", "parse_complex", "serialize_complex", "serialize_map",
    "map_from_fixture", "format_vector", "vec_add", "vec_scale", "apply_entries",
    "compose_entries", "add_entries", "FIG8_TEXT", "FIG8_ROLLSPIN_TEXT",
]
