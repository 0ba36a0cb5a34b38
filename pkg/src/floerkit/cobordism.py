"""Scalar calculus for decorated link cobordisms, the twist formula and bidegrees.

Each elementary piece acts on the weak group as v^k times the identity, so a
composite word evaluates to a single power of v.  The word calculus never
claims anything about the full HFL groups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .complex import Endomorphism, PointedModel, compose_entries, add_entries, identity
from .homology import ACTION_MARGIN, Free, ModuleDecomp, Slicer, Torsion, Window
from .invariants import _kernel_space, _model
from .poly import Bigrading, Flavor, ZERO_GRADING


class WordError(ValueError):
    """Malformed or unbalanced cobordism word."""


# ---------------------------------------------------------------- tokens

@dataclass(frozen=True)
class Token:
    kind: str
    arg: Optional[str] = None

    def __str__(self) -> str:
        return self.kind if self.arg is None else f"{self.kind} {self.arg}"


# v-exponent contributed by each token kind
WEIGHTS = {
    "merge": 0,
    "split": 1,
    "pointshift": 1,
    "twist": 0,
    "perturbation": 0,
    "deperturbation": 0,
    "elementary": 0,
    "reverse": 1,        # the pair elementary;reverse is v
    "ribbon": 0,
    "coribbon": 0,
    "compression": 1,
}

ALIASES = {"perturb": "perturbation", "deperturb": "deperturbation",
           "point-shift": "pointshift", "point_shift": "pointshift"}

OPENERS = {"elementary": "reverse", "ribbon": "coribbon"}
CLOSERS = {v: k for k, v in OPENERS.items()}


def parse_word(text: str) -> List[Token]:
    """One token per line or ';'-separated: split, merge, twist 2, elementary e1, ..."""
    out: List[Token] = []
    chunks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        for part in line.split(";"):
            if part.strip():
                chunks.append((lineno, part.strip()))
    for lineno, chunk in chunks:
        t = chunk.split()
        kind = ALIASES.get(t[0].lower(), t[0].lower())
        if kind not in WEIGHTS:
            raise WordError(f"line {lineno}: unknown token {t[0]!r}")
        if kind == "twist":
            if len(t) != 2 or not t[1].isdigit():
                raise WordError(f"line {lineno}: twist needs a nonnegative pair count")
            out.append(Token(kind, t[1]))
        elif kind in OPENERS or kind in CLOSERS:
            if len(t) != 2:
                raise WordError(f"line {lineno}: {kind} needs an id")
            out.append(Token(kind, t[1]))
        else:
            if len(t) != 1:
                raise WordError(f"line {lineno}: {kind} takes no argument")
            out.append(Token(kind))
    return out


def format_word(word: Sequence[Token]) -> str:
    return "".join(str(t) + "\n" for t in word)


def check_brackets(word: Sequence[Token]) -> None:
    stack: List[Token] = []
    for t in word:
        if t.kind in OPENERS:
            if any(s.kind == t.kind and s.arg == t.arg for s in stack):
                raise WordError(f"{t} is already open")
            stack.append(t)
        elif t.kind in CLOSERS:
            want = CLOSERS[t.kind]
            if not stack or stack[-1].kind != want or stack[-1].arg != t.arg:
                raise WordError(f"unpaired {t}")
            stack.pop()
    if stack:
        raise WordError(f"unpaired {stack[-1]}")


@dataclass(frozen=True)
class ScalarResult:
    """The map v^k * Id on the weak group."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("negative v-power")

    @property
    def hat_zero(self) -> bool:
        return self.k >= 1

    def __mul__(self, other: "ScalarResult") -> "ScalarResult":
        return ScalarResult(self.k + other.k)

    def __str__(self) -> str:
        return f"v^{self.k}"

    def notes(self) -> Dict[str, str]:
        return {"minus": f"v^{self.k} Id on HF_w",
                "circ": f"v^{self.k} Id on HF_w",
                "hat": "zero" if self.hat_zero else "Id"}


def evaluate_word(word: Sequence[Token]) -> ScalarResult:
    check_brackets(word)
    return ScalarResult(sum(WEIGHTS[t.kind] for t in word))


def evaluate_text(text: str) -> ScalarResult:
    return evaluate_word(parse_word(text))


def expand_compressions(word: Sequence[Token]) -> List[Token]:
    """Replace each compression by a fresh elementary/reverse pair (the surgery
    along the disk followed by its reverse), giving a second evaluation route."""
    used = {t.arg for t in word if t.arg is not None}
    out: List[Token] = []
    n = 0
    for t in word:
        if t.kind != "compression":
            out.append(t)
            continue
        while f"cd{n}" in used:
            n += 1
        name = f"cd{n}"
        used.add(name)
        out += [Token("elementary", name), Token("reverse", name)]
    return out


@dataclass(frozen=True)
class CompressionCheck:
    factor: int          # power of v relating the two words
    with_s: ScalarResult
    with_sd: ScalarResult
    holds: bool


def compression_compare(word_s: Sequence[Token], word_sd: Sequence[Token]) -> CompressionCheck:
    """Check g_S = v^c g_{S_D}, where c counts the extra compressions in word_s."""
    strip = lambda w: [t for t in w if t.kind != "compression"]
    if strip(word_s) != strip(word_sd):
        raise WordError("words differ in tokens other than compressions")
    c = sum(t.kind == "compression" for t in word_s) - sum(t.kind == "compression" for t in word_sd)
    if c < 0:
        raise WordError("the compressed word has fewer compressions than the original")
    a, b = evaluate_word(word_s), evaluate_word(word_sd)
    alt = evaluate_word(expand_compressions(word_s))
    return CompressionCheck(c, a, b, a.k == b.k + c and alt.k == a.k)


# ---------------------------------------------------------------- twist formula

def twist_chain_map(M: PointedModel, selection: Optional[Sequence[int]] = None) -> Endomorphism:
    """Sum over subsets I = {j1 < ... < jm} of Psi_j1 Phi_j1 ... Psi_jm Phi_jm."""
    M = _model(M)
    sel = list(range(M.pairs)) if selection is None else list(selection)
    for j in sel:
        if not 0 <= j < M.pairs:
            raise ValueError(f"no basepoint pair {j}")
    if len(set(sel)) != len(sel):
        raise ValueError("selection repeats a pair")
    C = M.complex
    total = identity(C).entries
    for m in range(1, len(sel) + 1):
        for I in itertools.combinations(sel, m):
            term = identity(C).entries
            for j in I:  # leftmost factor is applied last
                term = compose_entries(term, compose_entries(M.psi_maps[j].entries,
                                                             M.phi_maps[j].entries))
            total = add_entries(total, term)
    return Endomorphism(total, ZERO_GRADING, f"twist{sel}")


@dataclass
class TwistResult:
    """Matrices of the induced map per bidegree.  Column i is the image of basis
    vector i, as a bitset over the same basis."""

    on_homology: Dict[Bigrading, List[int]]
    on_kernel: Dict[Bigrading, List[int]]

    @staticmethod
    def _is_id(mats: Dict[Bigrading, List[int]]) -> bool:
        return all(col == 1 << i for m in mats.values() for i, col in enumerate(m))

    @property
    def kernel_identity(self) -> bool:
        return self._is_id(self.on_kernel)

    @property
    def homology_identity(self) -> bool:
        return self._is_id(self.on_homology)


def _induced_matrix(sl: Slicer, f: Endomorphism, D: Bigrading, space: List[int]) -> List[int]:
    """Matrix of f on span(space)/boundaries, in a basis chosen from ``space``."""
    ech = sl.boundaries(D).copy()
    basis = []
    for z in space:
        if ech.add(z, 1 << len(basis)):
            basis.append(z)
    out = []
    for z in basis:
        img = sl.image(f.entries, f.degree, D, z)
        rem, combo = ech.reduce(img)
        if rem:
            raise ValueError(f"map does not preserve the subspace at {D}")
        out.append(combo)
    return out


def twist_endomorphism(M, selection: Optional[Sequence[int]] = None,
                       flavor: "Flavor | str" = Flavor.MINUS,
                       W: Optional[Window] = None) -> TwistResult:
    M = _model(M)
    f = twist_chain_map(M, selection)
    W = W or Window.around(M.complex)
    sl = Slicer(M.complex, flavor)
    hom: Dict[Bigrading, List[int]] = {}
    ker: Dict[Bigrading, List[int]] = {}
    for D in W.interior(ACTION_MARGIN).points():
        if not sl.dim(D):
            continue
        h = _induced_matrix(sl, f, D, sl.cycles(D))
        if h:
            hom[D] = h
        k = _induced_matrix(sl, f, D, _kernel_space(sl, M.phi_maps, D))
        if k:
            ker[D] = k
    return TwistResult(hom, ker)


# ---------------------------------------------------------------- bidegree

@dataclass(frozen=True)
class DegreeInput:
    c1_sq: int
    chi_X: int
    sigma_X: int
    c1_sq_shifted: int
    chi_S: int


def _d(c1_sq: int, chi: int, sigma: int) -> int:
    num = c1_sq - 2 * chi - 3 * sigma
    if num % 4:
        raise ValueError(f"c1^2 - 2 chi - 3 sigma = {num} is not divisible by 4")
    return num // 4


def cobordism_bidegree(d: DegreeInput) -> Bigrading:
    return Bigrading(_d(d.c1_sq, d.chi_X, d.sigma_X),
                     _d(d.c1_sq_shifted, d.chi_X, d.sigma_X) - d.chi_S)


# ---------------------------------------------------------------- reference shapes

def _at(a: int, b: int) -> Bigrading:
    # M[[a, b]] puts the generator at (-a, -b)
    return Bigrading(-a, -b)


_SHAPES = {
    "unknot": [Free(_at(0, 0))],
    "hopf": [Free(_at(0, 2)), Torsion(_at(2, 0), 1)],
    "neg_hopf": [Free(_at(0, 0)), Torsion(_at(0, 0), 1)],
    "trefoil": [Free(_at(0, 2)), Torsion(_at(2, 0), 1)],
    "neg_trefoil": [Free(_at(0, 2)), Torsion(_at(-1, 1), 1)],
}


def fixture_shapes(name: str) -> ModuleDecomp:
    """Reference circ-flavor HF module shapes for small links."""
    try:
        return ModuleDecomp(_SHAPES[name])
    except KeyError:
        raise KeyError(f"unknown shape {name!r}; known: {', '.join(sorted(_SHAPES))}") from None


SHAPE_NAMES = tuple(sorted(_SHAPES))

__all__ = ["WordError", "Token", "WEIGHTS", "parse_word", "format_word", "check_brackets",
           "ScalarResult", "evaluate_word", "evaluate_text", "expand_compressions",
           "CompressionCheck", "compression_compare", "twist_chain_map", "TwistResult",
           "twist_endomorphism", "DegreeInput", "cobordism_bidegree", "fixture_shapes",
           "SHAPE_NAMES"]
