"""Bipartite polygonal cell decompositions of closed oriented surfaces.

An edge joins a plus vertex to a minus vertex.  Its two sides are darts
(edge, +1) and (edge, -1): the + dart runs plus -> minus, the - dart runs
minus -> plus.  A cell is the cyclic list of darts along its boundary, read
with the orientation of the surface, so every edge contributes one dart of
each sign in total.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

PLUS, MINUS = "plus", "minus"
Dart = Tuple[str, int]


class CellError(ValueError):
    """Invalid decomposition or illegal move."""


class SearchExhausted(RuntimeError):
    """The search bound was reached before the target was found."""


def dart_str(d: Dart) -> str:
    return ("+" if d[1] > 0 else "-") + d[0]


def parse_dart(s: str) -> Dart:
    s = s.strip()
    if len(s) < 2 or s[0] not in "+-":
        raise CellError(f"bad signed edge {s!r}")
    return (s[1:], 1 if s[0] == "+" else -1)


def opposite(d: Dart) -> Dart:
    return (d[0], -d[1])


@dataclass(frozen=True)
class CellDecomposition:
    vertices: Tuple[Tuple[str, str], ...]          # (name, color)
    edges: Tuple[Tuple[str, str, str], ...]        # (name, plus end, minus end)
    cells: Tuple[Tuple[str, Tuple[Dart, ...]], ...]

    # lookups are rebuilt on demand; the object itself stays immutable
    @property
    def color(self) -> Dict[str, str]:
        return dict(self.vertices)

    @property
    def ends(self) -> Dict[str, Tuple[str, str]]:
        return {e: (p, m) for e, p, m in self.edges}

    def start(self, d: Dart) -> str:
        p, m = self.ends[d[0]]
        return p if d[1] > 0 else m

    def end(self, d: Dart) -> str:
        p, m = self.ends[d[0]]
        return m if d[1] > 0 else p

    def cell_of(self) -> Dict[Dart, Tuple[int, int]]:
        """dart -> (cell index, position)."""
        out = {}
        for ci, (_, seq) in enumerate(self.cells):
            for k, d in enumerate(seq):
                out[d] = (ci, k)
        return out

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def vertex_counts(self) -> Tuple[int, int]:
        cols = [c for _, c in self.vertices]
        return cols.count(PLUS), cols.count(MINUS)

    def euler(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.cells)

    @property
    def genus(self) -> int:
        return (2 - self.euler()) // 2


# ---------------------------------------------------------------- validation

@dataclass
class CellReport:
    genus: Optional[int]
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def validate_cells(D: CellDecomposition) -> CellReport:
    probs: List[str] = []
    color: Dict[str, str] = {}
    for v, c in D.vertices:
        if v in color:
            probs.append(f"duplicate vertex {v}")
        if c not in (PLUS, MINUS):
            probs.append(f"vertex {v} has unknown color {c!r}")
        color[v] = c
    ends: Dict[str, Tuple[str, str]] = {}
    for e, p, m in D.edges:
        if e in ends:
            probs.append(f"duplicate edge {e}")
        for v in (p, m):
            if v not in color:
                probs.append(f"edge {e} uses unknown vertex {v}")
        if color.get(p) != PLUS or color.get(m) != MINUS:
            probs.append(f"edge {e} must join a plus vertex to a minus vertex "
                         f"(got {p}:{color.get(p)}, {m}:{color.get(m)})")
        ends[e] = (p, m)
    if not D.edges:
        probs.append("no edges")
    if probs:
        return CellReport(None, probs)

    seen: Dict[Dart, str] = {}
    names = set()
    for name, seq in D.cells:
        if name in names:
            probs.append(f"duplicate cell {name}")
        names.add(name)
        if not seq:
            probs.append(f"cell {name} is empty")
            continue
        if len(seq) % 2:
            probs.append(f"cell {name} has odd length {len(seq)}")
        for d in seq:
            if d[0] not in ends:
                probs.append(f"cell {name} uses unknown edge {d[0]}")
            elif d in seen:
                probs.append(f"side {dart_str(d)} appears twice (cells {seen[d]} and {name}); "
                             "cells are not consistently oriented")
            else:
                seen[d] = name
    if probs:
        return CellReport(None, probs)
    for e in ends:
        for s in (1, -1):
            if (e, s) not in seen:
                probs.append(f"side {dart_str((e, s))} of edge {e} is on no cell")
    for name, seq in D.cells:
        for k, d in enumerate(seq):
            nxt = seq[(k + 1) % len(seq)]
            if D.end(d) != D.start(nxt):
                probs.append(f"cell {name}: {dart_str(d)} ends at {D.end(d)} "
                             f"but {dart_str(nxt)} starts at {D.start(nxt)}")
    if probs:
        return CellReport(None, probs)

    # vertex rotations: sigma = phi after alpha must have one cycle per vertex
    nxt = {}
    for _, seq in D.cells:
        for k, d in enumerate(seq):
            nxt[d] = seq[(k + 1) % len(seq)]
    done = set()
    cycles_at: Dict[str, int] = {}
    for d in nxt:
        if d in done:
            continue
        v = D.start(d)
        x = d
        while x not in done:
            done.add(x)
            x = nxt[opposite(x)]
        cycles_at[v] = cycles_at.get(v, 0) + 1
    for v in color:
        k = cycles_at.get(v, 0)
        if k == 0:
            probs.append(f"vertex {v} is isolated")
        elif k > 1:
            probs.append(f"vertex {v} is pinched ({k} corner cycles)")

    # connectivity through shared edges
    cell_idx = {d: ci for ci, (_, seq) in enumerate(D.cells) for d in seq}
    reach = {0}
    todo = [0]
    while todo:
        ci = todo.pop()
        for d in D.cells[ci][1]:
            cj = cell_idx[opposite(d)]
            if cj not in reach:
                reach.add(cj)
                todo.append(cj)
    if len(reach) != len(D.cells):
        probs.append("surface is not connected")
    chi = D.euler()
    if chi % 2 or chi > 2:
        probs.append(f"Euler characteristic {chi} is not of a closed orientable surface")
    return CellReport(None if probs else (2 - chi) // 2, probs)


def check(D: CellDecomposition) -> CellDecomposition:
    rep = validate_cells(D)
    if not rep.ok:
        raise CellError("; ".join(rep.problems))
    return D


def predicates(D: CellDecomposition) -> Dict[str, bool]:
    lens = [len(seq) for _, seq in D.cells]
    return {"simple": all(n != 2 for n in lens),
            "complete": all(n == 4 for n in lens),
            "deperturbed": len(lens) == 1}


# ---------------------------------------------------------------- moves

def _fresh(prefix: str, used: Iterable[str]) -> str:
    used = set(used)
    k = 0
    while f"{prefix}{k}" in used:
        k += 1
    return f"{prefix}{k}"


def _rotate(seq: Sequence[Dart], k: int) -> Tuple[Dart, ...]:
    return tuple(seq[k:]) + tuple(seq[:k])


def perturb(D: CellDecomposition, dart_a: Dart, dart_b: Dart,
            new_edge: Optional[str] = None, new_cell: Optional[str] = None) -> CellDecomposition:
    """Add an edge across one cell between the corners where dart_a and dart_b start."""
    where = D.cell_of()
    if dart_a not in where or dart_b not in where:
        raise CellError("corner darts are not on the decomposition")
    ci, ka = where[dart_a]
    cj, kb = where[dart_b]
    if ci != cj:
        raise CellError(f"corners {dart_str(dart_a)} and {dart_str(dart_b)} lie on different cells")
    if ka == kb:
        raise CellError("corners coincide (would create a 0-gon)")
    va, vb = D.start(dart_a), D.start(dart_b)
    col = D.color
    if col[va] == col[vb]:
        raise CellError(f"corners {va} and {vb} have the same color")
    name = new_edge or _fresh("e", (e for e, _, _ in D.edges))
    if name in D.ends:
        raise CellError(f"edge name {name} already used")
    seq = _rotate(D.cells[ci][1], ka)
    j = (kb - ka) % len(seq)
    # new dart from vb to va closes the first piece, its opposite closes the second
    sgn = 1 if col[vb] == PLUS else -1
    first = seq[:j] + ((name, sgn),)
    second = seq[j:] + ((name, -sgn),)
    cname = new_cell or _fresh("c", (c for c, _ in D.cells))
    cells = list(D.cells)
    cells[ci] = (D.cells[ci][0], first)
    cells.insert(ci + 1, (cname, second))
    p, m = (va, vb) if col[va] == PLUS else (vb, va)
    return CellDecomposition(D.vertices, D.edges + ((name, p, m),), tuple(cells))


def _merge_sequences(D: CellDecomposition, edge: str) -> Tuple[int, int, Tuple[Dart, ...]]:
    where = D.cell_of()
    d, d2 = (edge, 1), (edge, -1)
    if d not in where:
        raise CellError(f"unknown edge {edge}")
    ca, ka = where[d]
    cb, kb = where[d2]
    if ca == cb:
        raise CellError(f"both sides of {edge} lie on cell {D.cells[ca][0]}; deperturbation "
                        "would not merge two polygons")
    A = _rotate(D.cells[ca][1], (ka + 1) % len(D.cells[ca][1]))[:-1]
    B = _rotate(D.cells[cb][1], (kb + 1) % len(D.cells[cb][1]))[:-1]
    return ca, cb, A + B


def deperturb(D: CellDecomposition, edge: str) -> CellDecomposition:
    ca, cb, merged = _merge_sequences(D, edge)
    cells = list(D.cells)
    cells[ca] = (D.cells[ca][0], merged)
    del cells[cb]
    return CellDecomposition(D.vertices, tuple(x for x in D.edges if x[0] != edge), tuple(cells))


def _rename_edge(D: CellDecomposition, old: str, new: str) -> CellDecomposition:
    edges = tuple((new if e == old else e, p, m) for e, p, m in D.edges)
    cells = tuple((c, tuple((new if x == old else x, s) for x, s in seq)) for c, seq in D.cells)
    return CellDecomposition(D.vertices, edges, cells)


def is_self_switch(D: CellDecomposition, edge: str) -> bool:
    where = D.cell_of()
    return where[(edge, 1)][0] == where[(edge, -1)][0]


def edge_switch(D: CellDecomposition, edge: str, dart_a: Dart, dart_b: Dart,
                new_edge: Optional[str] = None) -> CellDecomposition:
    """Remove ``edge`` and add a new edge between two corners of the merged polygon.

    If both sides of ``edge`` are on one cell, the new edge is drawn in that cell
    and must separate the two sides; the order is then perturb before deperturb."""
    name = new_edge or edge
    if (edge, 1) not in D.cell_of():
        raise CellError(f"unknown edge {edge}")
    if is_self_switch(D, edge):
        tmp = _fresh("tmp", (e for e, _, _ in D.edges))
        E1 = perturb(D, dart_a, dart_b, tmp)
        where = E1.cell_of()
        if where[(edge, 1)][0] == where[(edge, -1)][0]:
            raise CellError("new edge does not separate the two sides of the switched edge")
        E2 = deperturb(E1, edge)
        if name != tmp:
            if name in E2.ends:
                raise CellError(f"edge name {name} already used")
            E2 = _rename_edge(E2, tmp, name)
        return E2
    if edge in (dart_a[0], dart_b[0]):
        raise CellError("corners must be given by darts that survive removing the edge")
    E1 = deperturb(D, edge)
    return perturb(E1, dart_a, dart_b, name)


# ---------------------------------------------------------------- move scripts

@dataclass(frozen=True)
class Perturb:
    dart_a: Dart
    dart_b: Dart
    new_edge: str

    def __str__(self) -> str:
        return f"perturb {dart_str(self.dart_a)} {dart_str(self.dart_b)} {self.new_edge}"


@dataclass(frozen=True)
class Deperturb:
    edge: str

    def __str__(self) -> str:
        return f"deperturb {self.edge}"


@dataclass(frozen=True)
class EdgeSwitch:
    edge: str
    dart_a: Dart
    dart_b: Dart
    new_edge: str

    def __str__(self) -> str:
        return f"switch {self.edge} {dart_str(self.dart_a)} {dart_str(self.dart_b)} {self.new_edge}"


Move = Union[Perturb, Deperturb, EdgeSwitch]


def apply_move(D: CellDecomposition, mv: Move) -> CellDecomposition:
    if isinstance(mv, Perturb):
        return perturb(D, mv.dart_a, mv.dart_b, mv.new_edge)
    if isinstance(mv, Deperturb):
        return deperturb(D, mv.edge)
    if isinstance(mv, EdgeSwitch):
        return edge_switch(D, mv.edge, mv.dart_a, mv.dart_b, mv.new_edge)
    raise TypeError(f"not a move: {mv!r}")


def replay(D: CellDecomposition, moves: Sequence[Move], validate: bool = True) -> CellDecomposition:
    g = D.genus
    for mv in moves:
        D = apply_move(D, mv)
        if validate:
            rep = validate_cells(D)
            if not rep.ok or rep.genus != g:
                raise CellError(f"move {mv} produced an invalid decomposition: {rep.problems}")
    return D


def format_moves(moves: Sequence[Move]) -> str:
    return "".join(str(m) + "\n" for m in moves)


def parse_moves(text: str) -> List[Move]:
    out: List[Move] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        t = line.split()
        try:
            if t[0] == "perturb" and len(t) == 4:
                out.append(Perturb(parse_dart(t[1]), parse_dart(t[2]), t[3]))
            elif t[0] == "deperturb" and len(t) == 2:
                out.append(Deperturb(t[1]))
            elif t[0] == "switch" and len(t) == 5:
                out.append(EdgeSwitch(t[1], parse_dart(t[2]), parse_dart(t[3]), t[4]))
            else:
                raise CellError(f"unknown move {line!r}")
        except CellError as e:
            raise CellError(f"line {lineno}: {e}") from None
    return out


# ---------------------------------------------------------------- text format

def parse_cells(text: str) -> CellDecomposition:
    verts, edges, cells = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        t = line.split()
        if t[0] == "vertex" and len(t) == 3:
            if t[2] not in (PLUS, MINUS):
                raise CellError(f"line {lineno}: color must be plus or minus")
            verts.append((t[1], t[2]))
        elif t[0] == "edge" and len(t) == 4:
            edges.append((t[1], t[2], t[3]))
        elif t[0] == "cell" and len(t) >= 3 and t[2] == ":":
            try:
                cells.append((t[1], tuple(parse_dart(s) for s in t[3:])))
            except CellError as e:
                raise CellError(f"line {lineno}: {e}") from None
        else:
            raise CellError(f"line {lineno}: cannot parse {line!r}")
    return CellDecomposition(tuple(verts), tuple(edges), tuple(cells))


def serialize_cells(D: CellDecomposition) -> str:
    lines = [f"vertex {v} {c}" for v, c in D.vertices]
    lines += [f"edge {e} {p} {m}" for e, p, m in D.edges]
    lines += [f"cell {c} : " + " ".join(dart_str(d) for d in seq) for c, seq in D.cells]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- isomorphism

def _labeling(D: CellDecomposition, start: Dart, nxt: Dict[Dart, Dart],
              col: Dict[str, str]) -> Tuple[tuple, List[Dart]]:
    label = {start: 0}
    order = [start]
    code = []
    i = 0
    while i < len(order):
        x = order[i]
        row = []
        for y in (nxt[x], opposite(x)):
            if y not in label:
                label[y] = len(order)
                order.append(y)
            row.append(label[y])
        row.append(0 if col[D.start(x)] == PLUS else 1)
        code.append(tuple(row))
        i += 1
    return tuple(code), order


def _best(D: CellDecomposition) -> Tuple[tuple, List[Dart]]:
    nxt = {}
    for _, seq in D.cells:
        for k, d in enumerate(seq):
            nxt[d] = seq[(k + 1) % len(seq)]
    col = D.color
    best = None
    for d in sorted(nxt):
        code, order = _labeling(D, d, nxt, col)
        if best is None or code < best[0]:
            best = (code, order)
    return best


def canonical_form(D: CellDecomposition) -> tuple:
    """Invariant of colored oriented maps: minimal traversal code over start darts."""
    return _best(D)[0]


def iso(D1: CellDecomposition, D2: CellDecomposition) -> bool:
    return canonical_form(D1) == canonical_form(D2)


def isomorphism(D1: CellDecomposition, D2: CellDecomposition) -> Optional[Dict[Dart, Dart]]:
    """Dart bijection D1 -> D2 respecting cells, edges, colors and orientation."""
    c1, o1 = _best(D1)
    c2, o2 = _best(D2)
    if c1 != c2:
        return None
    return dict(zip(o1, o2))


def mirror(D: CellDecomposition) -> CellDecomposition:
    cells = tuple((c, tuple(opposite(d) for d in reversed(seq))) for c, seq in D.cells)
    return CellDecomposition(D.vertices, D.edges, cells)


def relabel(D: CellDecomposition, rng: random.Random) -> CellDecomposition:
    """Random renaming of vertices, edges and cells plus random cell rotations/order."""
    vn = {v: f"V{i}" for i, (v, _) in enumerate(rng.sample(list(D.vertices), len(D.vertices)))}
    en = {e: f"E{i}" for i, (e, _, _) in enumerate(rng.sample(list(D.edges), len(D.edges)))}
    verts = tuple((vn[v], c) for v, c in rng.sample(list(D.vertices), len(D.vertices)))
    edges = tuple((en[e], vn[p], vn[m]) for e, p, m in rng.sample(list(D.edges), len(D.edges)))
    cells = []
    for i, (c, seq) in enumerate(rng.sample(list(D.cells), len(D.cells))):
        seq = _rotate(seq, rng.randrange(len(seq)))
        cells.append((f"F{i}", tuple((en[e], s) for e, s in seq)))
    return CellDecomposition(verts, edges, tuple(cells))


# ---------------------------------------------------------------- enumeration

MAX_ENUM_EDGES = 8


def polygon_decomposition(pairing: Sequence[int], n_edges: int) -> Tuple[CellDecomposition, int, int]:
    """One-cell decomposition from a 2E-gon whose side 2j is glued to side pairing[j].

    Corner k is plus for even k.  Returns the decomposition and its vertex counts."""
    L = 2 * n_edges
    parent = list(range(L))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j in range(n_edges):
        k, l = 2 * j, pairing[j]
        for a, b in ((k, (l + 1) % L), ((k + 1) % L, l)):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    names: Dict[int, str] = {}
    verts = []
    np_ = nm = 0
    for k in range(L):
        r = find(k)
        if r not in names:
            if k % 2 == 0:
                names[r] = f"p{np_}"
                np_ += 1
                verts.append((names[r], PLUS))
            else:
                names[r] = f"m{nm}"
                nm += 1
                verts.append((names[r], MINUS))
    edges = []
    seq: List[Optional[Dart]] = [None] * L
    for j in range(n_edges):
        k, l = 2 * j, pairing[j]
        e = f"e{j}"
        edges.append((e, names[find(k)], names[find(k + 1)]))
        seq[k] = (e, 1)
        seq[l] = (e, -1)
    D = CellDecomposition(tuple(verts), tuple(edges), (("c0", tuple(seq)),))
    return D, np_, nm


def enumerate_deperturbed(genus: int, n_plus: int, n_minus: int) -> List[CellDecomposition]:
    """All one-cell decompositions with the given genus and vertex counts, up to iso."""
    if genus < 0 or n_plus < 1 or n_minus < 1:
        raise CellError("need genus >= 0 and at least one vertex of each color")
    E = n_plus + n_minus + 2 * genus - 1
    if E > MAX_ENUM_EDGES:
        raise CellError(f"{E} edges exceeds the enumeration bound {MAX_ENUM_EDGES}")
    odd = [2 * j + 1 for j in range(E)]
    found: Dict[tuple, CellDecomposition] = {}
    for perm in itertools.permutations(odd):
        D, a, b = polygon_decomposition(perm, E)
        if (a, b) != (n_plus, n_minus):
            continue
        key = canonical_form(D)
        if key not in found:
            found[key] = D
    return [found[k] for k in sorted(found)]


# ---------------------------------------------------------------- connectivity

def _self_switches(D: CellDecomposition) -> Iterable[EdgeSwitch]:
    """All edge switches of a one-cell decomposition."""
    (_, seq), = D.cells
    L = len(seq)
    pos = {d: k for k, d in enumerate(seq)}
    for e, _, _ in D.edges:
        p1, p2 = pos[(e, 1)], pos[(e, -1)]
        for i in range(L):
            for j in range(i + 1, L, 2):
                if (i <= p1 < j) != (i <= p2 < j):
                    yield EdgeSwitch(e, seq[i], seq[j], e)


def connect_by_switches(D1: CellDecomposition, D2: CellDecomposition,
                        bound: int = 10 ** 5) -> List[EdgeSwitch]:
    for D in (D1, D2):
        check(D)
        if len(D.cells) != 1:
            raise CellError("connect_by_switches needs deperturbed decompositions")
    if D1.vertex_counts() != D2.vertex_counts() or D1.genus != D2.genus:
        raise CellError("decompositions differ in genus or colored vertex counts")
    target = canonical_form(D2)
    start = canonical_form(D1)
    if start == target:
        return []
    parent: Dict[tuple, Tuple[Optional[tuple], Optional[EdgeSwitch]]] = {start: (None, None)}
    rep = {start: D1}
    queue = deque([start])
    found = None
    while queue and found is None:
        key = queue.popleft()
        D = rep[key]
        for mv in _self_switches(D):
            E = edge_switch(D, mv.edge, mv.dart_a, mv.dart_b, mv.new_edge)
            k2 = canonical_form(E)
            if k2 in parent:
                continue
            parent[k2] = (key, mv)
            rep[k2] = E
            if k2 == target:
                found = k2
                break
            if len(parent) >= bound:
                raise SearchExhausted(f"search bound {bound} reached after {len(parent)} states")
            queue.append(k2)
    if found is None:
        raise SearchExhausted(f"edge-switch component exhausted after {len(parent)} states "
                              "without reaching the target")
    path: List[EdgeSwitch] = []
    k = found
    while parent[k][0] is not None:
        path.append(parent[k][1])
        k = parent[k][0]
    path.reverse()
    end = replay(D1, path)
    if not iso(end, D2):
        raise AssertionError("replayed switch sequence does not reach the target")
    return path


def deperturb_fully(D: CellDecomposition) -> Tuple[CellDecomposition, List[Deperturb], List[Perturb]]:
    """Deperturb until one cell remains.  Also returns, for each step, the
    perturbation undoing it (expressed on the smaller decomposition)."""
    moves, undo = [], []
    while len(D.cells) > 1:
        where = D.cell_of()
        for e, _, _ in D.edges:
            if where[(e, 1)][0] != where[(e, -1)][0]:
                break
        ca, cb, merged = _merge_sequences(D, e)
        lenA = len(D.cells[ca][1]) - 1
        undo.append(Perturb(merged[0], merged[lenA], e))
        moves.append(Deperturb(e))
        D = deperturb(D, e)
    return D, moves, undo


def _one_move_neighbors(D: CellDecomposition) -> Iterable[Move]:
    for e, _, _ in D.edges:
        if not is_self_switch(D, e):
            yield Deperturb(e)
    col = D.color
    name = _fresh("e", (e for e, _, _ in D.edges))
    for _, seq in D.cells:
        for i in range(len(seq)):
            for j in range(i + 1, len(seq), 2):
                if col[D.start(seq[i])] != col[D.start(seq[j])]:
                    yield Perturb(seq[i], seq[j], name)


def connect_decorations(D1: CellDecomposition, D2: CellDecomposition,
                        bound: int = 10 ** 5) -> List[Move]:
    """Perturbations and deperturbations leading from D1 to a decomposition iso to D2."""
    check(D1)
    check(D2)
    if D1.vertex_counts() != D2.vertex_counts() or D1.genus != D2.genus:
        raise CellError("decompositions differ in genus or colored vertex counts")
    target = canonical_form(D2)
    if canonical_form(D1) == target:
        return []
    for mv in _one_move_neighbors(D1):
        if canonical_form(apply_move(D1, mv)) == target:
            return [mv]

    core1, moves1, _ = deperturb_fully(D1)
    core2, _, undo2 = deperturb_fully(D2)
    switches = connect_by_switches(core1, core2, bound)

    seq: List[Move] = list(moves1)
    X = core1
    ren: Dict[str, str] = {}

    def tr(d: Dart) -> Dart:
        return (ren.get(d[0], d[0]), d[1])

    used = {e for e, _, _ in D1.edges} | {e for e, _, _ in D2.edges}
    for sw in switches:
        fresh = _fresh("s", used)
        used.add(fresh)
        actual_edge = ren.get(sw.edge, sw.edge)
        if is_self_switch(X, actual_edge):
            steps = [Perturb(tr(sw.dart_a), tr(sw.dart_b), fresh), Deperturb(actual_edge)]
        else:
            steps = [Deperturb(actual_edge), Perturb(tr(sw.dart_a), tr(sw.dart_b), fresh)]
        for st in steps:
            X = apply_move(X, st)
        seq.extend(steps)
        ren[sw.new_edge] = fresh

    pi = isomorphism(core2, X)
    if pi is None:
        raise AssertionError("switch path did not reach the second core")
    for mv in reversed(undo2):
        fresh = _fresh("r", used)
        used.add(fresh)
        st = Perturb(pi[mv.dart_a], pi[mv.dart_b], fresh)
        X = apply_move(X, st)
        seq.append(st)
        pi[(mv.new_edge, 1)] = (fresh, 1)
        pi[(mv.new_edge, -1)] = (fresh, -1)

    end = replay(D1, seq)
    if not iso(end, D2):
        raise AssertionError("replayed move sequence does not reach the target")
    return seq


def random_move(D: CellDecomposition, rng: random.Random, p_perturb: float = 0.5) -> Move:
    """A uniformly chosen legal move of a random kind."""
    col = D.color
    name = _fresh("n", (e for e, _, _ in D.edges))
    deps = [Deperturb(e) for e, _, _ in D.edges if not is_self_switch(D, e)]
    if deps and rng.random() > p_perturb:
        return rng.choice(deps)
    if rng.random() < 0.3:
        e = rng.choice(D.edges)[0]
        if is_self_switch(D, e):
            opts = [mv for mv in _self_switches_one(D, e)]
        else:
            merged = _merge_sequences(D, e)[2]
            opts = [EdgeSwitch(e, merged[i], merged[j], e)
                    for i in range(len(merged)) for j in range(i + 1, len(merged), 2)
                    if col[D.start(merged[i])] != col[D.start(merged[j])]]
        if opts:
            return rng.choice(opts)
    _, seq = rng.choice(D.cells)
    pairs = [(i, j) for i in range(len(seq)) for j in range(i + 1, len(seq), 2)]
    i, j = rng.choice(pairs)
    return Perturb(seq[i], seq[j], name)


def _self_switches_one(D: CellDecomposition, e: str) -> List[EdgeSwitch]:
    where = D.cell_of()
    ci, p1 = where[(e, 1)]
    _, p2 = where[(e, -1)]
    seq = D.cells[ci][1]
    out = []
    for i in range(len(seq)):
        for j in range(i + 1, len(seq), 2):
            if (i <= p1 < j) != (i <= p2 < j):
                out.append(EdgeSwitch(e, seq[i], seq[j], e))
    return out


# ---------------------------------------------------------------- quadrangulations

@dataclass(frozen=True)
class Rectangulation:
    m: int
    diagonals: FrozenSet[Tuple[int, int]]


def _crosses(a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    (i, j), (k, l) = a, b
    return (i < k < j < l) or (k < i < l < j)


def quad_dissections(m: int) -> List[Rectangulation]:
    """Quadrangulations of the alternating 2m-gon by m-2 noncrossing diagonals."""
    if not 2 <= m <= 7:
        raise CellError("quad_dissections supports 2 <= m <= 7")

    def rec(poly: Tuple[int, ...]) -> List[FrozenSet[Tuple[int, int]]]:
        n = len(poly)
        if n == 2:
            return [frozenset()]
        out = []
        # the side (poly[0], poly[-1]) lies in a quadrilateral poly[0], poly[a], poly[b], poly[-1]
        for a in range(1, n - 2, 2):
            for b in range(a + 1, n - 1, 2):
                parts = (poly[:a + 1], poly[a:b + 1], poly[b:])
                new = set()
                for part in parts:
                    if len(part) > 2:
                        new.add((min(part[0], part[-1]), max(part[0], part[-1])))
                for x in rec(parts[0]):
                    for y in rec(parts[1]):
                        for z in rec(parts[2]):
                            out.append(frozenset(new) | x | y | z)
        return out

    found = sorted(set(rec(tuple(range(2 * m)))), key=lambda s: sorted(s))
    return [Rectangulation(m, d) for d in found]


def fuss_catalan(m: int) -> int:
    """Number of quadrangulations of a 2m-gon, C(3k, k)/(2k+1) with k = m-1."""
    k = m - 1
    return comb(3 * k, k) // (2 * k + 1)


def quad_switch_graph(m: int) -> Tuple[List[Rectangulation], Dict[int, List[int]], bool]:
    quads = quad_dissections(m)
    index = {q.diagonals: i for i, q in enumerate(quads)}
    n = 2 * m
    candidates = [(i, j) for i in range(n) for j in range(i + 3, n, 2) if not (i == 0 and j == n - 1)]
    adj: Dict[int, List[int]] = {i: [] for i in range(len(quads))}
    for i, q in enumerate(quads):
        for dgl in q.diagonals:
            rest = q.diagonals - {dgl}
            for c in candidates:
                if c in q.diagonals or any(_crosses(c, r) for r in rest):
                    continue
                k = index.get(rest | {c})
                if k is not None and k not in adj[i]:
                    adj[i].append(k)
    seen = {0} if quads else set()
    todo = [0] if quads else []
    while todo:
        x = todo.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return quads, adj, len(seen) == len(quads)


__all__ = [
    "PLUS", "MINUS", "Dart", "CellError", "SearchExhausted", "CellDecomposition", "CellReport",
    "validate_cells", "check", "predicates", "perturb", "deperturb", "edge_switch",
    "is_self_switch", "Perturb", "Deperturb", "EdgeSwitch", "Move", "apply_move", "replay",
    "format_moves", "parse_moves", "parse_cells", "serialize_cells", "canonical_form", "iso",
    "isomorphism", "mirror", "relabel", "enumerate_deperturbed", "polygon_decomposition",
    "connect_by_switches", "deperturb_fully", "connect_decorations", "random_move",
    "Rectangulation", "quad_dissections", "fuss_catalan", "quad_switch_graph", "dart_str",
    "parse_dart", "opposite",
]
