import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from floerkit.cells import (CellError, Deperturb, EdgeSwitch, Perturb,
                            SearchExhausted, apply_move, canonical_form, connect_by_switches,
                            connect_decorations, deperturb, deperturb_fully, edge_switch,
                            enumerate_deperturbed, fuss_catalan, is_self_switch, iso,
                            isomorphism, mirror, parse_cells, parse_moves, format_moves,
                            perturb, predicates, quad_dissections, quad_switch_graph,
                            random_move, relabel, replay, serialize_cells, validate_cells)

SPHERE = """
vertex p plus
vertex m minus
edge a p m
cell c : +a -a
"""

TORUS = """
vertex p plus
vertex m minus
edge a p m
edge b p m
edge c p m
cell h : +a -b +c -a +b -c
"""

SQUARE = """
vertex p plus
vertex m minus
vertex q plus
edge a p m
edge b q m
cell c : +a -b +b -a
"""

SMALL_CLASSES = [(0, 1, 1), (0, 2, 1), (0, 1, 2), (1, 1, 1), (1, 2, 1), (1, 1, 2)]


def sphere():
    return parse_cells(SPHERE)


def torus():
    return parse_cells(TORUS)


def _random_decomposition(rng, steps):
    D = torus() if rng.random() < 0.5 else parse_cells(SQUARE)
    for _ in range(steps):
        D = apply_move(D, random_move(D, rng))
    return D


# ---------------------------------------------------------------- validation

def test_sphere_and_torus():
    assert validate_cells(sphere()).genus == 0 and validate_cells(sphere()).ok
    assert validate_cells(torus()).genus == 1 and validate_cells(torus()).ok
    assert validate_cells(parse_cells(SQUARE)).genus == 0


def test_bipartite_violation():
    D = parse_cells("vertex p plus\nvertex q plus\nedge a p q\ncell c : +a -a\n")
    rep = validate_cells(D)
    assert not rep.ok and any("plus" in p or "color" in p for p in rep.problems)


@pytest.mark.parametrize("text", [
    "vertex p plus\nvertex m minus\nedge a p m\ncell c : +a +a\n",          # same direction twice
    "vertex p plus\nvertex m minus\nedge a p m\ncell c : +a\n",             # side missing
    "vertex p plus\nvertex m minus\nvertex x plus\nedge a p m\ncell c : +a -a\n",  # isolated vertex
    "vertex p plus\nvertex m minus\nedge a p m\nedge b p m\ncell c : +a -a\ncell d : +b -b\n",
])
def test_invalid_decompositions(text):
    assert not validate_cells(parse_cells(text)).ok


def test_predicates():
    assert predicates(torus()) == {"simple": True, "complete": False, "deperturbed": True}
    assert predicates(sphere())["simple"] is False
    assert predicates(parse_cells(SQUARE))["complete"] is True


def test_parse_errors():
    with pytest.raises(CellError):
        parse_cells("vertex p purple\n")
    with pytest.raises(CellError):
        parse_cells("cell c : a b\n")
    with pytest.raises(CellError):
        parse_cells("edge a\n")


def test_serialize_roundtrip(rng):
    for _ in range(20):
        D = _random_decomposition(rng, 6)
        assert parse_cells(serialize_cells(D)) == D


# ---------------------------------------------------------------- moves

def test_perturb_square_gives_bigon_and_square():
    D = parse_cells(SQUARE)
    E = perturb(D, ("a", 1), ("b", -1), "n")
    assert sorted(len(s) for _, s in E.cells) == [2, 4]
    assert validate_cells(E).genus == 0


def test_perturb_hexagon_gives_two_squares():
    D = torus()
    E = perturb(D, ("a", 1), ("a", -1), "n")
    assert sorted(len(s) for _, s in E.cells) == [4, 4]
    assert predicates(E)["complete"]
    assert validate_cells(E).genus == 1


def test_perturb_errors():
    D = torus()
    with pytest.raises(CellError):
        perturb(D, ("a", 1), ("c", 1))       # same color corners
    with pytest.raises(CellError):
        perturb(D, ("a", 1), ("a", 1))
    with pytest.raises(CellError):
        perturb(D, ("a", 1), ("a", -1), "b")  # name clash


def test_deperturb_inverse():
    D = torus()
    E = perturb(D, ("a", 1), ("a", -1), "n")
    assert iso(deperturb(E, "n"), D)


def test_deperturb_single_cell_error():
    with pytest.raises(CellError, match="both sides"):
        deperturb(torus(), "a")


def test_switch_in_two_squares_takes_other_diagonal():
    D = perturb(torus(), ("a", 1), ("a", -1), "n")
    # the union of the two squares is the hexagon; switch n to a different long diagonal
    E = edge_switch(D, "n", ("b", -1), ("b", 1), "n2")
    assert validate_cells(E).ok and predicates(E)["complete"]
    assert {e for e, _, _ in E.edges} == {"a", "b", "c", "n2"}
    back = edge_switch(E, "n2", ("a", 1), ("a", -1), "n")
    assert iso(back, D)


def test_switch_to_same_corners_is_iso():
    D = perturb(torus(), ("a", 1), ("a", -1), "n")
    E = edge_switch(D, "n", ("a", 1), ("a", -1), "n")
    assert iso(E, D)


def test_self_switch_on_torus():
    D = torus()
    assert is_self_switch(D, "a")
    seq = D.cells[0][1]
    pos = {d: k for k, d in enumerate(seq)}
    done = 0
    for i, j in itertools.combinations(range(6), 2):
        if (j - i) % 2 == 0:
            continue
        p1, p2 = pos[("a", 1)], pos[("a", -1)]
        separating = (i <= p1 < j) != (i <= p2 < j)
        if separating:
            E = edge_switch(D, "a", seq[i], seq[j])
            assert validate_cells(E).ok and predicates(E)["deperturbed"]
            assert E.genus == 1
            done += 1
        else:
            with pytest.raises(CellError, match="separate"):
                edge_switch(D, "a", seq[i], seq[j])
    assert done


def test_random_moves_sound(rng):
    for _ in range(30):
        D = _random_decomposition(rng, 0)
        g, counts = D.genus, D.vertex_counts()
        for _ in range(12):
            mv = random_move(D, rng)
            E = apply_move(D, mv)
            rep = validate_cells(E)
            assert rep.ok, rep.problems
            assert rep.genus == g and E.vertex_counts() == counts
            assert E.vertices == D.vertices
            if isinstance(mv, Perturb):
                assert (len(E.edges), len(E.cells)) == (len(D.edges) + 1, len(D.cells) + 1)
                assert iso(deperturb(E, mv.new_edge), D)
            elif isinstance(mv, Deperturb):
                assert (len(E.edges), len(E.cells)) == (len(D.edges) - 1, len(D.cells) - 1)
            else:
                assert (len(E.edges), len(E.cells)) == (len(D.edges), len(D.cells))
            D = E


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40)
def test_perturb_deperturb_roundtrip_property(seed):
    rng = random.Random(seed)
    D = _random_decomposition(rng, rng.randrange(5))
    _, seq = rng.choice(D.cells)
    col = D.color
    pairs = [(i, j) for i in range(len(seq)) for j in range(len(seq))
             if i != j and col[D.start(seq[i])] != col[D.start(seq[j])]]
    i, j = rng.choice(pairs)
    E = perturb(D, seq[i], seq[j], "zz")
    assert validate_cells(E).ok and E.genus == D.genus
    assert E.euler() == D.euler()
    assert iso(deperturb(E, "zz"), D)


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40)
def test_switch_twice_returns(seed):
    rng = random.Random(seed)
    D = _random_decomposition(rng, rng.randrange(5))
    e = rng.choice(D.edges)[0]
    p, m = D.ends[e]
    if is_self_switch(D, e):
        cands = [mv for mv in [random_move(D, rng) for _ in range(30)]
                 if isinstance(mv, EdgeSwitch) and mv.edge == e]
        if not cands:
            return
        mv = cands[0]
    else:
        mv = None
        for _ in range(30):
            x = random_move(D, rng)
            if isinstance(x, EdgeSwitch) and not is_self_switch(D, x.edge):
                mv = x
                break
        if mv is None:
            return
    # corners of the original edge, as darts surviving in the result
    E = edge_switch(D, mv.edge, mv.dart_a, mv.dart_b, "yy")
    assert validate_cells(E).ok
    # any dart starting at each old endpoint other than the edge itself
    # in the self case the corners may be named by darts of the switched edge itself
    keep = (lambda d: True) if is_self_switch(E, "yy") else (lambda d: d[0] != "yy")
    starts_p = [d for _, s in E.cells for d in s if E.start(d) == p and keep(d)]
    starts_m = [d for _, s in E.cells for d in s if E.start(d) == m and keep(d)]
    back = None
    for a in starts_p:
        for b in starts_m:
            try:
                cand = edge_switch(E, "yy", a, b, mv.edge)
            except CellError:
                continue
            if iso(cand, D):
                back = cand
                break
        if back:
            break
    assert back is not None


# ---------------------------------------------------------------- scripts

def test_move_script_roundtrip(rng):
    D = torus()
    moves = []
    for _ in range(8):
        mv = random_move(D, rng)
        moves.append(mv)
        D = apply_move(D, mv)
    assert parse_moves(format_moves(moves)) == moves
    assert replay(torus(), parse_moves(format_moves(moves))) == D


def test_parse_moves_errors():
    with pytest.raises(CellError, match="line 2"):
        parse_moves("deperturb a\nfrobnicate b\n")


def test_replay_rejects_illegal():
    with pytest.raises(CellError):
        replay(torus(), [Deperturb("a")])


# ---------------------------------------------------------------- isomorphism

def test_relabel_iso(rng):
    for _ in range(30):
        D = _random_decomposition(rng, 6)
        R = relabel(D, rng)
        assert iso(D, R)
        pi = isomorphism(D, R)
        # the dart map must respect cell successors, edges and colors
        nxt = lambda X: {d: s[(k + 1) % len(s)] for _, s in X.cells for k, d in enumerate(s)}
        n1, n2 = nxt(D), nxt(R)
        for d, e in pi.items():
            assert pi[n1[d]] == n2[e]
            assert pi[(d[0], -d[1])] == (e[0], -e[1])
            assert D.color[D.start(d)] == R.color[R.start(e)]


def test_non_iso_examples():
    assert not iso(sphere(), torus())
    assert isomorphism(sphere(), torus()) is None


def test_mirror_asymmetric_example():
    classes = enumerate_deperturbed(1, 2, 2)
    flags = [iso(D, mirror(D)) for D in classes]
    assert not all(flags) and any(flags)
    D = classes[flags.index(False)]
    assert validate_cells(mirror(D)).ok
    assert iso(mirror(mirror(D)), D)
    # mirror is an involution on classes and maps the class set to itself
    keys = {canonical_form(E) for E in classes}
    assert {canonical_form(mirror(E)) for E in classes} == keys


# ---------------------------------------------------------------- enumeration

def _oracle_count(genus, n_plus, n_minus):
    """Gluings of a 2E-gon counted up to color-preserving rotation, by brute force."""
    E = n_plus + n_minus + 2 * genus - 1
    L = 2 * E
    seen = set()
    count = 0
    for perm in itertools.permutations(range(1, L, 2)):
        mate = {}
        for k, j in enumerate(perm):
            mate[2 * k], mate[j] = j, 2 * k
        parent = list(range(L))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for i, j in mate.items():
            # side i runs corner i -> i+1; glued reversed to side j
            parent[find(i)] = find((j + 1) % L)
        roots = {find(c) for c in range(L)}
        plus = len({find(c) for c in range(0, L, 2)})
        if (plus, len(roots) - plus) != (n_plus, n_minus):
            continue
        key = tuple(perm)
        if key in seen:
            continue
        count += 1
        for r in range(0, L, 2):
            rot = {(i + r) % L: (j + r) % L for i, j in mate.items()}
            seen.add(tuple(rot[2 * k] for k in range(E)))
    return count


@pytest.mark.parametrize("g,a,b", SMALL_CLASSES + [(0, 2, 2), (1, 2, 2)])
def test_enumeration_counts_match_oracle(g, a, b):
    classes = enumerate_deperturbed(g, a, b)
    assert len(classes) == _oracle_count(g, a, b)
    for D in classes:
        assert validate_cells(D).genus == g and D.vertex_counts() == (a, b)
        assert predicates(D)["deperturbed"]


def test_enumeration_frozen_counts():
    # produced by the enumeration and cross-checked against the rotation oracle
    got = {k: len(enumerate_deperturbed(*k)) for k in SMALL_CLASSES + [(1, 2, 2)]}
    assert got == {(0, 1, 1): 1, (0, 2, 1): 1, (0, 1, 2): 1, (1, 1, 1): 1,
                   (1, 2, 1): 2, (1, 1, 2): 2, (1, 2, 2): 8}


def test_enumeration_bound():
    with pytest.raises(CellError):
        enumerate_deperturbed(3, 2, 2)


# ---------------------------------------------------------------- connectivity

def test_connect_same_is_empty():
    assert connect_by_switches(torus(), torus()) == []
    assert connect_decorations(torus(), torus()) == []


@pytest.mark.parametrize("g,a,b", SMALL_CLASSES)
def test_connect_all_pairs(g, a, b):
    classes = enumerate_deperturbed(g, a, b)
    for D1, D2 in itertools.permutations(classes, 2):
        path = connect_by_switches(D1, D2)
        assert path and all(isinstance(m, EdgeSwitch) for m in path)
        assert iso(replay(D1, path), D2)


def test_connect_precondition():
    with pytest.raises(CellError):
        connect_by_switches(torus(), sphere())
    with pytest.raises(CellError):
        connect_decorations(torus(), sphere())


def test_connect_search_exhausted():
    classes = enumerate_deperturbed(1, 2, 2)
    far = [(A, B) for A, B in itertools.combinations(classes, 2)
           if len(connect_by_switches(A, B)) >= 2]
    assert far
    A, B = far[0]
    with pytest.raises(SearchExhausted):
        connect_by_switches(A, B, bound=2)


def test_connect_one_perturbation():
    D = torus()
    E = perturb(D, ("a", 1), ("a", -1), "n")
    seq = connect_decorations(D, E)
    assert len(seq) == 1 and iso(replay(D, seq), E)


def test_connect_complete_tori():
    D = torus()
    comp = []
    for D0 in [D] + enumerate_deperturbed(1, 1, 1):
        seq = D0.cells[0][1]
        for i in range(6):
            for j in range(i + 3, i + 4):
                E = perturb(D0, seq[i], seq[j % 6], "n")
                if predicates(E)["complete"]:
                    comp.append(E)
    keys = {}
    for E in comp:
        keys.setdefault(canonical_form(E), E)
    reps = list(keys.values())
    assert reps
    for A, B in itertools.product(reps, reps):
        assert iso(replay(A, connect_decorations(A, B)), B)


def test_connect_decorations_random(rng):
    for _ in range(50):
        base = _random_decomposition(rng, 0)
        A, B = base, base
        for _ in range(rng.randrange(1, 7)):
            A = apply_move(A, random_move(A, rng))
        for _ in range(rng.randrange(1, 7)):
            B = apply_move(B, random_move(B, rng))
        B = relabel(B, rng)
        seq = connect_decorations(A, B)
        assert all(isinstance(m, (Perturb, Deperturb)) for m in seq)
        assert iso(replay(A, seq), B)


def test_deperturb_fully_undo(rng):
    for _ in range(20):
        D = _random_decomposition(rng, 8)
        core, moves, undo = deperturb_fully(D)
        assert len(core.cells) == 1
        assert replay(D, moves) == core
        X = core
        for mv in reversed(undo):
            X = apply_move(X, mv)
        assert iso(X, D)


# ---------------------------------------------------------------- quadrangulations

def _brute_quads(m):
    n = 2 * m
    chords = [(i, j) for i in range(n) for j in range(i + 3, n, 2) if not (i == 0 and j == n - 1)]

    def cross(a, b):
        (i, j), (k, l) = a, b
        return i < k < j < l or k < i < l < j
    return sum(1 for S in itertools.combinations(chords, m - 2)
               if not any(cross(a, b) for a, b in itertools.combinations(S, 2)))


@pytest.mark.parametrize("m,count", [(2, 1), (3, 3), (4, 12), (5, 55), (6, 273)])
def test_quad_counts(m, count):
    quads, adj, connected = quad_switch_graph(m)
    assert len(quads) == count == fuss_catalan(m) == _brute_quads(m)
    assert connected
    for i, nb in adj.items():
        for k in nb:
            assert i in adj[k]
            assert len(quads[i].diagonals ^ quads[k].diagonals) == 2


def test_quad_m7_and_bounds():
    assert len(quad_dissections(7)) == fuss_catalan(7) == 1428
    with pytest.raises(CellError):
        quad_dissections(8)
    with pytest.raises(CellError):
        quad_dissections(1)


def test_quad_m3_are_long_diagonals():
    assert sorted(sorted(q.diagonals) for q in quad_dissections(3)) == [[(0, 3)], [(1, 4)], [(2, 5)]]
