import pytest
from hypothesis import given, strategies as st

from floerkit.complex import (conjugate, dual, figure_eight, random_automorphism, tensor,
                              torus_knot, unknot)
from floerkit.homology import (CircPresentation, Free, ModuleDecomp, Slicer, Torsion, Window,
                               WindowError, chain_dims, circ_decompose, homology_table,
                               induced_action_rank, is_boundary)
from floerkit.poly import ONE, U, V, Bigrading, Flavor

import oracle
from strategies import staircases

FIXTURES = {
    "unknot": unknot,
    "figure_eight": figure_eight,
    "t23": lambda: torus_knot(2, 3),
    "t34": lambda: torus_knot(3, 4),
    "t25": lambda: torus_knot(2, 5),
    "fig8_dual": lambda: dual(figure_eight()),
}
FLAVORS = list(Flavor)
SMALL = Window(-12, 4, -12, 4)


def test_window_basics():
    W = Window(-3, 3, -3, 3)
    assert W.cells == 49
    assert W.interior(1) == Window(-2, 2, -2, 2)
    with pytest.raises(WindowError):
        Window(0, 1, 0, 1).interior(1)
    with pytest.raises(WindowError):
        Window(1, 0, 0, 0)
    with pytest.raises(WindowError):
        W.require(Bigrading(3, 0), 1)
    W.require(Bigrading(2, 0), 1)


def test_window_around_covers_generators():
    C = torus_knot(4, 5)
    W = Window.around(C)
    inner = W.interior(2)
    for g in C.gens:
        assert g.grading in inner
    with pytest.raises(WindowError):
        Window.around(C, cap=10)


def test_unknot_tables():
    W = SMALL
    t = homology_table(unknot(), "minus", W)
    inner = W.interior(1)
    expected = {D: 1 for D in inner.points() if D.gr_w <= 0 and D.gr_z <= 0
                and D.gr_w % 2 == 0 and D.gr_z % 2 == 0}
    assert dict(t) == expected
    assert dict(homology_table(unknot(), "minus", W)) == \
        {D: n for D, n in chain_dims(unknot(), "minus", W).items() if D in inner}
    assert dict(homology_table(unknot(), "hat", W)) == {Bigrading(0, 0): 1}


def test_trefoil_hat_chain_dims():
    C = torus_knot(2, 3)
    dims = chain_dims(C, "hat", SMALL)
    assert dict(dims) == {g.grading: 1 for g in C.gens}


def test_figure_eight_hat_total():
    assert homology_table(figure_eight(), "hat", Window.hull(figure_eight())).total() == 5


def test_trefoil_circ_shape():
    C = torus_knot(2, 3)
    dec = circ_decompose(C)
    assert dec == ModuleDecomp([Free(C.grading("x0")), Torsion(C.grading("x1"), 1)])
    W = Window.around(C)
    assert homology_table(C, "circ", W) == dec.hilbert(W.interior(1))


def test_circ_decompose_examples():
    # with u = 0 the box collapses to two v-torsion classes, at x0 and y0
    assert circ_decompose(figure_eight()) == ModuleDecomp(
        [Free((0, 0)), Torsion((-1, 1), 1), Torsion((0, 0), 1)])
    assert circ_decompose(unknot()) == ModuleDecomp([Free((0, 0))])


def test_actions():
    W = SMALL
    assert not induced_action_rank(figure_eight(), "minus", "phi", W)
    r = induced_action_rank(unknot(), "minus", "mul_v", W)
    inner = W.interior(2)
    supported = {D for D in inner.points() if D.gr_w <= 0 and D.gr_z <= 0
                 and D.gr_w % 2 == 0 and D.gr_z % 2 == 0}
    assert set(r) == supported and set(r.values()) == {1}
    C = torus_knot(2, 3)
    rv = induced_action_rank(C, "circ", "mul_v", W)
    assert rv.get(C.grading("x1"), 0) == 0
    assert rv.get(C.grading("x0"), 0) == 1


def test_is_boundary_examples():
    C = figure_eight()
    for f in FLAVORS:
        assert is_boundary(C, f, {})
        assert is_boundary(C, f, C.d({"y1": ONE}))
        assert is_boundary(C, f, C.d({"y1": U * V}))
    with pytest.raises(ValueError, match="not a cycle"):
        is_boundary(C, "minus", {"y1": ONE})


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("flavor", FLAVORS)
def test_homology_matches_dense_oracle(name, flavor):
    C = FIXTURES[name]()
    W = Window.hull(C)
    t = homology_table(C, flavor, W)
    for D in W.interior(1).points():
        assert t.get(D, 0) == oracle.homology_dim(C, flavor, D), D
        assert chain_dims(C, flavor, W).get(D, 0) == oracle.chain_dim(C, flavor, D)


@given(staircases(), st.sampled_from(FLAVORS))
def test_random_homology_matches_oracle(C, flavor):
    W = Window.hull(C, pad=2)
    t = homology_table(C, flavor, W)
    for D in W.interior(1).points():
        assert t.get(D, 0) == oracle.homology_dim(C, flavor, D)


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("flavor", FLAVORS)
def test_rank_nullity(name, flavor):
    C = FIXTURES[name]()
    sl = Slicer(C, flavor)
    W = Window.hull(C)
    for D in W.interior(1).points():
        n = sl.dim(D)
        z = len(sl.cycles(D))
        rk_out = len(set()) if n == 0 else oracle.rank(oracle._matrix(C, sl.flavor, tuple(D))[0], n)
        assert n == rk_out + z
        assert sl.homology_dim(D) == z - len(sl.boundaries(D))


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("flavor", [Flavor.HAT, Flavor.CIRC])
def test_euler_characteristic_per_diagonal(name, flavor):
    # d preserves gr_w - gr_z; hat and circ slices along a diagonal are finite
    C = FIXTURES[name]()
    W = Window.hull(C, pad=8)
    inner = W.interior(1)
    chain, hom = chain_dims(C, flavor, W), homology_table(C, flavor, W)
    diagonals = {D.gr_w - D.gr_z for D in chain}
    checked = 0
    for A in diagonals:
        pts = [D for D in chain if D.gr_w - D.gr_z == A]
        if not all(D in inner for D in pts):
            continue
        chi_c = sum((-1) ** (D.gr_w % 2) * chain[D] for D in pts)
        chi_h = sum((-1) ** (D.gr_w % 2) * n for D, n in hom.items() if D.gr_w - D.gr_z == A)
        assert chi_c == chi_h
        checked += 1
    assert checked


@pytest.mark.parametrize("name", FIXTURES)
def test_circ_hilbert_matches_table(name):
    C = FIXTURES[name]()
    W = Window.around(C)
    assert homology_table(C, "circ", W) == circ_decompose(C).hilbert(W.interior(1))


@given(staircases(), staircases(2, 2))
def test_circ_hilbert_matches_table_random(A, B):
    C = tensor(A, B)
    W = Window.hull(C, pad=3)
    assert homology_table(C, "circ", W) == circ_decompose(C).hilbert(W.interior(1))


@pytest.mark.parametrize("name", FIXTURES)
def test_base_change_invariance(name, rng):
    C = FIXTURES[name]()
    W = Window.hull(C)
    ref = {f: homology_table(C, f, W) for f in FLAVORS}
    ref_act = {op: induced_action_rank(C, "minus", op, W) for op in ("mul_u", "mul_v", "phi", "psi")}
    ref_dec = circ_decompose(C)
    for _ in range(20):
        C2 = conjugate(C, random_automorphism(C, rng))
        for f in FLAVORS:
            assert homology_table(C2, f, W) == ref[f]
        for op, t in ref_act.items():
            assert induced_action_rank(C2, "minus", op, W) == t
        assert circ_decompose(C2) == ref_dec


def test_kunneth_hat():
    pairs = [(torus_knot(2, 3), torus_knot(2, 3)), (figure_eight(), torus_knot(3, 4)),
             (torus_knot(2, 5), dual(torus_knot(2, 3)))]
    for A, B in pairs:
        hA = homology_table(A, "hat", Window.hull(A)).total()
        hB = homology_table(B, "hat", Window.hull(B)).total()
        T = tensor(A, B)
        assert homology_table(T, "hat", Window.hull(T)).total() == hA * hB


def test_circ_presentation_coords():
    C = figure_eight()
    pres = CircPresentation(C)
    for j, g in enumerate(pres.gens):
        c = pres.coords(g.vector)
        assert c == [1 if i == j else 0 for i in range(len(pres.gens))]
    with pytest.raises(ValueError):
        pres.coords({"y1": 1})


def test_module_hilbert_truncation():
    dec = ModuleDecomp([Free((0, 0)), Torsion((2, 0), 2)])
    h = dec.hilbert(Window(-2, 2, -4, 0))
    assert h == {Bigrading(0, 0): 1, Bigrading(0, -2): 1, Bigrading(0, -4): 1,
                 Bigrading(2, 0): 1, Bigrading(2, -2): 1}
