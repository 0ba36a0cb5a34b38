"""Independent dense-matrix homology over F2, used only by the tests.

Slices are rebuilt from scratch: at bidegree D the basis is every pair
(generator x, u^a v^b) with gr(x) - (2a, 2b) = D, filtered by flavor.
"""

from floerkit.poly import Flavor, Poly


def _slice(C, flavor, D):
    out = []
    for g in C.gens:
        dw, dz = g.grading.gr_w - D[0], g.grading.gr_z - D[1]
        if dw < 0 or dz < 0 or dw % 2 or dz % 2:
            continue
        a, b = dw // 2, dz // 2
        if flavor == Flavor.CIRC and a:
            continue
        if flavor == Flavor.HAT and (a or b):
            continue
        out.append((g.name, a, b))
    return out


def _matrix(C, flavor, D, entries=None, degree=(-1, -1)):
    entries = C.diff if entries is None else entries
    src = _slice(C, flavor, D)
    tgt = _slice(C, flavor, (D[0] + degree[0], D[1] + degree[1]))
    idx = {t: i for i, t in enumerate(tgt)}
    M = [[0] * len(src) for _ in tgt]
    for j, (x, a, b) in enumerate(src):
        for y, p in entries.get(x, {}).items():
            for (c, e) in p.terms:
                key = (y, a + c, b + e)
                if key in idx:
                    M[idx[key]][j] ^= 1
    return M, len(src), len(tgt)


def rank(M, ncols):
    M = [row[:] for row in M]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(len(M)):
            if i != r and M[i][c]:
                M[i] = [x ^ y for x, y in zip(M[i], M[r])]
        r += 1
    return r


def chain_dim(C, flavor, D):
    return len(_slice(C, Flavor.parse(flavor), tuple(D)))


def homology_dim(C, flavor, D):
    f = Flavor.parse(flavor)
    D = tuple(D)
    out, n, _ = _matrix(C, f, D)
    inn, m, _ = _matrix(C, f, (D[0] + 1, D[1] + 1))
    return n - rank(out, n) - rank(inn, m)


def columns(M, ncols):
    return [[row[j] for row in M] for j in range(ncols)]


def nullspace(M, ncols):
    """Basis of {x : Mx = 0}, as column vectors."""
    rows = [row[:] for row in M]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [x ^ y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    out = []
    for f in range(ncols):
        if f in pivots:
            continue
        x = [0] * ncols
        x[f] = 1
        for i, c in enumerate(pivots):
            x[c] = rows[i][f]
        out.append(x)
    return out


def span_rank(vectors, n):
    return rank([list(r) for r in zip(*vectors)], len(vectors)) if vectors and n else 0


def _apply(M, x):
    return [sum(a & b for a, b in zip(row, x)) % 2 for row in M]


def _phi_entries(C):
    # d/du of each coefficient, computed independently of floerkit
    out = {}
    for x, col in C.diff.items():
        for y, p in col.items():
            terms = [(a - 1, b) for (a, b) in p.terms if a % 2]
            if terms:
                out.setdefault(x, {})[y] = Poly(terms)
    return out


def hf_dims(C, flavor, D):
    """(dim hf, dim hf_w) at D for the single-pair model of C."""
    f = Flavor.parse(flavor)
    D = tuple(D)
    dout, n, _ = _matrix(C, f, D)
    Z = nullspace(dout, n)
    din, m, _ = _matrix(C, f, (D[0] + 1, D[1] + 1))
    B = columns(din, m)
    rb = span_rank(B, n)
    P, _, k = _matrix(C, f, D, _phi_entries(C), (1, -1))
    tgt = (D[0] + 1, D[1] - 1)
    dB, mb, _ = _matrix(C, f, (tgt[0] + 1, tgt[1] + 1))
    Bt = columns(dB, mb)
    # kernel of Z -> C(tgt)/B(tgt): solve [PZ | Bt] c = 0, keep the Z part
    stacked = [_apply(P, z) for z in Z] + Bt
    if k and stacked:
        A = [list(r) for r in zip(*stacked)]
        sols = nullspace(A, len(stacked))
    else:
        sols = [[1 if i == j else 0 for i in range(len(stacked))] for j in range(len(stacked))]
    K = []
    for c in sols:
        v = [0] * n
        for coef, z in zip(c[:len(Z)], Z):
            if coef:
                v = [a ^ b for a, b in zip(v, z)]
        K.append(v)
    K += B
    rk = span_rank(K, n)
    hf = rk - rb
    if f == Flavor.HAT:
        return hf, None
    src = (D[0], D[1] + 2)
    vout, ns, _ = _matrix(C, f, src)
    Zs = nullspace(vout, ns)
    Vm, _, _ = _matrix(C, f, src, {g.name: {g.name: Poly([(0, 1)])} for g in C.gens}, (0, -2))
    Vs = [_apply(Vm, z) for z in Zs] + B
    rv = span_rank(Vs, n)
    rkv = span_rank(K + Vs, n)
    return hf, rk + rv - rkv - rb
