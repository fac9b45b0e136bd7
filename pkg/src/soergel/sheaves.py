"""Braden-MacPherson canonical sheaves on Bruhat moment graphs and their global sections.

Stalks are graded free R-modules recorded by generator degrees; elements of
a stalk are tuples of polynomials.  The sheaf is built from the top vertex
down.  Global sections are kept as an explicit free R-basis, each basis
section being born at the vertex where it first becomes nonzero.
"""
from __future__ import annotations

from gmpy2 import mpq

from . import linalg
from .hecke import kl_basis, lp_str
from .nilhecke import d as dxy
from .polyring import Poly, monomials_of_degree
from .smod import SoergelModule, VerificationFailed, _q, indecomposable_over, is_endomorphism

import flint


class GKMViolation(ValueError):
    pass


class BMPError(ArithmeticError):
    pass


def _mono(G, m):
    return Poly(G.dim, {m: mpq(1)})


def _monos(G, deg):
    """Monomials of polynomial degree deg (even, >= 0)."""
    if deg < 0 or deg % 2:
        return []
    return monomials_of_degree(G.dim, deg // 2)


class _Reducer:
    """Normal forms modulo a linear form."""

    def __init__(self, alpha):
        self.alpha = alpha
        self.cache = {}

    def __call__(self, f):
        return f.mod_linear(self.alpha)


class _Space:
    """Sparse vectors over hashable keys, with column indexing for linear algebra."""

    def __init__(self):
        self.cols = {}

    def row(self, vec):
        out = {}
        for k, c in vec.items():
            if c:
                j = self.cols.get(k)
                if j is None:
                    j = self.cols[k] = len(self.cols)
                out[j] = c
        return out


def _rank(rows, n):
    rows = [r for r in rows if r]
    return linalg.rank(rows, n) if rows else 0


class BMPSheaf:
    def __init__(self, group, w):
        self.group = group
        self.w = w
        self.vertices = []  # processing order, top first
        self.gdeg = {}  # vertex -> generator degrees
        self.rho = {}  # (x, y) -> list of images of generators of B^x in B^y / alpha
        self.up = {}  # x -> list of (y, alpha)
        self.sections = []  # list of (degree, {vertex: tuple of polys}, birth vertex)
        self.kernel_gens = {}  # vertex -> indices into sections born there

    def stalk_character(self, x):
        out = {}
        for d in self.gdeg[x]:
            out[d] = out.get(d, 0) + 1
        return out

    def normalized_stalk(self, x):
        """v^{l(x)} grrk(B^x) with v -> v^-1, to compare with h_{x,w}."""
        return {-(d + x.length): c for d, c in self.stalk_character(x).items()}

    def to_json(self):
        return {
            "w": self.w.name(),
            "stalks": {x.name(): list(self.gdeg[x]) for x in sorted(self.vertices)},
            "edges": [[x.name(), y.name(), str(a)] for x in sorted(self.vertices) for y, a in self.up[x]],
        }


def _edge_vec(red, elem, key_prefix):
    """Coordinates of an element of B^y reduced modulo alpha."""
    out = {}
    for j, f in enumerate(elem):
        if f:
            for m, c in red(f).terms.items():
                out[key_prefix + (j, m)] = c
    return out


def _scale_elem(f, elem):
    return tuple(f * g for g in elem)


def bmp_build(G, w, max_degree=None) -> BMPSheaf:
    if isinstance(w, (str, tuple, list)):
        w = G.from_word(G.parse_word(w))
    L = w.length
    top = L if max_degree is None else max_degree
    omega = G.interval(w)
    if not G.gkm_check(omega):
        raise GKMViolation(f"GKM fails on [e, {w}]")
    sh = BMPSheaf(G, w)
    labels = {}
    for v, u, t in G.moment_edges(omega):
        labels[(v, u)] = G.reflection_root(t)
    order = sorted(omega, key=lambda x: (-x.length, x))
    reducers = {}
    for x in order:
        sh.vertices.append(x)
        ups = [(y, labels[(x, y)]) for y in order if (x, y) in labels]
        sh.up[x] = ups
        for y, a in ups:
            if (x, y) not in reducers:
                reducers[(x, y)] = _Reducer(a)
        if not ups:
            sh.gdeg[x] = [-L]
            sh.sections.append((-L, {x: (G.one(),)}, x))
            sh.kernel_gens[x] = [len(sh.sections) - 1]
            continue
        _add_vertex(G, sh, x, ups, reducers, top)
    return sh


def _pi_vec(sh, x, ups, reducers, sec_vals):
    vec = {}
    for y, _ in ups:
        elem = sec_vals.get(y)
        if elem is not None:
            vec.update(_edge_vec(reducers[(x, y)], elem, (y,)))
    return vec


def _add_vertex(G, sh, x, ups, reducers, top):
    L = sh.w.length
    degs = range(-L, top + 1, 2)
    space = _Space()
    # images of the existing section generators
    pis = [(dg, _pi_vec(sh, x, ups, reducers, vals)) for dg, vals, _ in sh.sections]
    # minimal generators of I = R-span of the images, degree by degree
    gens = []  # (degree, vector)
    basis = {}  # degree -> list of row dicts spanning I_n
    for n in degs:
        prev = basis.get(n - 2, [])
        rows = []
        for vec in prev:
            for j in range(G.dim):
                xj = G.var(j)
                nv = {}
                for (y, jj, m), c in vec.items():
                    red = reducers[(x, y)]
                    for mm, cc in red(_mono(G, m) * xj).terms.items():
                        k = (y, jj, mm)
                        nv[k] = nv.get(k, 0) + c * cc
                rows.append({k: c for k, c in nv.items() if c})
        r0 = _rank([space.row(v) for v in rows], len(space.cols) + 1)
        cur = list(rows)
        for dg, vec in pis:
            if dg != n or not vec:
                continue
            test = cur + [vec]
            r1 = _rank([space.row(v) for v in test], len(space.cols) + 1)
            if r1 > r0:
                cur.append(vec)
                gens.append((n, vec))
                r0 = r1
        # keep a basis of I_n
        if cur:
            idx = space
            mat = [idx.row(v) for v in cur]
            ncols = len(idx.cols)
            rb = linalg.row_space_basis([[r.get(j, 0) for j in range(ncols)] for r in mat], ncols)
            inv = {j: k for k, j in idx.cols.items()}
            basis[n] = [{inv[j]: c for j, c in enumerate(row) if c} for row in rb]
        else:
            basis[n] = []
    sh.gdeg[x] = [g[0] for g in gens]
    # rho(g_l) as elements of B^y / alpha (vectors)
    sigma = [v for _, v in gens]
    r = len(gens)
    gdeg = sh.gdeg[x]

    def rho_elem(elem):
        out = {}
        for l, f in enumerate(elem):
            if not f:
                continue
            for (y, jj, m), c in sigma[l].items():
                red = reducers[(x, y)]
                for mm, cc in red(f * _mono(G, m)).terms.items():
                    k = (y, jj, mm)
                    out[k] = out.get(k, 0) + c * cc
        return {k: c for k, c in out.items() if c}

    def stalk_unknowns(n):
        return [(l, m) for l in range(r) for m in _monos(G, n - gdeg[l])]

    def elem_from(unk, vec):
        polys = [G.zero() for _ in range(r)]
        for (l, m), c in zip(unk, vec):
            if c:
                polys[l] = polys[l] + _mono(G, m).scale(c)
        return tuple(polys)

    # extend every existing section generator to x
    new_sections = []
    for (dg, vals, birth), (_, target) in zip(sh.sections, pis):
        unk = stalk_unknowns(dg)
        if not target:
            nv = dict(vals)
            nv[x] = tuple(G.zero() for _ in range(r))
            new_sections.append((dg, nv, birth))
            continue
        sp = _Space()
        cols = [sp.row(rho_elem(elem_from(unk, [1 if i == k else 0 for i in range(len(unk))])))
                for k in range(len(unk))]
        trow = sp.row(target)
        ncols = len(sp.cols)
        # solve sum_k y_k cols[k] = target
        A = [[mpq(0)] * len(unk) for _ in range(ncols)]
        for k, col in enumerate(cols):
            for j, c in col.items():
                A[j][k] = c
        b = [trow.get(j, mpq(0)) for j in range(ncols)]
        sol = _solve_any(A, b, len(unk))
        if sol is None:
            raise BMPError(f"section does not extend to {x}")
        nv = dict(vals)
        nv[x] = elem_from(unk, sol)
        new_sections.append((dg, nv, birth))
    # kernel of rho_x, minimal generators degree by degree
    kgens = []
    kbasis = {}
    for n in degs:
        unk = stalk_unknowns(n)
        if not unk:
            kbasis[n] = []
            continue
        sp = _Space()
        cols = [sp.row(rho_elem(elem_from(unk, [1 if i == k else 0 for i in range(len(unk))])))
                for k in range(len(unk))]
        rows = {}
        for k, col in enumerate(cols):
            for j, c in col.items():
                rows.setdefault(j, {})[k] = c
        ker = linalg.nullspace(list(rows.values()), len(unk))
        kbasis[n] = [elem_from(unk, v) for v in ker]
        lower = [_scale_elem(G.var(j), e) for e in kbasis.get(n - 2, []) for j in range(G.dim)]
        sp2 = _Space()

        def coords(e):
            out = {}
            for l, f in enumerate(e):
                for m, c in f.terms.items():
                    out[(l, m)] = c
            return out

        cur = [sp2.row(coords(e)) for e in lower]
        r0 = _rank(cur, len(sp2.cols) + 1)
        for e in kbasis[n]:
            row = sp2.row(coords(e))
            r1 = _rank(cur + [row], len(sp2.cols) + 1)
            if r1 > r0:
                cur.append(row)
                kgens.append((n, e))
                r0 = r1
    if len(kgens) != r:
        raise BMPError(f"kernel at {x} has {len(kgens)} generators, stalk rank {r}")
    sh.sections = new_sections
    sh.kernel_gens[x] = []
    for n, e in kgens:
        vals = {y: tuple(G.zero() for _ in range(len(sh.gdeg[y]))) for y in sh.vertices if y is not x}
        vals[x] = e
        sh.sections.append((n, vals, x))
        sh.kernel_gens[x].append(len(sh.sections) - 1)
    sh.rho[x] = sigma


def _solve_any(A, b, n):
    """Some solution of A y = b (rational), or None."""
    if not A:
        return [mpq(0)] * n if not any(b) else None
    aug = [row + [bi] for row, bi in zip(A, b)]
    R, rk = linalg.to_fmpq_mat(aug).rref()
    sol = [mpq(0)] * n
    for i in range(rk):
        piv = next(j for j in range(n + 1) if R[i, j] != 0)
        if piv == n:
            return None
        sol[piv] = linalg.from_fmpq(R[i, n])
    return sol


# global sections


class GlobalSections:
    def __init__(self, sheaf: BMPSheaf):
        self.sheaf = sheaf
        self.group = sheaf.group
        self.gens = sheaf.sections

    def graded_rank(self):
        out = {}
        for dg, _, _ in self.gens:
            out[dg] = out.get(dg, 0) + 1
        return out

    def act(self, zvals, sec):
        """Pointwise multiplication of a section by z (vertex -> polynomial)."""
        return {y: tuple(zvals[y] * f for f in e) for y, e in sec.items()}

    def expand(self, sec, degree):
        """Coefficients f_i with sec = sum f_i gens_i (peeling in birth order)."""
        G = self.group
        sh = self.sheaf
        s = dict(sec)
        coeffs = {}
        for x in sh.vertices:
            e = s.get(x)
            if e is None or not any(e):
                continue
            kidx = sh.kernel_gens[x]
            unk = [(i, m) for i in kidx for m in _monos(G, degree - self.gens[i][0])]
            rows = {}
            for k, (i, m) in enumerate(unk):
                for l, f in enumerate(self.gens[i][1][x]):
                    for mm, c in (f * _mono(G, m)).terms.items():
                        rows.setdefault((l, mm), {})[k] = c
            keys = list(rows)
            for l, f in enumerate(e):
                for mm in f.terms:
                    if (l, mm) not in rows:
                        keys.append((l, mm))
            A = [[rows.get(key, {}).get(k, mpq(0)) for k in range(len(unk))] for key in keys]
            b = [e[key[0]].terms.get(key[1], mpq(0)) for key in keys]
            sol = _solve_any(A, b, len(unk))
            if sol is None:
                raise BMPError(f"section not in the span at {x}")
            for (i, m), c in zip(unk, sol):
                if c:
                    f = _mono(G, m).scale(c)
                    coeffs[i] = coeffs[i] + f if i in coeffs else f
                    gi = self.gens[i][1]
                    for y, ge in gi.items():
                        if y in s:
                            s[y] = tuple(a - f * g for a, g in zip(s[y], ge))
        return coeffs


def global_sections(sheaf: BMPSheaf) -> GlobalSections:
    return GlobalSections(sheaf)


def bar_sections(gs: GlobalSections) -> SoergelModule:
    """k (x)_R Gamma with the induced Zbar-action (P_x) and right V-action."""
    G = gs.group
    sh = gs.sheaf
    n = len(gs.gens)
    degs = [g[0] for g in gs.gens]
    maxdeg = max(degs)
    verts = sh.vertices

    def matrix_for(zvals, zdeg):
        M = flint.fmpq_mat(n, n)
        for i, (dg, sec, _) in enumerate(gs.gens):
            tdeg = dg + zdeg
            if tdeg > maxdeg:
                continue
            s = gs.act(zvals, sec)
            for j, f in gs.expand(s, tdeg).items():
                if degs[j] == tdeg:
                    c = f.constant_term()
                    if c:
                        M[j, i] = _q(c)
        return M

    Pd = {}
    for x in verts:
        z = {y: dxy(G, x, y) for y in verts}
        Pd[x] = matrix_for(z, 2 * x.length)
    R = []
    for j in range(G.dim):
        z = {y: G.act(y, G.var(j)) for y in verts}
        R.append(matrix_for(z, 2))
    return SoergelModule(G, degs, Pd, R, f"Bbar({sh.w.name()})")


def stalk_kl_check(sheaf: BMPSheaf):
    """{x: (normalized stalk character, h_{x,w})} and whether all agree."""
    G = sheaf.group
    kl = kl_basis(G, sheaf.w)
    out = {}
    ok = True
    for x in sheaf.vertices:
        a = sheaf.normalized_stalk(x)
        b = kl.coeff(x)
        out[x] = (a, b)
        ok = ok and a == b
    return ok, out


def expected_section_rank(G, w):
    """sum_x h_{x,w}(v) v^{-l(x)}."""
    out = {}
    for x, c in kl_basis(G, w).coeffs.items():
        for k, m in c.items():
            out[k - x.length] = out.get(k - x.length, 0) + m
    return {k: m for k, m in out.items() if m}


def top_section_check(gs: GlobalSections):
    """The degree -l(w) generator is nonzero at every vertex (so P_x times it are independent)."""
    sh = gs.sheaf
    for dg, sec, birth in gs.gens:
        if birth is sh.w:
            return all(any(sec[y]) for y in sh.vertices)
    return False


def _fmt_matrix(M):
    return [[str(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())]


def counterexample_affine(G=None, w="stutst", strict=True):
    from .coxeter import preset
    G = preset("affineA2") if G is None else G
    if isinstance(w, str):
        w = G.from_word(G.parse_word(w))
    sh = bmp_build(G, w)
    kl_ok, table = stalk_kl_check(sh)
    gs = global_sections(sh)
    B = bar_sections(gs)
    zb = indecomposable_over(B, "zbar")
    rr = indecomposable_over(B, "rightR")
    idem = rr.idempotent
    idem_ok = idem is not None and is_endomorphism(B, idem, "rightR") and idem * idem == idem
    verdict = {
        "w": w.name(),
        "stalks_match_kl": kl_ok,
        "framework_assumption": "ok" if kl_ok else "framework assumption failed",
        "graded_dim": lp_str(B.grdim()),
        "zbar_indecomposable": bool(zb),
        "rightR_decomposable": not rr.indecomposable,
        "idempotent_is_right_module_map": idem_ok,
        "end0_zbar_dim": zb.end_dim,
        "end0_rightR_dim": rr.end_dim,
        "idempotent": _fmt_matrix(idem) if idem is not None else None,
    }
    if strict:
        if not kl_ok:
            raise VerificationFailed("framework assumption failed: stalks do not match KL")
        if not zb:
            raise VerificationFailed("bar B_w decomposes over Zbar")
        if rr.indecomposable or not idem_ok:
            raise VerificationFailed("no idempotent for the right R-action")
    return verdict, B
