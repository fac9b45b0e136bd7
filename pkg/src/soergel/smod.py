"""Soergel modules k (x)_R B with their Zbar-action, hom spaces and indecomposability."""
from __future__ import annotations

import random

import flint
from gmpy2 import mpq

from . import linalg
from .bimodule import (BSElement, bits_degree, gamma, one_tensor, right_mul, word_targets,
                       z_act)
from .hecke import hom_prediction, kl_basis, lp_str
from .structure import P, varpi, zbar_P_split


class VerificationFailed(AssertionError):
    pass


def _zero(n, m=None):
    return flint.fmpq_mat(n, n if m is None else m)


def _eye(n):
    M = flint.fmpq_mat(n, n)
    for i in range(n):
        M[i, i] = 1
    return M


def _q(c):
    c = mpq(c)
    return flint.fmpq(int(c.numerator), int(c.denominator))


def _mq(x):
    return mpq(int(x.p), int(x.q))


def _blocks(tl, tr, bl, br):
    n = tl.nrows()
    M = flint.fmpq_mat(2 * n, 2 * n)
    for src, (ro, co) in ((tl, (0, 0)), (tr, (0, n)), (bl, (n, 0)), (br, (n, n))):
        if src is None:
            continue
        for i in range(n):
            for j in range(n):
                v = src[i, j]
                if v != 0:
                    M[ro + i, co + j] = v
    return M


def _is_zero(M):
    return all(v == 0 for v in M.entries())


class SoergelModule:
    """Finite-dimensional graded Q-space with Zbar generators P_x and right V-action.

    Matrices act on column vectors; P[x] raises degree by 2 l(x), R[j] (right
    multiplication by the j-th coordinate of V) raises degree by 2.
    """

    def __init__(self, group, degrees, P=None, R=None, label=""):
        self.group = group
        self.degrees = list(degrees)
        self.P = dict(P or {})
        self.R = list(R) if R is not None else [_zero(len(self.degrees)) for _ in range(group.dim)]
        self.label = label

    @property
    def dim(self):
        return len(self.degrees)

    def grdim(self):
        out = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return out

    def P_matrix(self, x):
        M = self.P.get(x)
        if M is None:
            return _eye(self.dim) if x is self.group.e else _zero(self.dim)
        return M

    def right_action(self, lam):
        """Matrix of right multiplication by a linear form."""
        M = _zero(self.dim)
        for j, c in enumerate(lam.linear_coeffs()):
            if c:
                M = M + self.R[j] * _q(c)
        return M

    def generators(self, action="zbar"):
        if action == "zbar":
            gens = [(x, 2 * x.length, M) for x, M in sorted(self.P.items()) if x.length > 0]
            gens += [("R", 2, M) for M in self.R]
            return gens
        if action in ("rightR", "right"):
            return [("R", 2, M) for M in self.R]
        if action in ("trivial", None):
            return []
        raise ValueError(f"unknown action set {action}")

    def support(self):
        return set(self.P)

    def __repr__(self):
        return f"SoergelModule({self.label}, grdim={lp_str(self.grdim())})"


def direct_sum(M, N):
    G = M.group
    n, m = M.dim, N.dim
    degs = M.degrees + N.degrees

    def bd(A, B):
        C = flint.fmpq_mat(n + m, n + m)
        for i in range(n):
            for j in range(n):
                if A[i, j] != 0:
                    C[i, j] = A[i, j]
        for i in range(m):
            for j in range(m):
                if B[i, j] != 0:
                    C[n + i, n + j] = B[i, j]
        return C

    keys = set(M.P) | set(N.P)
    Pd = {x: bd(M.P_matrix(x), N.P_matrix(x)) for x in keys}
    R = [bd(a, b) for a, b in zip(M.R, N.R)]
    return SoergelModule(G, degs, Pd, R, f"{M.label}+{N.label}")


def shift(M, k):
    """M(k): degrees lowered by k."""
    return SoergelModule(M.group, [d - k for d in M.degrees], M.P, M.R, f"{M.label}({k})")


def trivial_module(G, degree=0):
    return SoergelModule(G, [degree], {G.e: _eye(1)}, None, "k")


# Bott-Samelson Soergel modules by recursion on the last letter


def _bs_cache(G):
    c = getattr(G, "_smod_bs", None)
    if c is None:
        c = G._smod_bs = {}
    return c


def bar_bs(G, word) -> SoergelModule:
    word = G.parse_word(word)
    cache = _bs_cache(G)
    M = cache.get(word)
    if M is not None:
        return M
    if not word:
        M = SoergelModule(G, [0], {G.e: _eye(1)}, None, "BS()")
        cache[word] = M
        return M
    prev = bar_bs(G, word[:-1])
    i = word[-1]
    n = prev.dim
    I = _eye(n)
    degs = [d + 1 for d in prev.degrees] + [d - 1 for d in prev.degrees]
    R = []
    for j in range(G.dim):
        lam = G.var(j)
        ds = G.demazure_simple(i, lam).constant_term()
        R.append(_blocks(prev.R[j], I * _q(-ds) if ds else None, None,
                         prev.right_action(G.act(G.gens[i], lam))))
    pi = varpi(G, i)
    rpi = prev.right_action(pi)
    rspi = prev.right_action(G.act(G.gens[i], pi))
    Pd = {}
    for x in word_targets(G, word):
        abar, bbar = zbar_P_split(G, x, i)
        A = _zero(n)
        for v, c in abar.items():
            if v in prev.P:
                A = A + prev.P[v] * _q(c)
        B = _zero(n)
        for v, c in bbar.items():
            if v in prev.P:
                B = B + prev.P[v] * _q(c)
        Pd[x] = _blocks(A + rpi * B, -B, None, A + rspi * B)
    M = SoergelModule(G, degs, Pd, R, "BS(" + G.word_str(word) + ")")
    cache[word] = M
    return M


def bar_element(b: BSElement):
    """Image of b in k (x) BS: constant terms of the string coordinates."""
    n = 1 << b.k
    return [b.coeff(e).constant_term() for e in range(n)]


def bar_bs_via_bimodule(G, word) -> SoergelModule:
    """Same module computed through the bimodule Z-action (cross-check route)."""
    word = G.parse_word(word)
    k = len(word)
    n = 1 << k
    T = word_targets(G, word)
    basis = [BSElement.basis(G, word, e) for e in range(n)]
    Pd = {}
    for x in T:
        z = P(G, x, T)
        M = flint.fmpq_mat(n, n)
        for e, b in enumerate(basis):
            for r, c in enumerate(bar_element(z_act(z, b))):
                if c:
                    M[r, e] = _q(c)
        Pd[x] = M
    R = []
    for j in range(G.dim):
        M = flint.fmpq_mat(n, n)
        for e, b in enumerate(basis):
            for r, c in enumerate(bar_element(right_mul(b, G.var(j)))):
                if c:
                    M[r, e] = _q(c)
        R.append(M)
    return SoergelModule(G, [bits_degree(k, e) for e in range(n)], Pd, R)


def bar(obj, G=None):
    """bar of a word (Bott-Samelson) or of an already built module."""
    if isinstance(obj, SoergelModule):
        return obj
    if G is None:
        raise ValueError("a group is needed to build bar of a word")
    return bar_bs(G, obj)


# hom spaces


def _sparse(M):
    rows, cols = {}, {}
    n, m = M.nrows(), M.ncols()
    for i in range(n):
        for j in range(m):
            v = M[i, j]
            if v != 0:
                q = _mq(v)
                rows.setdefault(i, []).append((j, q))
                cols.setdefault(j, []).append((i, q))
    return rows, cols


def _gen_pairs(M, N, action):
    G = M.group
    if action == "zbar":
        keys = sorted(x for x in set(M.P) | set(N.P) if x.length > 0)
        pairs = [(2 * x.length, M.P_matrix(x), N.P_matrix(x)) for x in keys]
        pairs += [(2, a, b) for a, b in zip(M.R, N.R)]
    elif action in ("rightR", "right"):
        pairs = [(2, a, b) for a, b in zip(M.R, N.R)]
    elif action in ("trivial", None):
        pairs = []
    else:
        raise ValueError(f"unknown action set {action}")
    out = []
    for deg, a, b in pairs:
        if _is_zero(a) and _is_zero(b):
            continue
        out.append((deg, _sparse(a)[1], _sparse(b)[0]))
    return out


def hom_degree(M, N, d, action="zbar", pairs=None):
    """Basis of degree-d maps M -> N commuting with the action (as fmpq matrices N x M)."""
    unknowns = {}
    for c, dc in enumerate(M.degrees):
        for r, dr in enumerate(N.degrees):
            if dr == dc + d:
                unknowns[(r, c)] = len(unknowns)
    if not unknowns:
        return []
    if pairs is None:
        pairs = _gen_pairs(M, N, action)
    rows = []
    Nd, Md = N.degrees, M.degrees
    for deg, acols, brows in pairs:
        # (B phi - phi A)[r][c] = 0 for deg N_r = deg M_c + d + deg
        for c, dc in enumerate(Md):
            for r, dr in enumerate(Nd):
                if dr != dc + d + deg:
                    continue
                row = {}
                for k, v in brows.get(r, ()):
                    u = unknowns.get((k, c))
                    if u is not None:
                        row[u] = row.get(u, 0) + v
                for k, v in acols.get(c, ()):
                    u = unknowns.get((r, k))
                    if u is not None:
                        row[u] = row.get(u, 0) - v
                row = {u: v for u, v in row.items() if v}
                if row:
                    rows.append(row)
    ns = linalg.nullspace(rows, len(unknowns))
    out = []
    for vec in ns:
        phi = flint.fmpq_mat(N.dim, M.dim)
        for (r, c), u in unknowns.items():
            if vec[u]:
                phi[r, c] = _q(vec[u])
        out.append(phi)
    return out


def hom_range(M, N):
    return range(min(N.degrees) - max(M.degrees), max(N.degrees) - min(M.degrees) + 1)


def hom_space(M, N, action="zbar"):
    pairs = _gen_pairs(M, N, action)
    return {d: b for d in hom_range(M, N) if (b := hom_degree(M, N, d, action, pairs))}


def hom_dims(M, N, action="zbar"):
    pairs = _gen_pairs(M, N, action)
    out = {}
    for d in hom_range(M, N):
        k = len(hom_degree(M, N, d, action, pairs))
        if k:
            out[d] = k
    return out


def hom_Zbar(M, N):
    return hom_dims(M, N, "zbar")


def hom_rightR(M, N):
    return hom_dims(M, N, "rightR")


def hom_check(G, u, v):
    """(computed graded dimension, Hecke pairing prediction)."""
    got = hom_Zbar(bar_bs(G, u), bar_bs(G, v))
    return got, hom_prediction(G, u, v)


# indecomposability


class IndecomposabilityResult:
    def __init__(self, indecomposable, end_dim, radical_dim, idempotent=None, method=""):
        self.indecomposable = indecomposable
        self.end_dim = end_dim
        self.radical_dim = radical_dim
        self.idempotent = idempotent
        self.method = method

    def __bool__(self):
        return self.indecomposable

    def __repr__(self):
        return (f"IndecomposabilityResult(indecomposable={self.indecomposable}, "
                f"end_dim={self.end_dim}, radical_dim={self.radical_dim}, method={self.method!r})")


def _trace(M):
    t = flint.fmpq(0)
    for i in range(M.nrows()):
        t += M[i, i]
    return t


def _poly_at(p, A):
    n = A.nrows()
    R = _zero(n)
    for c in reversed(p.coeffs()):
        R = R * A + _eye(n) * c
    return R


def _split_idempotent(a):
    """A nontrivial idempotent polynomial in a, if its minimal polynomial has coprime factors."""
    mp = a.minpoly()
    _, facs = mp.factor()
    if len(facs) < 2:
        return None
    f = facs[0][0] ** facs[0][1]
    g = flint.fmpq_poly([1])
    for p, k in facs[1:]:
        g = g * p ** k
    gcd, u, v = f.xgcd(g)
    # u f + v g = gcd (a nonzero constant)
    e = _poly_at(v * g, a) * (1 / gcd.coeffs()[0])
    return e


def indecomposable_over(M: SoergelModule, action="zbar", seed=0, tries=20):
    """Decide whether End^0 of M over the given action set has only trivial idempotents."""
    End = hom_degree(M, M, 0, action)
    r = len(End)
    if r == 0:
        return IndecomposabilityResult(False, 0, 0, None, "zero module")
    T = [[_mq(_trace(a * b)) for b in End] for a in End]
    rad = linalg.nullspace(T, r)
    if r - len(rad) == 1:
        return IndecomposabilityResult(True, r, len(rad), None, "End^0/rad is one-dimensional")
    rng = random.Random(seed)
    cands = list(End)
    for _ in range(tries):
        a = _zero(M.dim)
        for b in End:
            a = a + b * rng.randint(-3, 3)
        cands.append(a)
    for a in cands:
        e = _split_idempotent(a)
        if e is not None:
            n = M.dim
            if e * e != e or e == _zero(n) or e == _eye(n):
                continue
            return IndecomposabilityResult(False, r, len(rad), e, "minimal polynomial splits")
    return IndecomposabilityResult(True, r, len(rad), None,
                                   "no split minimal polynomial; End^0/rad treated as a division algebra")


def is_endomorphism(M, e, action="zbar"):
    for _, _, A in M.generators(action):
        if A * e != e * A:
            return False
    for j, dj in enumerate(M.degrees):
        for i, di in enumerate(M.degrees):
            if e[i, j] != 0 and di != dj:
                return False
    return True


# the universal-group counterexample

UNIVERSAL_B = [
    ("000011", 1), ("000101", -1), ("000110", 1), ("001010", -1), ("001100", 1),
    ("010001", -1), ("010010", -2), ("011000", 1), ("010100", -1), ("100001", 1),
    ("100010", -1), ("101000", -1), ("110000", 1),
]


def universal_b(G, orientation="left"):
    """The 13-term element in BS(stustu); orientation says which end of the string is slot 0."""
    word = G.parse_word("stustu")
    coords = {}
    for s, c in UNIVERSAL_B:
        bits = s if orientation == "left" else s[::-1]
        e = sum(1 << j for j, ch in enumerate(bits) if ch == "1")
        coords[e] = G.one().scale(c)
    return BSElement(G, word, coords)


def annihilates_Rplus(M: SoergelModule, vec):
    v = flint.fmpq_mat(M.dim, 1, [_q(c) for c in vec])
    return all(_is_zero(A * v) for A in M.R)


def _hom_k_zbar_space(M, d):
    """Elements of degree d killed by all P_x (x != e) and by the right action."""
    idx = [i for i, dd in enumerate(M.degrees) if dd == d]
    if not idx:
        return []
    rows = []
    for _, _, A in M.generators("zbar"):
        for r in range(M.dim):
            row = {c: _mq(A[r, i]) for c, i in enumerate(idx) if A[r, i] != 0}
            if row:
                rows.append(row)
    ns = linalg.nullspace(rows, len(idx))
    out = []
    for vec in ns:
        full = [mpq(0)] * M.dim
        for c, i in enumerate(idx):
            full[i] = vec[c]
        out.append(full)
    return out


def theta_check(G, word, degrees=None):
    """Per degree: (dim k (x) Gamma_id, dim of its image in bar BS, dim of the annihilator space).

    Theta is an isomorphism onto the annihilator in degree d iff all three agree.
    """
    word = G.parse_word(word)
    M = bar_bs(G, word)
    k = len(word)
    if degrees is None:
        degrees = range(-k, k + 1, 2)
    out = {}
    ok = True
    for d in degrees:
        gam = gamma(G, [G.e], word, d)
        lower = gamma(G, [G.e], word, d - 2) if d - 2 >= -k else []
        # R_+ Gamma_id in degree d
        prod = []
        for g in lower:
            for j in range(G.dim):
                prod.append(g.lscale(G.var(j)))
        gen_dim = len(gam) - _span_dim(G, word, prod, d)
        img = linalg.rank([bar_element(g) for g in gam], M.dim) if gam else 0
        ann = len(_hom_k_zbar_space(M, d))
        out[d] = (gen_dim, img, ann)
        ok = ok and gen_dim == img == ann
    return ok, out


def _span_dim(G, word, elems, d):
    if not elems:
        return 0
    cols = {}
    rows = []
    for b in elems:
        row = {}
        for e, h in b.coords.items():
            for m, c in h.terms.items():
                key = (e, m)
                if key not in cols:
                    cols[key] = len(cols)
                row[cols[key]] = c
        rows.append(row)
    return linalg.rank(rows, len(cols))


def counterexample_universal(G=None, strict=True):
    """Verdict record for the degree-2 annihilator element in bar BS(stustu)."""
    from .coxeter import preset
    G = preset("universal3") if G is None else G
    word = G.parse_word("stustu")
    M = bar_bs(G, word)
    checks = {}
    b = None
    orientation = None
    for ori in ("left", "right"):
        cand = universal_b(G, ori)
        if cand.degree() == 2 and annihilates_Rplus(M, bar_element(cand)):
            b, orientation = cand, ori
            break
    if b is None:
        b, orientation = universal_b(G, "left"), "none"
    deg = b.degree()
    gam2 = gamma(G, [G.e], word, 2)
    ann = annihilates_Rplus(M, bar_element(b))
    klc = kl_basis(G, G.from_word(word)).coeff(G.e)
    hz = hom_degree(trivial_module(G), M, 2, "zbar")
    hr = hom_degree(trivial_module(G), M, 2, "rightR")
    nonzero = any(bar_element(b))
    verdict = {
        "deg": deg,
        "in_gamma_id": len(gam2) > 0 and linalg.in_span([bar_element(g) for g in gam2], bar_element(b), M.dim),
        "annihilates_Rplus": ann,
        "kl_coeff": lp_str(klc),
        "theta_surjective": not (nonzero and ann and len(gam2) == 0),
        "orientation": orientation,
        "gamma_id_degree2_dim": len(gam2),
        "hom_Zbar_k_degree2": len(hz),
        "hom_rightR_k_degree2": len(hr),
    }
    if strict:
        if deg != 2:
            raise VerificationFailed("deg b != 2")
        if gam2:
            raise VerificationFailed("Gamma_id has a degree-2 part")
        if not ann:
            raise VerificationFailed("b does not annihilate R_+")
    return verdict
