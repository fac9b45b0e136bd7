"""Light leaves, their duals, and the defective submodule.

Elementary maps (forward direction, acting on the tail of the current target):
  U1  identity
  U0  end-dot        f(x)g -> fg                       (degree +1)
  D0  trivalent merge f(x)g(x)h -> f d_s(g) (x) h      (degree -1)
  D1  cap             f(x)g(x)h -> f d_s(g) h           (degree 0)
Rex moves are commutations B_sB_t -> B_tB_s for m_st = 2.  Leaves are the
images of 1(x) under the adjoint of the composite map; adjoints of the local
maps are computed from local Gram matrices.
"""
from __future__ import annotations

from gmpy2 import mpq

from . import linalg
from .bimodule import (BSElement, _push_left, basis_form, bits_degree, iform, kappa_data,
                       one_tensor, to_kappa_scaled, word_targets)
from .coxeter import INF
from .polyring import Poly
from .structure import varpi


class Unsupported(NotImplementedError):
    pass


class GramNotUnit(ArithmeticError):
    pass


# pure tensors


def _pi(G, i):
    return varpi(G, i)


def string_to_pure(G, word, e):
    """c_e as a list of (coefficient, [p_0..p_k]) pure tensors."""
    terms = [(mpq(1), [G.one()])]
    for j, i in enumerate(word):
        nxt = []
        if (e >> j) & 1:
            for c, ps in terms:
                nxt.append((c, ps + [G.one()]))
        else:
            pi = _pi(G, i)
            spi = G.act(G.gens[i], pi)
            for c, ps in terms:
                nxt.append((c, ps[:-1] + [ps[-1] * spi, G.one()]))
                nxt.append((-c, ps[:-1] + [ps[-1], pi]))
        terms = nxt
    return terms


def pure_to_string(G, word, polys):
    """p_0 (x) p_1 (x) ... (x) p_k in string coordinates."""
    word = tuple(word)
    k = len(word)
    states = {(1 << k) - 1: polys[0]}
    for j in range(1, k + 1):
        p = polys[j]
        if p.is_constant():
            c = p.constant_term()
            states = {e: h.scale(c) for e, h in states.items() if c}
            continue
        new = {}
        for e, h in states.items():
            for e2, g in _push_left(G, word, {e: p}, j).items():
                v = h * g
                new[e2] = new[e2] + v if e2 in new else v
        states = {e: v for e, v in new.items() if v}
    return BSElement(G, word, states)


def _local_table(G, in_word, out_word, pure_map):
    table = {}
    for e in range(1 << len(in_word)):
        acc = BSElement(G, out_word)
        for c, ps in string_to_pure(G, in_word, e):
            for c2, qs in pure_map(ps):
                acc = acc + pure_to_string(G, out_word, qs).lscale(c * c2)
        table[e] = acc.coords
    return table


def _dem(G, i, f):
    return G.demazure_simple(i, f)


def dot_table(G, i):
    return _local_table(G, (i,), (), lambda ps: [(1, [ps[0] * ps[1]])])


def merge_table(G, i):
    return _local_table(G, (i, i), (i,), lambda ps: [(1, [ps[0] * _dem(G, i, ps[1]), ps[2]])])


def cap_table(G, i):
    return _local_table(G, (i, i), (), lambda ps: [(1, [ps[0] * _dem(G, i, ps[1]) * ps[2]])])


def commuting_fundamentals(G, s, t, shift=0):
    """(w_s, w_t): alpha_s^vee(w_s) = 1, alpha_t^vee(w_s) = 0 and symmetrically."""
    cs, ct = G.coroots[s], G.coroots[t]
    dot = lambda a, b: sum((x * y for x, y in zip(a, b)), mpq(0))
    gss, gst, gtt = dot(cs, cs), dot(cs, ct), dot(ct, ct)
    det = gss * gtt - gst * gst
    if det == 0:
        raise Unsupported("coroots of commuting generators are dependent")
    # w = l cs + m ct with <cs,w> = 1, <ct,w> = 0
    ls, ms = gtt / det, -gst / det
    lt, mt = -gst / det, gss / det
    ws = [ls * a + ms * b for a, b in zip(cs, ct)]
    wt = [lt * a + mt * b for a, b in zip(cs, ct)]
    if shift:
        ker = linalg.nullspace([list(cs), list(ct)], G.dim)
        if ker:
            ws = [a + shift * b for a, b in zip(ws, ker[0])]
            wt = [a - shift * b for a, b in zip(wt, ker[0])]
    return Poly.linear(ws), Poly.linear(wt)


def swap_table(G, s, t, shift=0):
    """B_s B_t -> B_t B_s for commuting s, t."""
    ws, wt = commuting_fundamentals(G, s, t, shift)

    def pm(ps):
        p0, g, p2 = ps
        dd = _dem(G, s, _dem(G, t, g))
        b = _dem(G, s, g) - dd * wt
        c = _dem(G, t, g) - dd * ws
        a = g - b * ws - c * wt - dd * ws * wt
        return [(1, [p0 * a, G.one(), p2]), (1, [p0 * b, G.one(), ws * p2]),
                (1, [p0 * c * wt, G.one(), p2]), (1, [p0 * dd * wt, G.one(), ws * p2])]

    return _local_table(G, (s, t), (t, s), pm)


# polynomial matrices


def invert_graded_gram(M, degs):
    """Inverse of a symmetric homogeneous Gram matrix M (entries of degree d_a + d_b).

    Blocks with d_a + d_b = 0 are constant; after ordering by degree the
    matrix is block triangular, so the inverse needs only rational solves.
    """
    n = len(M)
    order = sorted(set(degs))
    idx = {d: [a for a in range(n) if degs[a] == d] for d in order}
    zero = None
    for row in M:
        for f in row:
            zero = f.zero()
            break
        break
    # constant blocks C_D = M[rows deg D][cols deg -D]
    cinv = {}
    for D in order:
        rows = idx[D]
        cols = idx.get(-D, [])
        if len(rows) != len(cols):
            raise GramNotUnit(f"degree {D}: {len(rows)} vs {len(cols)}")
        C = [[M[a][b].constant_term() for b in cols] for a in rows]
        for a in rows:
            for b in cols:
                if not M[a][b].is_constant():
                    raise GramNotUnit("diagonal block not constant")
        try:
            cinv[D] = linalg.inverse(C)
        except ZeroDivisionError:
            raise GramNotUnit(f"degree {D} block singular")
    X = [[zero for _ in range(n)] for _ in range(n)]
    for col in range(n):
        x = {}
        for D in order:
            rows = idx[D]
            cols = idx[-D]
            rhs = []
            for a in rows:
                r = zero + (1 if a == col else 0)
                for g, xg in x.items():
                    if degs[g] > -D and xg:
                        m = M[a][g]
                        if m:
                            r = r - m * xg
                rhs.append(r)
            Ci = cinv[D]
            for bi, b in enumerate(cols):
                acc = zero
                for ai in range(len(rows)):
                    c = Ci[bi][ai]
                    if c and rhs[ai]:
                        acc = acc + rhs[ai].scale(c)
                x[b] = acc
        for g in range(n):
            X[g][col] = x.get(g, zero)
    return X


def const_det(M):
    """Determinant of a matrix whose determinant is known to be homogeneous of degree 0."""
    C = [[f.constant_term() for f in row] for row in M]
    return linalg.to_fmpq_mat(C).det() if C else 1


# light leaves


class LightLeafFamily:
    def __init__(self, group, word, leaves, subs, canonical_only):
        self.group = group
        self.word = word
        self.leaves = leaves  # bits -> BSElement
        self.subs = subs  # bits -> Subexpression
        self.canonical_only = canonical_only

    def leaf(self, bits):
        return self.leaves[bits]


def _bits_int(bits):
    return sum(1 << j for j, b in enumerate(bits) if b)


def _letters_ok(G, word):
    letters = sorted(set(word))
    for a in letters:
        for b in letters:
            if a != b and G.m[a][b] not in (2, INF):
                return False
    return True


class _Tables:
    def __init__(self, G, shift=0):
        self.G = G
        self.shift = shift
        self.fwd = {}
        self.adj = {}

    def forward(self, kind, letters):
        key = (kind, letters)
        t = self.fwd.get(key)
        if t is None:
            G = self.G
            if kind == "dot":
                t = (letters, (), dot_table(G, letters[0]))
            elif kind == "merge":
                t = (letters, letters[:1], merge_table(G, letters[0]))
            elif kind == "cap":
                t = (letters, (), cap_table(G, letters[0]))
            elif kind == "swap":
                s, tt = letters
                t = (letters, (tt, s), swap_table(G, s, tt, self.shift))
            self.fwd[key] = t
        return t

    def adjoint(self, kind, letters):
        key = (kind, letters)
        t = self.adj.get(key)
        if t is None:
            in_w, out_w, fwd = self.forward(kind, letters)
            t = (out_w, in_w, adjoint_table(self.G, in_w, out_w, fwd))
            self.adj[key] = t
        return t


def adjoint_table(G, in_w, out_w, fwd):
    """phi^*(c_f) for phi: BS(in_w) -> BS(out_w) given by its table."""
    n_in = 1 << len(in_w)
    degs = [bits_degree(len(in_w), e) for e in range(n_in)]
    M = [[basis_form(G, in_w, a, b) if in_w else G.one() for b in range(n_in)] for a in range(n_in)]
    Minv = invert_graded_gram(M, degs)
    table = {}
    for f in range(1 << len(out_w)):
        # r_e = <phi(c_e), c_f>
        r = []
        for e in range(n_in):
            acc = G.zero()
            for e2, g in fwd[e].items():
                v = basis_form(G, out_w, e2, f) if out_w else G.one()
                if v:
                    acc = acc + g * v
            r.append(acc)
        coords = {}
        for a in range(n_in):
            acc = G.zero()
            for e in range(n_in):
                if Minv[a][e] and r[e]:
                    acc = acc + Minv[a][e] * r[e]
            if acc:
                coords[a] = acc
        table[f] = coords
    return table


def apply_local(G, elem: BSElement, pos, in_len, out_local, table):
    """Apply id (x) phi (x) id where phi acts on slots pos .. pos+in_len-1."""
    word = elem.word
    new_word = word[:pos] + tuple(out_local) + word[pos + in_len:]
    out_len = len(out_local)
    pmask = (1 << pos) - 1
    lmask = (1 << in_len) - 1
    out = {}
    for e, h in elem.coords.items():
        pre = e & pmask
        loc = (e >> pos) & lmask
        suf = e >> (pos + in_len)
        for e_out, g in table[loc].items():
            nb = pre | (e_out << pos) | (suf << (pos + out_len))
            for e2, g2 in _push_left(G, new_word, {nb: g}, pos).items():
                v = h * g2
                out[e2] = out[e2] + v if e2 in out else v
    return BSElement(G, new_word, out)


def leaf_program(G, word, bits, policy="lazy"):
    """Sequence of local steps (kind, letters, pos) and the final target word."""
    target = []
    x = G.e
    steps = []  # each step: list of local ops applied after appending letter i
    for j, i in enumerate(word):
        ops = []
        up = not G.right_descent(x, i)
        b = bits[j]
        cur = target + [i]  # after tensoring with B_s
        if up and b == 1:
            x = G.rmul_gen(x, i)
            if policy == "eager":
                # bubble the new letter left through commuting letters
                p = len(cur) - 1
                while p > 0 and cur[p - 1] != i and G.m[cur[p - 1]][i] == 2 and cur[p - 1] > i:
                    ops.append(("swap", (cur[p - 1], i), p - 1))
                    cur[p - 1], cur[p] = cur[p], cur[p - 1]
                    p -= 1
        elif up:
            ops.append(("dot", (i,), len(cur) - 1))
            cur = cur[:-1]
        else:
            # bring the descent letter of the target to the end of the target word
            p = max(q for q in range(len(target)) if target[q] == i
                    and all(G.m[target[r]][i] == 2 for r in range(q + 1, len(target))))
            for q in range(p, len(target) - 1):
                ops.append(("swap", (i, cur[q + 1]), q))
                cur[q], cur[q + 1] = cur[q + 1], cur[q]
            n = len(cur)
            if b == 0:
                ops.append(("merge", (i, i), n - 2))
                cur = cur[:-1]
            else:
                ops.append(("cap", (i, i), n - 2))
                cur = cur[:-2]
                x = G.rmul_gen(x, i)
        steps.append(ops)
        target = cur
    return steps, tuple(target), x


def light_leaf(G, word, bits, tables, policy="lazy"):
    """ll_{w,e} = LL^*(1(x)) computed by applying adjoint local maps backwards."""
    word = tuple(word)
    steps, target, _ = leaf_program(G, word, bits, policy)
    # element lives on (current target) + word[j+1:]
    elem = one_tensor(G, target)
    for j in range(len(word) - 1, -1, -1):
        for kind, letters, pos in reversed(steps[j]):
            out_w, in_w, table = tables.adjoint(kind, letters)
            elem = apply_local(G, elem, pos, len(out_w), in_w, table)
    if elem.word != word:
        raise AssertionError("leaf construction ended on the wrong word")
    return elem


def light_leaf_forward(G, word, bits, tables, elem, policy="lazy"):
    """LL_{w,e}(elem) for elem in BS(word)."""
    word = tuple(word)
    steps, target, _ = leaf_program(G, word, bits, policy)
    k = len(word)
    # before step j the element lives on target_j + word[j:]
    for j in range(k):
        for kind, letters, pos in steps[j]:
            in_w, out_w, table = tables.forward(kind, letters)
            elem = apply_local(G, elem, pos, len(in_w), out_w, table)
    return elem


def _tables_for(G, shift=0):
    cache = getattr(G, "_ll_tables", None)
    if cache is None:
        cache = G._ll_tables = {}
    t = cache.get(shift)
    if t is None:
        t = cache[shift] = _Tables(G, shift)
    return t


def light_leaves(G, word, policy="lazy", shift=0) -> LightLeafFamily:
    word = G.parse_word(word)
    subs = {_bits_int(s.bits): s for s in G.all_subexpressions(word)}
    full = _letters_ok(G, word)
    tables = _tables_for(G, shift)
    leaves = {}
    for e, sub in subs.items():
        if sub.is_canonical():
            leaves[e] = BSElement.basis(G, word, e)
        elif full:
            leaves[e] = light_leaf(G, word, sub.bits, tables, policy)
    return LightLeafFamily(G, word, leaves, subs, not full)


def leaf(G, word, bits, policy="lazy", shift=0):
    word = G.parse_word(word)
    sub = G.subexpression(word, bits)
    if sub.is_canonical():
        return BSElement.basis(G, word, _bits_int(bits))
    if not _letters_ok(G, word):
        raise Unsupported("non-canonical leaves need m in {2, inf} on the letters of the word")
    return light_leaf(G, word, tuple(bits), _tables_for(G, shift), policy)


def expected_degree(sub):
    return -sub.target.length + sub.defect


def change_of_basis(fam: LightLeafFamily):
    """Rows: leaves in string coordinates (ordered by bits)."""
    G = fam.group
    n = 1 << len(fam.word)
    return [[fam.leaves[e].coeff(f) for f in range(n)] for e in range(n)]


def change_of_basis_det(fam):
    """Determinant of the leaf-to-string matrix; a unit iff the leaves form a basis."""
    k = len(fam.word)
    ldeg = sorted(fam.leaves[e].degree() for e in fam.leaves)
    sdeg = sorted(bits_degree(k, e) for e in range(1 << k))
    if ldeg != sdeg:
        return 0
    return const_det(change_of_basis(fam))


def _poly_matmul(A, B, zero):
    n, m, k = len(A), len(B[0]) if B else 0, len(B)
    out = [[zero] * m for _ in range(n)]
    for i in range(n):
        for l in range(k):
            a = A[i][l]
            if not a:
                continue
            for j in range(m):
                b = B[l][j]
                if b:
                    out[i][j] = out[i][j] + a * b
    return out


def string_gram(G, word):
    n = 1 << len(word)
    return [[basis_form(G, tuple(word), a, b) for b in range(n)] for a in range(n)]


def dual_leaves(fam: LightLeafFamily):
    """ll* with <ll*_e, ll_f> = delta_{e,f}."""
    if fam.canonical_only:
        raise Unsupported("dual leaves need the full family")
    G = fam.group
    word = fam.word
    n = 1 << len(word)
    L = change_of_basis(fam)
    S = string_gram(G, word)
    LT = [list(r) for r in zip(*L)]
    M = _poly_matmul(_poly_matmul(L, S, G.zero()), LT, G.zero())
    degs = [fam.leaves[e].degree() for e in range(n)]
    X = invert_graded_gram(M, degs)
    out = {}
    for e in range(n):
        coords = {}
        for g in range(n):
            if X[e][g]:
                for f, h in fam.leaves[g].coords.items():
                    v = X[e][g] * h
                    coords[f] = coords[f] + v if f in coords else v
        out[e] = BSElement(G, word, coords)
    return out, M, X


def leaf_support_ok(G, fam, e):
    x = fam.subs[e].target
    data = kappa_data(G, fam.word)
    return all(G.bruhat_leq(data[f][0], x) for f in to_kappa_scaled(fam.leaves[e]))


def defective(fam):
    return {e: l for e, l in fam.leaves.items() if not fam.subs[e].is_canonical()}


def orthogonal_check(G, word, fam=None, hw=None):
    """Every P_{w,x} pairs to zero with all non-canonical leaves; ranks add up."""
    from .bimodule import hw_basis
    fam = light_leaves(G, word) if fam is None else fam
    hw = hw_basis(G, word) if hw is None else hw
    D = defective(fam)
    for x, p in hw.items():
        for e, l in D.items():
            if iform(p, l):
                return False
    return len(D) + len(hw) == 1 << len(fam.word)


def gamma_via_leaves(G, word, x, fam=None, duals=None):
    """(basis of Gamma_{<=x}, basis of Gamma_{>=x}) from leaves and dual leaves."""
    fam = light_leaves(G, word) if fam is None else fam
    if duals is None:
        duals = dual_leaves(fam)[0]
    below = [fam.leaves[e] for e, s in fam.subs.items() if G.bruhat_leq(s.target, x)]
    above = [duals[e] for e, s in fam.subs.items() if G.bruhat_leq(x, s.target)]
    return below, above


def evaluation_check(G, word, fam=None, policy="lazy"):
    """Degree-0 part of LL_{w,e}(ll_f) for leaves with equal targets: 1(x) if e=f canonical,
    and 0 when e carries a D."""
    fam = light_leaves(G, word) if fam is None else fam
    tables = _tables_for(G)
    results = []
    for e, sub in fam.subs.items():
        if fam.canonical_only and not sub.is_canonical():
            continue
        img = light_leaf_forward(G, fam.word, sub.bits, tables, one_tensor(G, fam.word), policy)
        tgt_len = len(img.word)
        top = (1 << tgt_len) - 1
        deg0 = img.coeff(top).constant_term() if img.coeff(top).is_constant() else None
        has_d = "D" in sub.decoration
        results.append((e, deg0, has_d))
    return results
