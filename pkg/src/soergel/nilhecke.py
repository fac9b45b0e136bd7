"""The nil-Hecke ring inside the smash product Q_W and the values d_{x,y}."""
from __future__ import annotations

from .polyring import Poly, RatFun


class OracleMismatch(AssertionError):
    pass


class PieriMismatch(AssertionError):
    pass


class QWElement:
    """Finitely supported map W -> RatFun, read as sum f_w delta_w."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group, coeffs=None):
        self.group = group
        self.coeffs = {w: c for w, c in (coeffs or {}).items() if not c.is_zero()}

    @classmethod
    def delta(cls, group, w, f=None):
        f = group.one() if f is None else f
        return cls(group, {w: f if isinstance(f, RatFun) else RatFun.from_poly(f)})

    def __add__(self, other):
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out[w] + c if w in out else c
        return QWElement(self.group, out)

    def __neg__(self):
        return QWElement(self.group, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        """Left multiplication by a polynomial."""
        return QWElement(self.group, {w: c * f for w, c in self.coeffs.items()})

    def __mul__(self, other):
        return qw_multiply(self, other)

    def __eq__(self, other):
        d = self - other
        return all(c.is_zero() for c in d.coeffs.values())

    def coeff(self, w):
        c = self.coeffs.get(w)
        return c if c is not None else RatFun(self.group.zero())

    def __repr__(self):
        items = sorted(self.coeffs.items())
        return " + ".join(f"({c})d[{w}]" for w, c in items) or "0"


def qw_multiply(a: QWElement, b: QWElement) -> QWElement:
    """(f d_x)(g d_y) = f x(g) d_{xy}."""
    G = a.group
    out = {}
    for x, f in a.coeffs.items():
        imgs = G.var_images(x)
        for y, g in b.coeffs.items():
            c = f * g.transform(imgs)
            xy = G.multiply(x, y)
            out[xy] = out[xy] + c if xy in out else c
    return QWElement(G, out)


def _times_Ds(a: QWElement, i) -> QWElement:
    """a * D_s = sum f_w/w(alpha_s) (d_w - d_ws)."""
    G = a.group
    out = {}
    for w, f in a.coeffs.items():
        c = f.div_linear(G.act(w, G.alpha(i)))
        ws = G.rmul_gen(w, i)
        out[w] = out[w] + c if w in out else c
        out[ws] = out[ws] - c if ws in out else -c
    return QWElement(G, out)


def D(group, word) -> QWElement:
    r = QWElement.delta(group, group.e)
    for i in group.parse_word(word):
        r = _times_Ds(r, i)
    return r


def _D_cache(G):
    c = getattr(G, "_nh_D", None)
    if c is None:
        c = G._nh_D = {}
    return c


def D_elem(G, x) -> QWElement:
    """D_x for the normal-form word of x (memoized)."""
    cache = _D_cache(G)
    r = cache.get(x)
    if r is None:
        if not x.word:
            r = QWElement.delta(G, G.e)
        else:
            r = _times_Ds(D_elem(G, G.from_word(x.word[:-1])), x.word[-1])
        cache[x] = r
    return r


def inversion_roots(G, word):
    """beta_j = s_1...s_{j-1}(alpha_{s_j})."""
    out = []
    prefix = G.e
    for i in G.parse_word(word):
        out.append(G.act(prefix, G.alpha(i)))
        prefix = G.rmul_gen(prefix, i)
    return out


def p(G, w) -> Poly:
    r = G.one()
    for b in inversion_roots(G, w.word):
        r = r * b
    return r


def pieri_D(G, w, lam: Poly) -> QWElement:
    """D_w * lam, checked against w(lam) D_w + sum_{v -t-> w} alpha_t^vee(lam) D_v."""
    lhs = D_elem(G, w) * QWElement.delta(G, G.e, lam)
    rhs = D_elem(G, w).scale(G.act(w, lam))
    for v in G.lower_covers(w):
        t = G.multiply(G.inverse(v), w)
        c = G.coroot_eval(G.reflection_coroot(t), lam)
        rhs = rhs + D_elem(G, v).scale(G.one().scale(c))
    if not lhs == rhs:
        raise PieriMismatch(f"w={w}, lambda={lam}")
    return lhs


# d-values


def _memo(G, name):
    c = getattr(G, name, None)
    if c is None:
        c = {}
        setattr(G, name, c)
    return c


def d_subword(G, x, y) -> Poly:
    """Sum over reduced subwords of y's normal word with product x of the products of beta_j."""
    memo = _memo(G, "_nh_dsub")
    key = (x, y)
    r = memo.get(key)
    if r is not None:
        return r
    if not G.bruhat_leq(x, y):
        r = G.zero()
    else:
        word = y.word
        betas = inversion_roots(G, word)
        k, lx = len(word), x.length
        states = {G.e: G.one()}
        for j, i in enumerate(word):
            left = k - j - 1
            nxt = {}
            for u, f in states.items():
                if u.length + left >= lx:
                    nxt[u] = nxt[u] + f if u in nxt else f
                if not G.right_descent(u, i):
                    us = G.rmul_gen(u, i)
                    if us.length <= lx and G.bruhat_leq(us, x):
                        g = f * betas[j]
                        nxt[us] = nxt[us] + g if us in nxt else g
            states = nxt
        r = states.get(x, G.zero())
    memo[key] = r
    return r


def d_triangular_column(G, y):
    """All d_{x,y} for x <= y by expanding delta_y in the D-basis over Q."""
    memo = _memo(G, "_nh_dtri")
    r = memo.get(y)
    if r is not None:
        return r
    resid = QWElement.delta(G, y)
    out = {}
    for x in reversed(G.interval(y)):
        c = resid.coeff(x)
        if c.is_zero():
            out[x] = G.zero()
            continue
        # coefficient of d_x in D_x is (-1)^l(x)/p_x, so a_x = (-1)^l(x) p_x c
        px = p(G, x)
        val = (c * px).to_poly()
        out[x] = val
        a = val if x.length % 2 == 0 else -val
        resid = resid - D_elem(G, x).scale(a)
    if any(not c.is_zero() for c in resid.coeffs.values()):
        raise OracleMismatch(f"residue after expanding delta_{y}")
    memo[y] = out
    return out


def d_triangular(G, x, y) -> Poly:
    if not G.bruhat_leq(x, y):
        return G.zero()
    return d_triangular_column(G, y)[x]


def d(G, x, y, check=False) -> Poly:
    """d_{x,y}; with check the triangular route is computed too and compared."""
    v = d_subword(G, x, y)
    if check:
        w = d_triangular(G, x, y)
        if v != w:
            raise OracleMismatch(f"d({x},{y}): subword {v} vs triangular {w}")
    return v


def s_dot_xi(G, i, w):
    """Coefficients of s.xi^w in the xi-basis."""
    ws = G.rmul_gen(w, i)
    if ws.length > w.length:
        return {w: G.one()}
    out = {w: G.one(), ws: -G.act(w, G.alpha(i))}
    for v in G.upper_covers(ws):
        t = G.multiply(G.inverse(ws), v)
        c = G.coroot_eval(G.reflection_coroot(t), G.alpha(i))
        out[v] = out.get(v, G.zero()) - G.one().scale(c)
    return {v: c for v, c in out.items() if not c.is_zero()}
