"""Hecke algebra over Z[v, v^-1]: standard basis, bar involution, KL basis, pairing."""
from __future__ import annotations

# Laurent polynomials are dicts exponent -> nonzero int


def lp_clean(a):
    return {k: c for k, c in a.items() if c}


def lp_add(a, b):
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + c
    return lp_clean(out)


def lp_neg(a):
    return {k: -c for k, c in a.items()}


def lp_mul(a, b):
    out = {}
    for i, c in a.items():
        for j, e in b.items():
            out[i + j] = out.get(i + j, 0) + c * e
    return lp_clean(out)


def lp_bar(a):
    return {-k: c for k, c in a.items()}


def lp_str(a):
    if not a:
        return "0"
    parts = []
    for k in sorted(a):
        c = a[k]
        if k == 0:
            mono = ""
        elif k == 1:
            mono = "v"
        else:
            mono = f"v^{k}"
        if not mono:
            term = str(c)
        elif c == 1:
            term = mono
        elif c == -1:
            term = "-" + mono
        else:
            term = f"{c}{mono}" if mono else str(c)
        parts.append(term)
    out = parts[0]
    for t in parts[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def lp_eval_dims(a):
    """Total dimension (value at v = 1)."""
    return sum(a.values())


ONE = {0: 1}
V = {1: 1}
VINV = {-1: 1}


class HeckeElement:
    __slots__ = ("group", "coeffs")

    def __init__(self, group, coeffs=None):
        self.group = group
        self.coeffs = {w: lp_clean(c) for w, c in (coeffs or {}).items() if lp_clean(c)}

    @classmethod
    def H(cls, group, w, c=None):
        return cls(group, {w: dict(c or ONE)})

    def __add__(self, other):
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = lp_add(out.get(w, {}), c)
        return HeckeElement(self.group, out)

    def __neg__(self):
        return HeckeElement(self.group, {w: lp_neg(c) for w, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, lp):
        return HeckeElement(self.group, {w: lp_mul(c, lp) for w, c in self.coeffs.items()})

    def __mul__(self, other):
        return h_multiply(self, other)

    def __eq__(self, other):
        return isinstance(other, HeckeElement) and self.coeffs == other.coeffs

    def coeff(self, w):
        return self.coeffs.get(w, {})

    def to_json(self):
        return {w.name(): lp_str(c) for w, c in sorted(self.coeffs.items())}

    def __repr__(self):
        return " + ".join(f"({lp_str(c)})H[{w}]" for w, c in sorted(self.coeffs.items())) or "0"


def _times_Hs(a: HeckeElement, i) -> HeckeElement:
    G = a.group
    out = {}
    for w, c in a.coeffs.items():
        ws = G.rmul_gen(w, i)
        out[ws] = lp_add(out.get(ws, {}), c)
        if ws.length < w.length:
            out[w] = lp_add(out.get(w, {}), lp_mul(c, {-1: 1, 1: -1}))
    return HeckeElement(G, out)


def h_multiply(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    G = a.group
    total = HeckeElement(G)
    for y, c in b.coeffs.items():
        r = a
        for i in y.word:
            r = _times_Hs(r, i)
        total = total + r.scale(c)
    return total


def _bar_H(G, w):
    cache = getattr(G, "_hk_bar", None)
    if cache is None:
        cache = G._hk_bar = {}
    r = cache.get(w)
    if r is None:
        if not w.word:
            r = HeckeElement.H(G, G.e)
        else:
            prev = _bar_H(G, G.from_word(w.word[:-1]))
            i = w.word[-1]
            r = _times_Hs(prev, i) + prev.scale({1: 1, -1: -1})
        cache[w] = r
    return r


def bar(a: HeckeElement) -> HeckeElement:
    G = a.group
    total = HeckeElement(G)
    for w, c in a.coeffs.items():
        total = total + _bar_H(G, w).scale(lp_bar(c))
    return total


def b_s(G, i):
    return HeckeElement(G, {G.gens[i]: ONE, G.e: V})


def bs_character(G, word) -> HeckeElement:
    r = HeckeElement.H(G, G.e)
    for i in G.parse_word(word):
        r = r * b_s(G, i)
    return r


def kl_basis(G, w) -> HeckeElement:
    cache = getattr(G, "_hk_kl", None)
    if cache is None:
        cache = G._hk_kl = {}
    r = cache.get(w)
    if r is not None:
        return r
    if not w.word:
        r = HeckeElement.H(G, G.e)
    else:
        i = w.word[-1]
        wp = G.rmul_gen(w, i)
        bwp = kl_basis(G, wp)
        r = bwp * b_s(G, i)
        for y, c in bwp.coeffs.items():
            if y is wp:
                continue
            mu = c.get(1, 0)
            if mu and G.right_descent(y, i):
                r = r - kl_basis(G, y).scale({0: mu})
    cache[w] = r
    return r


def kl_poly(G, x, w):
    """h_{x,w}, the coefficient of H_x in the KL basis element of w."""
    return kl_basis(G, w).coeff(x)


def pairing(a: HeckeElement, b: HeckeElement):
    """(H_x, H_y) = delta_{x,y}, bilinear over Z[v, v^-1]."""
    out = {}
    for w, c in a.coeffs.items():
        d = b.coeffs.get(w)
        if d:
            out = lp_add(out, lp_mul(c, d))
    return out


def self_dual_pairing(a: HeckeElement, b: HeckeElement):
    """Sum c_x d_x; equals pairing(bar a, b) when a is bar invariant."""
    if bar(a) != a:
        raise ValueError("first argument is not bar invariant")
    return pairing(a, b)


def hom_prediction(G, u, v):
    """Graded dimension predicted for Hom(BS(u), BS(v)) over Zbar."""
    return pairing(bar(bs_character(G, u)), bs_character(G, v))
