"""Bott-Samelson bimodules in the string basis.

Coordinates are indexed by ints: bit i describes slot i of the word, with
bit 1 meaning 1(x)1 (degree -1) and bit 0 meaning c_s (degree +1).  The
localized basis uses kappa_f, where slot i is c~_s if bit i of f is set and
c_s otherwise.
"""
from __future__ import annotations

from gmpy2 import mpq

from . import linalg
from .polyring import DenominatorNotCleared, Poly, RatFun, monomials_of_degree
from .structure import P, Section, s_split, varpi


class WordMismatch(ValueError):
    pass


class NotInHw(ArithmeticError):
    pass


def popcount(e):
    return bin(e).count("1")


def bits_str(e, k):
    return "".join(str((e >> i) & 1) for i in range(k))


def parse_bits(s):
    return sum(1 << i for i, ch in enumerate(s) if ch == "1")


def bits_degree(k, e):
    return k - 2 * popcount(e)


class BSElement:
    __slots__ = ("group", "word", "coords")

    def __init__(self, group, word, coords=None):
        self.group = group
        self.word = tuple(word)
        self.coords = {e: f for e, f in (coords or {}).items() if not f.is_zero()}

    @property
    def k(self):
        return len(self.word)

    @classmethod
    def basis(cls, G, word, e, f=None):
        return cls(G, G.parse_word(word), {e: G.one() if f is None else f})

    def _check(self, other):
        if self.word != other.word:
            raise WordMismatch(f"{self.word} vs {other.word}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coords)
        for e, f in other.coords.items():
            out[e] = out[e] + f if e in out else f
        return BSElement(self.group, self.word, out)

    def __neg__(self):
        return BSElement(self.group, self.word, {e: -f for e, f in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def lscale(self, f):
        """Left multiplication by a polynomial or scalar."""
        if not isinstance(f, Poly):
            return BSElement(self.group, self.word, {e: h.scale(f) for e, h in self.coords.items()})
        return BSElement(self.group, self.word, {e: f * h for e, h in self.coords.items()})

    def __mul__(self, other):
        if isinstance(other, BSElement):
            return bs_multiply(self, other)
        return right_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, BSElement) and self.word == other.word and self.coords == other.coords

    def __hash__(self):
        return hash((self.word, frozenset(self.coords.items())))

    def is_zero(self):
        return not self.coords

    def coeff(self, e):
        return self.coords.get(e, self.group.zero())

    def degrees(self):
        out = set()
        for e, f in self.coords.items():
            for m in f.terms:
                out.add(Poly(f.n, {m: f.terms[m]}).degree() + bits_degree(self.k, e))
        return out

    def degree(self):
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError(f"not homogeneous: degrees {sorted(ds)}")
        return ds.pop()

    def augment(self):
        """Image in k (x) BS: rational coordinates."""
        return {e: f.constant_term() for e, f in self.coords.items() if f.constant_term()}

    def to_json(self):
        return {bits_str(e, self.k): str(f) for e, f in sorted(self.coords.items())}

    def __repr__(self):
        if not self.coords:
            return "0"
        return " + ".join(f"({f})c[{bits_str(e, self.k)}]" for e, f in sorted(self.coords.items()))


def one_tensor(G, word):
    word = G.parse_word(word)
    return BSElement.basis(G, word, (1 << len(word)) - 1)


def c_top(G, word):
    return BSElement.basis(G, G.parse_word(word), 0)


# right action


def _push_left(G, word, states, upto):
    """Move left coefficients sitting just left of slot `upto` through slots upto-1 .. 0.

    states: dict bits -> Poly (coefficient placed at that junction).
    """
    for j in range(upto - 1, -1, -1):
        i = word[j]
        bit = 1 << j
        nxt = {}
        for e, g in states.items():
            if e & bit:
                sg = G.act(G.gens[i], g)
                dg = (g - sg).exact_div_linear(G.alpha(i))
                if sg:
                    nxt[e] = nxt[e] + sg if e in nxt else sg
                if dg:
                    e2 = e & ~bit
                    nxt[e2] = nxt[e2] - dg if e2 in nxt else -dg
            else:
                nxt[e] = nxt[e] + g if e in nxt else g
        states = {e: g for e, g in nxt.items() if g}
    return states


def right_mul(b: BSElement, f) -> BSElement:
    G = b.group
    if not isinstance(f, Poly):
        return b.lscale(f)
    if f.is_constant():
        return b.lscale(f.constant_term())
    out = {}
    for e, h in b.coords.items():
        for e2, g in _push_left(G, b.word, {e: f}, b.k).items():
            v = h * g
            out[e2] = out[e2] + v if e2 in out else v
    return BSElement(G, b.word, out)


# componentwise product


def _basis_product(G, word, e, f):
    cache = getattr(G, "_bs_prod", None)
    if cache is None:
        cache = G._bs_prod = {}
    key = (word, e, f) if e <= f else (word, f, e)
    r = cache.get(key)
    if r is not None:
        return r
    k = len(word)
    both0 = [j for j in range(k) if not (e >> j) & 1 and not (f >> j) & 1]
    states = {e & f: G.one()}
    for j in both0:
        new = {}
        for bits, h in states.items():
            for b2, g in _push_left(G, word, {bits: -G.alpha(word[j])}, j).items():
                v = h * g
                new[b2] = new[b2] + v if b2 in new else v
        states = {b: v for b, v in new.items() if v}
    cache[key] = states
    return states


def bs_multiply(a: BSElement, b: BSElement) -> BSElement:
    a._check(b)
    G = a.group
    out = {}
    for e, h1 in a.coords.items():
        for f, h2 in b.coords.items():
            h = h1 * h2
            for e2, g in _basis_product(G, a.word, e, f).items():
                v = h * g
                out[e2] = out[e2] + v if e2 in out else v
    return BSElement(G, a.word, out)


def trace(b: BSElement) -> Poly:
    return b.coeff(0)


def basis_form(G, word, e, f) -> Poly:
    return _basis_product(G, tuple(word), e, f).get(0, G.zero())


def iform(a: BSElement, b: BSElement) -> Poly:
    a._check(b)
    G = a.group
    total = G.zero()
    for e, h1 in a.coords.items():
        for f, h2 in b.coords.items():
            g = basis_form(G, a.word, e, f)
            if g:
                total = total + h1 * h2 * g
    return total


def gram(G, word, elems_a, elems_b=None):
    elems_b = elems_a if elems_b is None else elems_b
    return [[iform(a, b) for b in elems_b] for a in elems_a]


# localized (kappa) coordinates


def word_targets(G, word):
    """All targets of subexpressions of the word (a lower interval)."""
    T = {G.e}
    for i in G.parse_word(word):
        T |= {G.rmul_gen(x, i) for x in T}
    return sorted(T)


def kappa_data(G, word):
    """For each f: (target w^f, [beta_i(f)]) with beta_i(f) = x_{f,<i}(alpha_{s_i})."""
    cache = getattr(G, "_bs_kappa", None)
    if cache is None:
        cache = G._bs_kappa = {}
    word = tuple(word)
    r = cache.get(word)
    if r is None:
        k = len(word)
        r = []
        for f in range(1 << k):
            x = G.e
            betas = []
            for j, i in enumerate(word):
                betas.append(G.act(x, G.alpha(i)))
                if (f >> j) & 1:
                    x = G.rmul_gen(x, i)
            r.append((x, betas))
        cache[word] = r
    return r


def _subsets_above(f, full):
    """All e with f subset of e subset of full."""
    free = full & ~f
    sub = free
    while True:
        yield f | sub
        if sub == 0:
            break
        sub = (sub - 1) & free


def to_kappa_scaled(b: BSElement):
    """Q_f = D_f * q_f with D_f the product of all beta_i(f); always polynomial."""
    G = b.group
    k = b.k
    data = kappa_data(G, b.word)
    full = (1 << k) - 1
    out = {}
    for f in range(1 << k):
        _, betas = data[f]
        acc = G.zero()
        for e in _subsets_above(f, full):
            h = b.coords.get(e)
            if h is None:
                continue
            term = h
            for i in range(k):
                if not (e >> i) & 1:
                    term = term * betas[i]
            if popcount(e & ~f) % 2:
                acc = acc - term
            else:
                acc = acc + term
        if acc:
            out[f] = acc
    return out


def from_kappa_scaled(G, word, Q) -> BSElement:
    word = tuple(word)
    k = len(word)
    data = kappa_data(G, word)
    full = (1 << k) - 1
    h = {}
    for f in sorted(range(1 << k), key=lambda e: -popcount(e)):
        _, betas = data[f]
        acc = Q.get(f, G.zero())
        for e in _subsets_above(f, full):
            if e == f or e not in h:
                continue
            term = h[e]
            for i in range(k):
                if not (e >> i) & 1:
                    term = term * betas[i]
            if popcount(e & ~f) % 2:
                acc = acc + term
            else:
                acc = acc - term
        for i in range(k):
            if not (f >> i) & 1 and acc:
                q = acc.divide_linear(betas[i])
                if q is None:
                    raise DenominatorNotCleared(f"slot {i} of kappa coordinate {bits_str(f, k)}")
                acc = q
        if acc:
            h[f] = acc
    return BSElement(G, word, h)


class QBSElement:
    """kappa coordinates with rational-function coefficients."""

    __slots__ = ("group", "word", "coords")

    def __init__(self, group, word, coords):
        self.group = group
        self.word = tuple(word)
        self.coords = {f: c for f, c in coords.items() if not c.is_zero()}

    def component(self, x):
        data = kappa_data(self.group, self.word)
        return {f: c for f, c in self.coords.items() if data[f][0] is x}

    def __repr__(self):
        k = len(self.word)
        return " + ".join(f"({c})k[{bits_str(f, k)}]" for f, c in sorted(self.coords.items())) or "0"


def to_kappa(b: BSElement) -> QBSElement:
    G = b.group
    data = kappa_data(G, b.word)
    out = {}
    for f, Qf in to_kappa_scaled(b).items():
        r = RatFun.from_poly(Qf)
        for beta in data[f][1]:
            r = r.div_linear(beta)
        out[f] = r
    return QBSElement(G, b.word, out)


def from_kappa(q: QBSElement) -> BSElement:
    G = q.group
    data = kappa_data(G, q.word)
    Q = {}
    for f, c in q.coords.items():
        r = c
        for beta in data[f][1]:
            r = r * beta
        Q[f] = r.to_poly()
    return from_kappa_scaled(G, q.word, Q)


def support(b: BSElement):
    data = kappa_data(b.group, b.word)
    return sorted({data[f][0] for f in to_kappa_scaled(b)})


# Z-action


def _section_value(z, x):
    if isinstance(z, Section):
        return z.values[x]
    return z[x]


def z_act_kappa(z, b: BSElement) -> BSElement:
    """Multiply each localized component by the value of z at its index."""
    G = b.group
    data = kappa_data(G, b.word)
    Q = {}
    for f, Qf in to_kappa_scaled(b).items():
        zx = _section_value(z, data[f][0])
        if zx:
            Q[f] = zx * Qf
    return from_kappa_scaled(G, b.word, Q)


def _split_word_elem(b: BSElement):
    """(M0, M1) in BS(prefix) with b = M0 (x) c_s + M1 (x) 1(x)1 in the last slot."""
    k = b.k
    top = 1 << (k - 1)
    m0, m1 = {}, {}
    for e, f in b.coords.items():
        if e & top:
            m1[e & ~top] = f
        else:
            m0[e] = f
    w = b.word[:-1]
    return BSElement(b.group, w, m0), BSElement(b.group, w, m1)


def _join_word_elem(G, word, m0: BSElement, m1: BSElement):
    top = 1 << (len(word) - 1)
    out = dict(m0.coords)
    for e, f in m1.coords.items():
        out[e | top] = f
    return BSElement(G, word, out)


def z_act_fast(z: Section, b: BSElement, pi_choice=None) -> BSElement:
    """Z-action by recursion on the last letter, splitting z over Z^s."""
    G = b.group
    if b.k == 0:
        return b.lscale(z.values[G.e])
    T = word_targets(G, b.word)
    zr = z.restrict(T)
    i = b.word[-1]
    pi = varpi(G, i) if pi_choice is None else pi_choice(i)
    a, bb = s_split(zr, i, pi)
    Tp = word_targets(G, b.word[:-1])
    a, bb = a.restrict(Tp), bb.restrict(Tp)
    M0, M1 = _split_word_elem(b)
    aM0, aM1 = z_act_fast(a, M0, pi_choice), z_act_fast(a, M1, pi_choice)
    bM0, bM1 = z_act_fast(bb, M0, pi_choice), z_act_fast(bb, M1, pi_choice)
    spi = G.act(G.gens[i], pi)
    n0 = aM0 + right_mul(bM0, pi) - bM1
    n1 = aM1 + right_mul(bM1, spi)
    return _join_word_elem(G, b.word, n0, n1)


def z_act(z: Section, b: BSElement, check=False) -> BSElement:
    r = z_act_kappa(z, b)
    if check:
        r2 = z_act_fast(z, b)
        if r != r2:
            raise AssertionError("Z-action routes disagree")
    return r


# cohomology submodule


def hw_basis(G, word, route="kappa"):
    """P_{w,x} = P_x . 1(x) for all x below the Demazure product of the word."""
    word = G.parse_word(word)
    T = word_targets(G, word)
    one = one_tensor(G, word)
    out = {}
    for x in T:
        z = P(G, x, T)
        if route == "fast":
            out[x] = z_act_fast(z, one)
        else:
            out[x] = z_act_kappa(z, one)
    return out


def canonical_leaf(G, word, x):
    """The string element c_{can_x}: 1(x)1 at used slots, c_s at skipped slots."""
    sub = G.canonical_subexpression(word, x)
    e = sum(1 << j for j, bit in enumerate(sub.bits) if bit)
    return BSElement.basis(G, word, e)


def hw_graded_rank(G, word, basis=None):
    """Graded rank of span{P_{w,x}} as Laurent dict, after checking freeness.

    Freeness is witnessed by the pairing matrix against the canonical leaves,
    which must be the identity.
    """
    word = G.parse_word(word)
    basis = hw_basis(G, word) if basis is None else basis
    xs = sorted(basis)
    for x in xs:
        for y in xs:
            val = iform(basis[x], canonical_leaf(G, word, y))
            want = G.one() if x is y else G.zero()
            if val != want:
                raise NotInHw(f"<P_{x}, c_can_{y}> = {val}")
    rk = {}
    for x in xs:
        dg = basis[x].degree()
        rk[dg] = rk.get(dg, 0) + 1
    return rk


def expected_hw_rank(G, word):
    word = G.parse_word(word)
    rk = {}
    for x in word_targets(G, word):
        dg = 2 * x.length - len(word)
        rk[dg] = rk.get(dg, 0) + 1
    return rk


def expand_in_hw(G, word, elem: BSElement, basis=None):
    """Coefficients c_x in R with elem = sum c_x P_{w,x} (pairing with canonical leaves)."""
    basis = hw_basis(G, word) if basis is None else basis
    coeffs = {}
    for x in basis:
        c = iform(elem, canonical_leaf(G, word, x))
        if c:
            coeffs[x] = c
    recon = BSElement(G, elem.word)
    for x, c in coeffs.items():
        recon = recon + basis[x].lscale(c)
    if recon != elem:
        raise NotInHw("element is not in the span of the P_{w,x}")
    return coeffs


def pieri_BS(G, word, x, lam, basis=None):
    word = G.parse_word(word)
    basis = hw_basis(G, word) if basis is None else basis
    elem = right_mul(basis[x], lam)
    coeffs = expand_in_hw(G, word, elem, basis)
    covers = [y for y in G.upper_covers(x) if y in basis]
    extra = set(coeffs) - set(covers) - {x}
    signs = {}
    for y in covers:
        t = G.multiply(G.inverse(x), y)
        dt = G.demazure(t, lam)
        c = coeffs.get(y, G.zero())
        if dt.is_zero():
            signs[y] = 0 if c.is_zero() else None
        elif c.is_constant() and c:
            r = c.constant_term() / dt.constant_term()
            signs[y] = int(r) if r in (1, -1) else None
        else:
            signs[y] = None
    return {"coeffs": coeffs, "support_ok": not extra,
            "leading_ok": coeffs.get(x, G.zero()) == G.act(x, lam), "signs": signs}


# support filtration


def gamma(G, A, word, d):
    """Q-basis of the degree-d part of Gamma_A BS(word) (elements with kappa support in A)."""
    word = G.parse_word(word)
    k = len(word)
    A = set(A)
    data = kappa_data(G, word)
    unknowns = []
    for e in range(1 << k):
        rest = d - bits_degree(k, e)
        if rest < 0 or rest % 2:
            continue
        for m in monomials_of_degree(G.dim, rest // 2):
            unknowns.append((e, m))
    if not unknowns:
        return []
    bad = [f for f in range(1 << k) if data[f][0] not in A]
    rows = {}
    for col, (e, m) in enumerate(unknowns):
        mono = Poly(G.dim, {m: mpq(1)})
        b = BSElement(G, word, {e: mono})
        Q = to_kappa_scaled(b)
        for f in bad:
            Qf = Q.get(f)
            if Qf is None:
                continue
            for mm, c in Qf.terms.items():
                rows.setdefault((f, mm), {})[col] = c
    basis = linalg.nullspace(list(rows.values()), len(unknowns))
    out = []
    for vec in basis:
        coords = {}
        for (e, m), c in zip(unknowns, vec):
            if c:
                coords[e] = coords.get(e, G.zero()) + Poly(G.dim, {m: c})
        out.append(BSElement(G, word, coords))
    return out
