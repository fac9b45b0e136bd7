"""Sections of the structure algebra on finite supports and the P-basis."""
from __future__ import annotations

from gmpy2 import mpq

from .nilhecke import d, inversion_roots, s_dot_xi
from .polyring import Poly


class NotInSpan(ArithmeticError):
    pass


class SupportTooSmall(ValueError):
    pass


class SupportNotStable(ValueError):
    pass


class DivisionFailure(ArithmeticError):
    pass


class Section:
    """A map v -> Poly on a finite support."""

    __slots__ = ("group", "support", "values")

    def __init__(self, group, values):
        self.group = group
        self.values = dict(values)
        self.support = sorted(self.values)

    def __getitem__(self, v):
        return self.values[v]

    def _check(self, other):
        if set(self.values) != set(other.values):
            raise ValueError("sections on different supports")

    def __add__(self, other):
        self._check(other)
        return Section(self.group, {v: f + other.values[v] for v, f in self.values.items()})

    def __sub__(self, other):
        self._check(other)
        return Section(self.group, {v: f - other.values[v] for v, f in self.values.items()})

    def __neg__(self):
        return Section(self.group, {v: -f for v, f in self.values.items()})

    def __mul__(self, other):
        """Pointwise product with a section, or left multiplication by a polynomial."""
        if isinstance(other, Section):
            self._check(other)
            return Section(self.group, {v: f * other.values[v] for v, f in self.values.items()})
        return Section(self.group, {v: f * other for v, f in self.values.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Section) and self.values == other.values

    def is_zero(self):
        return all(f.is_zero() for f in self.values.values())

    def restrict(self, omega):
        return Section(self.group, {v: self.values[v] for v in omega})

    def degree(self):
        ds = {f.degree() for f in self.values.values() if not f.is_zero()}
        if len(ds) > 1:
            raise ValueError("section is not homogeneous")
        return ds.pop() if ds else -1

    def to_json(self):
        return {v.name(): f.to_json() for v, f in sorted(self.values.items())}

    def __repr__(self):
        return "{" + ", ".join(f"{v}: {f}" for v, f in sorted(self.values.items())) + "}"


def constant(G, omega, f=None):
    f = G.one() if f is None else f
    return Section(G, {v: f for v in omega})


def P(G, x, omega) -> Section:
    return Section(G, {v: d(G, x, v) for v in omega})


def validate_gkm(z: Section) -> bool:
    G = z.group
    for v, u, t in G.moment_edges(z.support):
        diff = z.values[v] - z.values[u]
        if diff and diff.divide_linear(G.reflection_root(t)) is None:
            return False
    return True


def divide_by_p(G, f, x):
    q = f
    for b in inversion_roots(G, x.word):
        q = q.divide_linear(b)
        if q is None:
            return None
    return q


def straighten(z: Section) -> dict:
    """Coefficients c_x with z = sum c_x P_x on the support (greedy, Bruhat-refining order)."""
    G = z.group
    resid = dict(z.values)
    out = {}
    for v in z.support:
        f = resid[v]
        if f.is_zero():
            continue
        c = divide_by_p(G, f, v)
        if c is None:
            raise NotInSpan(f"value at {v} not divisible by p_{v}")
        out[v] = c
        for u in z.support:
            if u.length >= v.length and G.bruhat_leq(v, u):
                dv = d(G, v, u)
                if dv:
                    resid[u] = resid[u] - c * dv
    return out


def combine(G, coeffs, omega) -> Section:
    z = constant(G, omega, G.zero())
    for x, c in coeffs.items():
        z = z + P(G, x, omega) * c
    return z


def w_act(x, z: Section) -> Section:
    """(x.z)_v = z_{vx}."""
    G = z.group
    out = {}
    for v in z.support:
        vx = G.multiply(v, x)
        if vx not in z.values:
            raise SupportNotStable(f"{v}{x} outside the support")
        out[v] = z.values[vx]
    return Section(G, out)


def right_mul(z: Section, f: Poly) -> Section:
    """(z.f)_v = v(f) z_v."""
    G = z.group
    return Section(G, {v: G.act(v, f) * g for v, g in z.values.items()})


def pieri_omega(G, w):
    covers = G.upper_covers(w)
    om = set(G.interval(w))
    for c in covers:
        om.update(G.interval(c))
    return sorted(om)


def pieri_Z(G, w, lam: Poly, omega=None):
    """Expansion of P_w . lam, with edge coefficients compared to the Demazure values."""
    covers = G.upper_covers(w)
    if omega is None:
        omega = pieri_omega(G, w)
    if not set(covers) <= set(omega):
        raise SupportTooSmall("support must contain the upper covers of w")
    z = right_mul(P(G, w, omega), lam)
    coeffs = straighten(z)
    lead = coeffs.get(w, G.zero())
    extra = set(coeffs) - set(covers) - {w}
    signs = {}
    for v in covers:
        t = G.multiply(G.inverse(w), v)
        dt = G.demazure(t, lam)
        c = coeffs.get(v, G.zero())
        if dt.is_zero():
            signs[v] = 0 if c.is_zero() else None
        elif c.is_constant() and not c.is_zero():
            r = c.constant_term() / dt.constant_term()
            signs[v] = int(r) if r in (1, -1) else None
        else:
            signs[v] = None
    return {
        "coeffs": coeffs,
        "support_ok": not extra,
        "leading_ok": lead == G.act(w, lam),
        "signs": signs,
    }


def varpi(G, i, shift=None) -> Poly:
    """varpi_s = alpha_s/2, optionally plus a vector in the kernel of alpha_s^vee."""
    w = G.alpha(i).scale(mpq(1, 2))
    if shift is not None:
        w = w + shift
    return w


def tau(G, i, omega, pi=None) -> Section:
    pi = varpi(G, i) if pi is None else pi
    return Section(G, {v: G.act(v, pi) for v in omega})


def s_split(z: Section, i, pi=None):
    """(a, b) s-invariant with z = a + b tau_s."""
    G = z.group
    b = {}
    for v in z.support:
        vs = G.rmul_gen(v, i)
        if vs not in z.values:
            raise SupportNotStable(f"{v} s outside the support")
        q = (z.values[v] - z.values[vs]).divide_linear(G.act(v, G.alpha(i)))
        if q is None:
            raise DivisionFailure(f"at {v}")
        b[v] = q
    b = Section(G, b)
    a = z - b * tau(G, i, z.support, pi)
    for v in z.support:
        vs = G.rmul_gen(v, i)
        if a.values[v] != a.values[vs] or b.values[v] != b.values[vs]:
            raise DivisionFailure("split is not s-invariant")
    return a, b


def quotient_Zw(G, w):
    """Structure constants of Z_w in the basis P_x (x <= w)."""
    omega = G.interval(w)
    Ps = {x: P(G, x, omega) for x in omega}
    table = {}
    for a, u in enumerate(omega):
        for v in omega[a:]:
            c = straighten(Ps[u] * Ps[v])
            table[(u, v)] = c
            table[(v, u)] = c
    return {"basis": omega, "table": table}


def zbar_structure(G, omega):
    """P_u P_v = sum c P_x in Zbar (rational constants in matching degree)."""
    omega = sorted(omega)
    Ps = {x: P(G, x, omega) for x in omega}
    table = {}
    for a, u in enumerate(omega):
        for v in omega[a:]:
            c = straighten(Ps[u] * Ps[v])
            n = u.length + v.length
            r = {x: f.constant_term() for x, f in c.items() if x.length == n and f.constant_term()}
            table[(u, v)] = r
            table[(v, u)] = r
    return table


def s_action_via_sections(G, i, w, omega):
    """Straightened s.P_w on an s-stable support (compare with s_dot_xi)."""
    return straighten(w_act(G.gens[i], P(G, w, omega)))


def s_action_via_xi(G, i, w):
    return s_dot_xi(G, i, w)


def zbar_P_split(G, x, i):
    """Closed form of the split of P_x mod R_+ : (abar, bbar) as {v: rational}."""
    xs = G.rmul_gen(x, i)
    if xs.length > x.length:
        return {x: mpq(1)}, {}
    half = mpq(1, 2)
    a = {}
    for v in G.upper_covers(xs):
        if v is x:
            continue
        t = G.multiply(G.inverse(xs), v)
        c = G.coroot_eval(G.reflection_coroot(t), G.alpha(i)) * half
        a[v] = a.get(v, mpq(0)) - c
    return {v: c for v, c in a.items() if c}, {xs: mpq(-1)}
