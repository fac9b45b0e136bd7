"""Graded polynomials over Q in the coordinates of a realization.

Monomials are packed into a single int, eight bits per exponent, with the
first variable in the highest bits, so integer order is lexicographic order
on exponent vectors.  Every variable has degree 2.
"""
from __future__ import annotations

from collections import Counter

from gmpy2 import mpq

BITS = 8
MASK = (1 << BITS) - 1

ZERO = mpq(0)
ONE = mpq(1)


class InternalDivisionFailure(ArithmeticError):
    """An exact division that must succeed did not."""


class DenominatorNotCleared(ArithmeticError):
    pass


def _shift(n, i):
    return (n - 1 - i) * BITS


def unpack(n, m):
    return tuple((m >> _shift(n, i)) & MASK for i in range(n))


def pack(exps):
    n = len(exps)
    m = 0
    for i, e in enumerate(exps):
        if e > MASK:
            raise OverflowError("exponent too large")
        m |= e << _shift(n, i)
    return m


def _mdeg(n, m):
    d = 0
    while m:
        d += m & MASK
        m >>= BITS
    return d


def as_mpq(c):
    if isinstance(c, str):
        if "/" in c:
            p, q = c.split("/")
            return mpq(int(p), int(q))
        return mpq(int(c))
    return mpq(c)


def qstr(c):
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Poly:
    """Sparse polynomial: packed monomial -> nonzero mpq."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms = terms if terms is not None else {}
        self._hash = None

    # constructors
    @classmethod
    def const(cls, n, c):
        c = mpq(c)
        return cls(n, {0: c} if c else {})

    @classmethod
    def var(cls, n, i):
        return cls(n, {1 << _shift(n, i): ONE})

    @classmethod
    def linear(cls, coeffs):
        n = len(coeffs)
        t = {}
        for i, c in enumerate(coeffs):
            c = mpq(c)
            if c:
                t[1 << _shift(n, i)] = c
        return cls(n, t)

    @classmethod
    def from_dict(cls, n, d):
        """Build from {exponent tuple: coefficient}."""
        t = {}
        for e, c in d.items():
            c = as_mpq(c)
            if c:
                m = pack(e)
                t[m] = t.get(m, ZERO) + c
        return cls(n, {m: c for m, c in t.items() if c})

    def zero(self):
        return Poly(self.n)

    def one(self):
        return Poly.const(self.n, 1)

    # predicates
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, type(ONE))):
            return self.terms == ({0: mpq(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        return Poly.const(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m)
            if v is None:
                t[m] = c
            else:
                v = v + c
                if v:
                    t[m] = v
                else:
                    del t[m]
        return Poly(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = mpq(c)
        if not c:
            return Poly(self.n)
        return Poly(self.n, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        if not self.terms or not other.terms:
            return Poly(self.n)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (mb, cb), = b.items()
            return Poly(self.n, {m + mb: c * cb for m, c in a.items()})
        t = {}
        get = t.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = ma + mb
                t[m] = get(m, ZERO) + ca * cb
        return Poly(self.n, {m: c for m, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k):
        r = self.one()
        for _ in range(k):
            r = r * self
        return r

    # grading
    def degree(self):
        """Degree with deg(V) = 2; the zero polynomial has degree -1."""
        if not self.terms:
            return -1
        return 2 * max(_mdeg(self.n, m) for m in self.terms)

    def is_homogeneous(self):
        ds = {_mdeg(self.n, m) for m in self.terms}
        return len(ds) <= 1

    def homogeneous_part(self, d):
        return Poly(self.n, {m: c for m, c in self.terms.items() if 2 * _mdeg(self.n, m) == d})

    def constant_term(self):
        return self.terms.get(0, ZERO)

    def linear_coeffs(self):
        out = [ZERO] * self.n
        for i in range(self.n):
            out[i] = self.terms.get(1 << _shift(self.n, i), ZERO)
        return tuple(out)

    def monomials(self):
        return sorted(self.terms)

    def coeff(self, exps):
        return self.terms.get(pack(exps), ZERO)

    # substitution
    def transform(self, images):
        """Substitute x_i -> images[i] (linear forms); ring homomorphism."""
        if not self.terms:
            return self
        n = self.n
        cache = {}
        out = Poly(n)
        acc = {}
        for m, c in self.terms.items():
            prod = None
            for i in range(n):
                e = (m >> _shift(n, i)) & MASK
                if e:
                    key = (i, e)
                    p = cache.get(key)
                    if p is None:
                        p = images[i] ** e
                        cache[key] = p
                    prod = p if prod is None else prod * p
            if prod is None:
                acc[0] = acc.get(0, ZERO) + c
            else:
                for mm, cc in prod.terms.items():
                    acc[mm] = acc.get(mm, ZERO) + c * cc
        out.terms = {m: c for m, c in acc.items() if c}
        return out

    # division by a linear form
    def divide_linear(self, lin: "Poly"):
        """Exact quotient by a nonzero linear form, or None if not divisible."""
        if not self.terms:
            return Poly(self.n)
        lead = max(lin.terms)
        lc = lin.terms[lead]
        f = dict(self.terms)
        q = {}
        while f:
            m = max(f)
            c = f[m]
            if (m & _field_mask(self.n, lead)) < lead:
                return None
            mq = m - lead
            cq = c / lc
            q[mq] = cq
            for ml, cl in lin.terms.items():
                mm = mq + ml
                v = f.get(mm, ZERO) - cq * cl
                if v:
                    f[mm] = v
                else:
                    f.pop(mm, None)
        return Poly(self.n, q)

    def exact_div_linear(self, lin):
        q = self.divide_linear(lin)
        if q is None:
            raise InternalDivisionFailure(f"{self} not divisible by {lin}")
        return q

    def mod_linear(self, lin):
        """Canonical representative modulo a linear form (eliminates its lead variable)."""
        lead = max(lin.terms)
        i = _lead_index(self.n, lead)
        lc = lin.terms[lead]
        rest = Poly(self.n, {m: -c / lc for m, c in lin.terms.items() if m != lead})
        images = [Poly.var(self.n, j) for j in range(self.n)]
        images[i] = rest
        return self.transform(images)

    # output
    def to_json(self):
        return [[list(unpack(self.n, m)), qstr(c)] for m, c in sorted(self.terms.items())]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), reverse=True):
            e = unpack(self.n, m)
            mono = "*".join(f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            if not mono:
                parts.append(qstr(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{qstr(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _lead_index(n, lead):
    for i in range(n):
        if (lead >> _shift(n, i)) & MASK:
            return i
    raise ValueError("constant form")


def _field_mask(n, lead):
    i = _lead_index(n, lead)
    return MASK << _shift(n, i)


def monomials_of_degree(n, k):
    """Packed monomials of total degree k (polynomial degree 2k), in increasing order."""
    out = []

    def rec(i, left, acc):
        if i == n - 1:
            out.append(acc | (left << _shift(n, i)))
            return
        for e in range(left, -1, -1):
            rec(i + 1, left - e, acc | (e << _shift(n, i)))

    if n == 0:
        return [0] if k == 0 else []
    rec(0, k, 0)
    return sorted(out)


def normalize_linear(lin: Poly):
    """Return (scalar, key) with lin = scalar * form(key) and form(key) monic."""
    cs = lin.linear_coeffs()
    for c in cs:
        if c:
            return c, tuple(x / c for x in cs)
    raise ValueError("zero linear form")


def demazure_by(f: Poly, tf: Poly, root: Poly) -> Poly:
    """(f - t(f)) / root given the already computed t(f)."""
    return (f - tf).exact_div_linear(root)


class RatFun:
    """Numerator over a product of monic linear forms (kept factored)."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den=None):
        self.num = num
        self.den = den if den is not None else Counter()

    @classmethod
    def from_poly(cls, p):
        return cls(p, Counter())

    @classmethod
    def inverse_linear(cls, lin: Poly):
        c, key = normalize_linear(lin)
        return cls(Poly.const(lin.n, 1 / c), Counter({key: 1}))

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def _lift(self, den):
        num = self.num
        n = num.n
        for key, k in den.items():
            extra = k - self.den.get(key, 0)
            if extra > 0:
                lin = Poly.linear(key)
                for _ in range(extra):
                    num = num * lin
        return num

    def __add__(self, other):
        if not isinstance(other, RatFun):
            other = RatFun.from_poly(other if isinstance(other, Poly) else Poly.const(self.num.n, other))
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        den = self.den | other.den
        return RatFun(self._lift(den) + other._lift(den), den)

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, RatFun):
            other = RatFun.from_poly(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RatFun):
            if self.num.is_zero() or other.num.is_zero():
                return RatFun(Poly(self.num.n))
            return RatFun(self.num * other.num, self.den + other.den).reduce()
        if isinstance(other, Poly):
            return RatFun(self.num * other, self.den).reduce()
        return RatFun(self.num.scale(other), self.den)

    __rmul__ = __mul__

    def div_linear(self, lin: Poly):
        return self * RatFun.inverse_linear(lin)

    def reduce(self):
        """Cancel denominator factors dividing the numerator."""
        if self.num.is_zero():
            return RatFun(self.num)
        num = self.num
        den = Counter()
        for key, k in self.den.items():
            lin = Poly.linear(key)
            left = k
            while left:
                q = num.divide_linear(lin)
                if q is None:
                    break
                num = q
                left -= 1
            if left:
                den[key] = left
        return RatFun(num, den)

    def transform(self, images):
        num = self.num.transform(images)
        den = Counter()
        for key, k in self.den.items():
            img = Poly.linear(key).transform(images)
            c, nkey = normalize_linear(img)
            den[nkey] += k
            num = num.scale(1 / c ** k)
        return RatFun(num, den)

    def to_poly(self):
        r = self.reduce()
        if r.den:
            raise DenominatorNotCleared(f"{r} is not a polynomial")
        return r.num

    def is_poly(self):
        return not self.reduce().den

    def __eq__(self, other):
        if not isinstance(other, RatFun):
            other = RatFun.from_poly(other)
        return (self - other).num.is_zero()

    def __str__(self):
        if not self.den:
            return str(self.num)
        d = "*".join(f"({Poly.linear(k)})" + (f"^{m}" if m > 1 else "") for k, m in sorted(self.den.items()))
        return f"({self.num})/{d}"

    __repr__ = __str__


# group-level operations; element-dependent data comes from the group


def act(w, f: Poly) -> Poly:
    return f.transform(w.group.var_images(w))


def demazure(t, f: Poly) -> Poly:
    """Demazure operator of a reflection t (given as a group element)."""
    g = t.group
    return (f - act(t, f)).exact_div_linear(g.reflection_root(t))


def augment(f: Poly):
    return f.constant_term()
