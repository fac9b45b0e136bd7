"""Coxeter systems with realizations, Bruhat order, reflections and subexpressions.

Word reduction and descent tests always run in the integral geometric
representation attached to the Coxeter matrix; the user realization only
supplies roots and coroots for polynomial computations.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from gmpy2 import mpq

from .polyring import Poly, as_mpq

INF = 0  # encoding of m = infinity in Coxeter matrices

# geometric Cartan pair (a_st, a_ts) for each supported m
_GEOMETRIC = {2: (0, 0), 3: (-1, -1), 4: (-1, -2), 6: (-1, -3), INF: (-2, -2)}


class RealizationError(ValueError):
    pass


class BalancednessViolation(RealizationError):
    pass


class ZeroRootOrCoroot(RealizationError):
    pass


class InfiniteEdgeTooSmall(RealizationError):
    pass


class NotARepresentation(RealizationError):
    pass


class NotAReflection(ValueError):
    pass


class RootMismatch(ArithmeticError):
    pass


class TargetNotBelow(ValueError):
    pass


def quantum(n, x, y):
    """Two-colored quantum numbers ([n]_x, [n]_y)."""
    if n <= 0:
        return (0, 0)
    qx, qy = [0, 1, x], [0, 1, y]
    for k in range(2, n):
        qx.append(x * qy[k] - qx[k - 1])
        qy.append(y * qx[k] - qy[k - 1])
    return qx[n], qy[n]


def _matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return tuple(tuple(sum(a[i][l] * b[l][j] for l in range(k)) for j in range(m)) for i in range(n))


def _identity(n, one=1):
    return tuple(tuple(one if i == j else 0 * one for j in range(n)) for i in range(n))


class GroupElement:
    """Element of W: lexicographically minimal reduced word plus matrices."""

    __slots__ = ("group", "word", "geo", "geoinv", "_user", "_userinv", "_hash", "__weakref__")

    def __init__(self, group, word, geo, geoinv):
        self.group = group
        self.word = word
        self.geo = geo
        self.geoinv = geoinv
        self._user = None
        self._userinv = None
        self._hash = hash(word)

    def __len__(self):
        return len(self.word)

    @property
    def length(self):
        return len(self.word)

    def __eq__(self, other):
        return self is other or (isinstance(other, GroupElement) and self.word == other.word
                                 and self.group is other.group)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (len(self.word), self.word) < (len(other.word), other.word)

    def __mul__(self, other):
        return self.group.multiply(self, other)

    def inverse(self):
        return self.group.inverse(self)

    @property
    def matrix(self):
        return self.group.user_matrix(self)

    def name(self):
        return self.group.word_str(self.word)

    def __str__(self):
        return self.name()

    def __repr__(self):
        return f"<{self.name()}>"


@dataclass(frozen=True)
class Subexpression:
    word: tuple
    bits: tuple
    decoration: tuple  # "U"/"D" per position
    target: GroupElement
    defect: int

    def labels(self):
        return tuple(f"{d}{b}" for d, b in zip(self.decoration, self.bits))

    def is_canonical(self):
        return all(d == "U" for d in self.decoration)


class CoxeterGroup:
    def __init__(self, name, generators, mmatrix, dim, roots, coroots, validate=True):
        """roots[j][s]: coordinate j of alpha_s; coroots[s][j]: value of alpha_s^vee on e_j."""
        self.name = name
        self.generators = list(generators)
        self.rank = n = len(self.generators)
        self.m = tuple(tuple(int(x) for x in row) for row in mmatrix)
        self.dim = int(dim)
        self.roots = tuple(tuple(as_mpq(c) for c in row) for row in roots)
        self.coroots = tuple(tuple(as_mpq(c) for c in row) for row in coroots)
        self._check_shapes()
        if validate:
            self.validate()
        # geometric Cartan
        A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                mij = self.m[i][j]
                if mij not in _GEOMETRIC:
                    raise RealizationError(f"unsupported m={mij}")
                A[i][j], A[j][i] = _GEOMETRIC[mij]
        self.geo_cartan = A
        # s_i on geometric basis: column j = alpha_j - A[i][j] alpha_i
        self._geo_gen = []
        for i in range(n):
            M = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
            for j in range(n):
                M[i][j] -= A[i][j]
            self._geo_gen.append(tuple(tuple(r) for r in M))
        self._user_gen = []
        for i in range(n):
            M = [[(ONEQ if r == c else ZEROQ) - self.roots[r][i] * self.coroots[i][c]
                  for c in range(self.dim)] for r in range(self.dim)]
            self._user_gen.append(tuple(tuple(r) for r in M))
        self._intern = {}
        self.e = self._make((), _identity(n), _identity(n))
        self._rmul = {}
        self._leq = {}
        self._intervals = {}
        self._rex = {}
        self._refl = {}
        self._var_images = {}
        self._alpha = [Poly.linear([self.roots[j][i] for j in range(self.dim)]) for i in range(n)]
        self.gens = [self.rmul_gen(self.e, i) for i in range(n)]

    # validation
    def _check_shapes(self):
        n, d = self.rank, self.dim
        if len(self.m) != n or any(len(r) != n for r in self.m):
            raise RealizationError("coxeter matrix has wrong shape")
        if len(self.roots) != d or any(len(r) != n for r in self.roots):
            raise RealizationError("roots must be a dim x rank matrix (columns are roots)")
        if len(self.coroots) != n or any(len(r) != d for r in self.coroots):
            raise RealizationError("coroots must be a rank x dim matrix (rows are coroots)")
        for i in range(n):
            if self.m[i][i] != 1:
                raise RealizationError("diagonal of coxeter matrix must be 1")
            for j in range(n):
                if self.m[i][j] != self.m[j][i]:
                    raise RealizationError("coxeter matrix not symmetric")
                if i != j and self.m[i][j] != INF and self.m[i][j] < 2:
                    raise RealizationError("off-diagonal entries must be >= 2 or infinity")

    def pairing(self, s, t):
        """alpha_s^vee(alpha_t)."""
        return sum(self.coroots[s][j] * self.roots[j][t] for j in range(self.dim))

    def validate(self):
        n, d = self.rank, self.dim
        for s in range(n):
            if all(self.roots[j][s] == 0 for j in range(d)) or all(c == 0 for c in self.coroots[s]):
                raise ZeroRootOrCoroot(f"generator {self.generators[s]}")
            if self.pairing(s, s) != 2:
                raise RealizationError(f"alpha^vee(alpha) != 2 for {self.generators[s]}")
        for s in range(n):
            for t in range(s + 1, n):
                mst = self.m[s][t]
                x, y = -self.pairing(s, t), -self.pairing(t, s)
                if mst == INF:
                    if x.denominator != 1 or y.denominator != 1:
                        raise InfiniteEdgeTooSmall("infinite edge needs integer Cartan entries")
                    if x * y < 4:
                        raise InfiniteEdgeTooSmall(
                            f"{self.generators[s]},{self.generators[t]}: product {x * y} < 4")
                    continue
                qx, qy = quantum(mst - 1, x, y)
                if qx != 1 or qy != 1:
                    raise BalancednessViolation(
                        f"{self.generators[s]},{self.generators[t]}: [{mst - 1}]_x={qx}, [{mst - 1}]_y={qy}")
                # (st)^m must act trivially
                ss, tt = self._user_gen_matrix(s), self._user_gen_matrix(t)
                st = _matmul(ss, tt)
                P = _identity(d, ONEQ)
                for _ in range(mst):
                    P = _matmul(P, st)
                if P != _identity(d, ONEQ):
                    raise NotARepresentation(
                        f"({self.generators[s]}{self.generators[t]})^{mst} acts nontrivially")
        return True

    def _user_gen_matrix(self, i):
        return tuple(tuple((ONEQ if r == c else ZEROQ) - self.roots[r][i] * self.coroots[i][c]
                           for c in range(self.dim)) for r in range(self.dim))

    # elements
    def _make(self, word, geo, geoinv):
        el = GroupElement(self, word, geo, geoinv)
        self._intern[geo] = el
        return el

    def _normal_word(self, geoinv):
        """Lex-minimal reduced word by peeling smallest left descents."""
        word = []
        cur = geoinv
        n = self.rank
        while True:
            for i in range(n):
                if any(cur[r][i] < 0 for r in range(n)):
                    word.append(i)
                    cur = _matmul(cur, self._geo_gen[i])
                    break
            else:
                break
        return tuple(word)

    def rmul_gen(self, w: GroupElement, i: int) -> GroupElement:
        key = (w, i)
        r = self._rmul.get(key)
        if r is not None:
            return r
        geo = _matmul(w.geo, self._geo_gen[i])
        r = self._intern.get(geo)
        if r is None:
            geoinv = _matmul(self._geo_gen[i], w.geoinv)
            r = self._make(self._normal_word(geoinv), geo, geoinv)
        self._rmul[key] = r
        return r

    def lmul_gen(self, i, w):
        return self.inverse(self.rmul_gen(self.inverse(w), i))

    def from_word(self, word) -> GroupElement:
        w = self.e
        for i in self.parse_word(word):
            w = self.rmul_gen(w, i)
        return w

    def multiply(self, a, b):
        w = a
        for i in b.word:
            w = self.rmul_gen(w, i)
        return w

    def inverse(self, w):
        r = self._intern.get(w.geoinv)
        if r is None:
            r = self.from_word(tuple(reversed(w.word)))
        return r

    def parse_word(self, word):
        if isinstance(word, GroupElement):
            return word.word
        if isinstance(word, str):
            if word in ("", "e", "id"):
                return ()
            if all(len(g) == 1 for g in self.generators) and "," not in word and " " not in word:
                tokens = list(word)
            else:
                tokens = [t for t in word.replace(",", " ").split() if t]
            return tuple(self.generators.index(t) for t in tokens)
        out = []
        for t in word:
            out.append(t if isinstance(t, int) else self.generators.index(t))
        return tuple(out)

    def word_str(self, word):
        if not word:
            return "e"
        sep = "" if all(len(g) == 1 for g in self.generators) else "."
        return sep.join(self.generators[i] for i in word)

    def is_reduced(self, word):
        word = self.parse_word(word)
        return self.from_word(word).length == len(word)

    # descents
    def right_descent(self, w, i):
        """ws < w iff w(alpha_s) < 0 in the geometric representation."""
        return any(w.geo[r][i] < 0 for r in range(self.rank))

    def left_descent(self, w, i):
        return any(w.geoinv[r][i] < 0 for r in range(self.rank))

    def right_descents(self, w):
        return [i for i in range(self.rank) if self.right_descent(w, i)]

    def left_descents(self, w):
        return [i for i in range(self.rank) if self.left_descent(w, i)]

    # user realization
    def user_matrix(self, w):
        if w._user is None:
            if not w.word:
                w._user = _identity(self.dim, ONEQ)
            else:
                prefix = self.from_word(w.word[:-1])
                w._user = _matmul(self.user_matrix(prefix), self._user_gen[w.word[-1]])
        return w._user

    def user_matrix_inv(self, w):
        if w._userinv is None:
            w._userinv = self.user_matrix(self.inverse(w))
        return w._userinv

    def var_images(self, w):
        imgs = self._var_images.get(w)
        if imgs is None:
            M = self.user_matrix(w)
            imgs = [Poly.linear([M[r][i] for r in range(self.dim)]) for i in range(self.dim)]
            self._var_images[w] = imgs
        return imgs

    def act(self, w, f: Poly) -> Poly:
        if not w.word:
            return f
        return f.transform(self.var_images(w))

    def alpha(self, i) -> Poly:
        return self._alpha[i]

    def coroot_eval(self, row, f: Poly):
        """Apply a functional (row vector) to the linear part of f."""
        cs = f.linear_coeffs()
        return sum((row[j] * cs[j] for j in range(self.dim)), ZEROQ)

    def demazure_simple(self, i, f: Poly) -> Poly:
        return (f - self.act(self.gens[i], f)).exact_div_linear(self._alpha[i])

    def zero(self):
        return Poly(self.dim)

    def one(self):
        return Poly.const(self.dim, 1)

    def var(self, j):
        return Poly.var(self.dim, j)

    # reflections
    def is_reflection(self, t):
        return t.length % 2 == 1 and self.multiply(t, t) is self.e

    def _reflection_data(self, t):
        """(root Poly, coroot row, geometric root) via t = s' t' s'."""
        r = self._refl.get(t)
        if r is not None:
            return r
        if t.length == 1:
            i = t.word[0]
            r = (self._alpha[i], self.coroots[i],
                 tuple(1 if k == i else 0 for k in range(self.rank)), i)
        else:
            if not self.is_reflection(t):
                raise NotAReflection(str(t))
            s = t.word[0]
            g = self.gens[s]
            tp = self.multiply(self.multiply(g, t), g)
            root, corow, georoot, base = self._reflection_data(tp)
            root = self.act(g, root)
            # alpha^vee o s = alpha^vee - alpha^vee(alpha_s) alpha_s^vee
            c = sum((corow[j] * self.roots[j][s] for j in range(self.dim)), ZEROQ)
            corow = tuple(corow[j] - c * self.coroots[s][j] for j in range(self.dim))
            gg = self._geo_gen[s]
            georoot = tuple(sum(gg[k][l] * georoot[l] for l in range(self.rank)) for k in range(self.rank))
            r = (root, corow, georoot, base)
        self._refl[t] = r
        return r

    def reflection_root(self, t) -> Poly:
        return self._reflection_data(t)[0]

    def reflection_coroot(self, t):
        return self._reflection_data(t)[1]

    def root_of_reflection(self, t, verify=True) -> Poly:
        """alpha_t; with verify, checks x(alpha_s) agrees for all t = x s x^-1, xs > x, x <= t."""
        if not self.is_reflection(t):
            raise NotAReflection(str(t))
        root = self.reflection_root(t)
        if verify:
            found = 0
            for x in self.interval(t):
                for i in range(self.rank):
                    if self.right_descent(x, i):
                        continue
                    xs = self.rmul_gen(x, i)
                    if self.multiply(xs, self.inverse(x)) is t:
                        found += 1
                        r = self.act(x, self._alpha[i])
                        if r != root:
                            raise RootMismatch(f"{t}: {r} != {root}")
            if not found:
                raise NotAReflection(str(t))
        return root

    def coroot_of_reflection(self, t):
        return self.reflection_coroot(t)

    def reflection_positive_geo(self, t):
        return self._reflection_data(t)[2]

    def demazure(self, t, f: Poly) -> Poly:
        return (f - self.act(t, f)).exact_div_linear(self.reflection_root(t))

    # Bruhat order
    def bruhat_leq(self, x, y):
        if x.length > y.length:
            return False
        if x.length == y.length:
            return x is y
        if not x.word:
            return True
        key = (x, y)
        r = self._leq.get(key)
        if r is None:
            i = y.word[-1]
            ys = self.rmul_gen(y, i)
            if self.right_descent(x, i):
                r = self.bruhat_leq(self.rmul_gen(x, i), ys)
            else:
                r = self.bruhat_leq(x, ys)
            self._leq[key] = r
        return r

    def interval(self, y, lower=None):
        """[lower, y] (lower defaults to e), sorted by (length, word)."""
        iv = self._intervals.get(y)
        if iv is None:
            if not y.word:
                iv = [self.e]
            else:
                i = y.word[-1]
                ys = self.rmul_gen(y, i)
                below = self.interval(ys)
                s = set(below)
                s.update(self.rmul_gen(x, i) for x in below)
                iv = sorted(s)
            self._intervals[y] = iv
        if lower is None or not lower.word:
            return list(iv)
        return [x for x in iv if self.bruhat_leq(lower, x)]

    def elements_up_to(self, n):
        """All elements of length <= n, sorted."""
        level = [self.e]
        seen = {self.e}
        for _ in range(n):
            nxt = []
            for w in level:
                for i in range(self.rank):
                    if not self.right_descent(w, i):
                        ws = self.rmul_gen(w, i)
                        if ws not in seen:
                            seen.add(ws)
                            nxt.append(ws)
            level = nxt
        return sorted(seen)

    def reduced_words(self, w):
        r = self._rex.get(w)
        if r is None:
            if not w.word:
                r = [()]
            else:
                r = []
                for i in self.right_descents(w):
                    r.extend(p + (i,) for p in self.reduced_words(self.rmul_gen(w, i)))
                r.sort()
            self._rex[w] = r
        return r

    def is_cover(self, v, w):
        """v -> w: w = vt for a reflection t and l(w) = l(v) + 1."""
        if w.length != v.length + 1:
            return False
        t = self.multiply(self.inverse(v), w)
        return self.is_reflection(t)

    def bruhat_edges(self, omega):
        """Directed covers (v, w, t) with w = vt inside omega."""
        els = sorted(set(omega))
        bylen = {}
        for x in els:
            bylen.setdefault(x.length, []).append(x)
        out = []
        for v in els:
            vi = self.inverse(v)
            for w in bylen.get(v.length + 1, ()):
                t = self.multiply(vi, w)
                if self.is_reflection(t):
                    out.append((v, w, t))
        return out

    def moment_edges(self, omega):
        """Undirected edges (v, u, t) with u = tv, v < u, t the left reflection."""
        els = sorted(set(omega))
        out = []
        for a, v in enumerate(els):
            vi = self.inverse(v)
            for u in els[a + 1:]:
                if (u.length - v.length) % 2 == 0:
                    continue
                t = self.multiply(u, vi)
                if self.is_reflection(t):
                    out.append((v, u, t))
        return out

    def upper_covers(self, w):
        """All u with w -> u (u = wt, l(u) = l(w) + 1)."""
        out = set()
        for rw in self.reduced_words(w):
            for pos in range(len(rw) + 1):
                for i in range(self.rank):
                    u = self.from_word(rw[:pos] + (i,) + rw[pos:])
                    if u.length == w.length + 1:
                        out.add(u)
        return sorted(out)

    def lower_covers(self, w):
        out = set()
        for rw in self.reduced_words(w):
            for pos in range(len(rw)):
                u = self.from_word(rw[:pos] + rw[pos + 1:])
                if u.length == w.length - 1:
                    out.add(u)
        return sorted(out)

    def gkm_check(self, omega):
        """Roots labelling moment-graph edges inside omega are pairwise independent."""
        roots = {}
        for v, u, t in self.moment_edges(omega):
            roots[t] = self.reflection_root(t)
        keys = []
        for t, r in roots.items():
            cs = r.linear_coeffs()
            if not any(cs):
                return False
            keys.append(cs)
        for a, b in itertools.combinations(keys, 2):
            if _proportional(a, b):
                return False
        return True

    # subexpressions
    def _decorate(self, word, bits):
        x = self.e
        dec = []
        defect = 0
        for i, b in zip(word, bits):
            up = not self.right_descent(x, i)
            dec.append("U" if up else "D")
            if b == 0:
                defect += 1 if up else -1
            else:
                x = self.rmul_gen(x, i)
        return tuple(dec), x, defect

    def subexpression(self, word, bits):
        word = self.parse_word(word)
        dec, x, defect = self._decorate(word, bits)
        return Subexpression(word, tuple(bits), dec, x, defect)

    def all_subexpressions(self, word):
        word = self.parse_word(word)
        return [self.subexpression(word, bits) for bits in itertools.product((0, 1), repeat=len(word))]

    def subexpressions(self, word, x):
        return [e for e in self.all_subexpressions(word) if e.target is x]

    def canonical_subexpression(self, word, x):
        word = self.parse_word(word)
        bits = [0] * len(word)
        cur = x
        for k in range(len(word) - 1, -1, -1):
            i = word[k]
            if self.right_descent(cur, i):
                bits[k] = 1
                cur = self.rmul_gen(cur, i)
        if cur.word:
            raise TargetNotBelow(f"{x} is not below {self.word_str(word)}")
        sub = self.subexpression(word, bits)
        if not sub.is_canonical():
            raise TargetNotBelow(f"{x} is not below {self.word_str(word)}")
        return sub

    # config
    def to_config(self):
        return {
            "name": self.name,
            "generators": self.generators,
            "coxeter_matrix": [list(r) for r in self.m],
            "dim": self.dim,
            "roots": [[_qs(c) for c in r] for r in self.roots],
            "coroots": [[_qs(c) for c in r] for r in self.coroots],
        }

    def __repr__(self):
        return f"CoxeterGroup({self.name})"


ONEQ = mpq(1)
ZEROQ = mpq(0)


def _qs(c):
    return int(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _proportional(a, b):
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if a[i] * b[j] != a[j] * b[i]:
                return False
    return True


def load_realization(config) -> CoxeterGroup:
    """Build a group from a dict, a JSON path, or a preset name."""
    if isinstance(config, str):
        if config.strip().startswith("{"):
            config = json.loads(config)
        elif config.lower().replace("-", "").replace("_", "") in _PRESET_KEYS:
            return preset(config)
        else:
            with open(config) as fh:
                config = json.load(fh)
    return CoxeterGroup(config.get("name", "custom"), config["generators"], config["coxeter_matrix"],
                        config["dim"], config["roots"], config["coroots"])


def _cartan_group(name, gens, m, cartan):
    n = len(gens)
    roots = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    return CoxeterGroup(name, gens, m, n, roots, cartan)


def A1():
    return CoxeterGroup("A1", ["s"], [[1]], 1, [[1]], [[2]])


def A2():
    return _cartan_group("A2", ["s", "t"], [[1, 3], [3, 1]], [[2, -1], [-1, 2]])


def B2():
    return _cartan_group("B2", ["s", "t"], [[1, 4], [4, 1]], [[2, -1], [-2, 2]])


def universal(n=3):
    names = ["s", "t", "u", "v", "w", "x", "y", "z"][:n] if n <= 8 else [f"s{i}" for i in range(n)]
    m = [[1 if i == j else INF for j in range(n)] for i in range(n)]
    cartan = [[2 if i == j else -2 for j in range(n)] for i in range(n)]
    return _cartan_group(f"universal{n}", names, m, cartan)


def affine_A2():
    roots = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0]]
    coroots = [[2, -1, -1, 1], [-1, 2, -1, 0], [-1, -1, 2, 0]]
    m = [[1, 3, 3], [3, 1, 3], [3, 3, 1]]
    return CoxeterGroup("affineA2", ["s", "t", "u"], m, 4, roots, coroots)


def right_angled(n=3, commuting=((0, 1),)):
    """Right-angled group: listed pairs commute, all others are infinite."""
    names = ["s", "t", "u", "v", "w"][:n]
    m = [[1 if i == j else INF for j in range(n)] for i in range(n)]
    cartan = [[2 if i == j else -2 for j in range(n)] for i in range(n)]
    for i, j in commuting:
        m[i][j] = m[j][i] = 2
        cartan[i][j] = cartan[j][i] = 0
    return _cartan_group(f"rightangled{n}", names, m, cartan)


_PRESETS = {
    "a1": A1,
    "a2": A2,
    "b2": B2,
    "universal2": lambda: universal(2),
    "universal3": lambda: universal(3),
    "universal": lambda: universal(3),
    "affinea2": affine_A2,
    "affine~a2": affine_A2,
    "rightangled3": lambda: right_angled(3),
}
_PRESET_KEYS = set(_PRESETS)
_CACHE = {}


def preset(name) -> CoxeterGroup:
    """Shared preset instance (groups carry caches, so reuse is cheap)."""
    key = name.lower().replace("-", "").replace("_", "").replace("(", "").replace(")", "").replace("ã", "a")
    if key.startswith("universal") and key[9:].isdigit():
        n = int(key[9:])
        if key not in _CACHE:
            _CACHE[key] = universal(n)
        return _CACHE[key]
    if key not in _PRESETS:
        raise KeyError(f"unknown preset {name}")
    if key not in _CACHE:
        _CACHE[key] = _PRESETS[key]()
    return _CACHE[key]


PRESET_NAMES = ["A1", "A2", "B2", "universal3", "affineA2"]
