"""Exact linear algebra over Q, delegated to FLINT."""
from __future__ import annotations

from math import lcm

import flint
from gmpy2 import mpq


def _int_rows(rows, ncols):
    """Scale each row (dense list or sparse dict) to integers."""
    out = []
    for r in rows:
        items = r.items() if isinstance(r, dict) else enumerate(r)
        items = [(j, mpq(c)) for j, c in items if c]
        if not items:
            continue
        den = 1
        for _, c in items:
            den = lcm(den, int(c.denominator))
        row = [0] * ncols
        for j, c in items:
            row[j] = int(c * den)
        out.append(row)
    return out


def nullspace(rows, ncols):
    """Basis (list of mpq lists) of {x : A x = 0}."""
    if ncols == 0:
        return []
    A = _int_rows(rows, ncols)
    if not A:
        return [[mpq(1) if i == j else mpq(0) for i in range(ncols)] for j in range(ncols)]
    M = flint.fmpz_mat(len(A), ncols, [c for r in A for c in r])
    X, nul = M.nullspace()
    basis = []
    for k in range(nul):
        col = [int(X[i, k]) for i in range(ncols)]
        basis.append([mpq(c) for c in col])
    return basis


def rank(rows, ncols):
    A = _int_rows(rows, ncols)
    if not A:
        return 0
    return flint.fmpz_mat(len(A), ncols, [c for r in A for c in r]).rank()


def to_fmpq_mat(rows):
    n = len(rows)
    m = len(rows[0]) if n else 0
    return flint.fmpq_mat(n, m, [flint.fmpq(int(mpq(c).numerator), int(mpq(c).denominator))
                                 for r in rows for c in r])


def from_fmpq(x):
    return mpq(int(x.p), int(x.q))


def fmpq_mat_rows(M):
    return [[from_fmpq(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())]


def solve(rows, rhs):
    """Unique solution of A x = b for square invertible A."""
    A = to_fmpq_mat(rows)
    b = to_fmpq_mat([[c] for c in rhs])
    x = A.solve(b)
    return [from_fmpq(x[i, 0]) for i in range(x.nrows())]


def inverse(rows):
    return fmpq_mat_rows(to_fmpq_mat(rows).inv())


def row_space_basis(vectors, ncols):
    """Reduced echelon basis of the span of the given vectors."""
    A = [[mpq(c) for c in v] for v in vectors if any(v)]
    if not A:
        return []
    R, r = to_fmpq_mat(A).rref()
    return [[from_fmpq(R[i, j]) for j in range(ncols)] for i in range(r)]


def in_span(basis_rows, v, ncols):
    return rank(list(basis_rows) + [v], ncols) == rank(basis_rows, ncols)


def matmul(A, B):
    n, k = len(A), len(B)
    m = len(B[0]) if k else 0
    out = [[mpq(0)] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        oi = out[i]
        for l in range(k):
            a = Ai[l]
            if a:
                Bl = B[l]
                for j in range(m):
                    if Bl[j]:
                        oi[j] += a * Bl[j]
    return out
