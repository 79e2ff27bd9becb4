"""Small dense linear algebra over either scalar mode.

Only what the geometry needs: dot products, rank, inverses and transposed
solves on matrices of size at most ~16. Exact mode eliminates with the
first nonzero pivot; approx mode uses partial pivoting with the context
epsilon deciding what counts as zero.
"""

from __future__ import annotations

from gptlab.arith import Arith, EXACT
from gptlab.errors import InvalidInputError, SingularMapError


def dot(a, b):
    if len(a) != len(b):
        raise InvalidInputError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, v):
    return tuple(c * x for x in v)


def matvec(m, v):
    return tuple(dot(row, v) for row in m)


def transpose(m):
    return tuple(zip(*m))


def identity(n, arith: Arith = EXACT):
    one, zero = arith.coerce(1), arith.coerce(0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def _pivot_row(col, start, arith):
    """Index of the pivot row for a column slice, or None."""
    if arith.mode == "exact":
        for i in range(start, len(col)):
            if col[i] != 0:
                return i
        return None
    best, best_i = arith.eps, None
    for i in range(start, len(col)):
        if abs(col[i]) > best:
            best, best_i = abs(col[i]), i
    return best_i


def rank(rows, arith: Arith = EXACT) -> int:
    if not rows:
        return 0
    m = [list(r) for r in rows]
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        p = _pivot_row([row[c] for row in m], r, arith)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        for i in range(r + 1, len(m)):
            if not arith.is_zero(m[i][c]):
                f = m[i][c] / pv
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def invert(m, arith: Arith = EXACT):
    """Inverse of a square matrix; raises SingularMapError."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise InvalidInputError("matrix must be square")
    a = [list(arith.coerce(x) for x in row) for row in m]
    inv = [list(row) for row in identity(n, arith)]
    for c in range(n):
        p = _pivot_row([a[i][c] for i in range(n)], c, arith)
        if p is None:
            raise SingularMapError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        inv[c], inv[p] = inv[p], inv[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        inv[c] = [x / pv for x in inv[c]]
        for i in range(n):
            if i != c and not arith.is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
                inv[i] = [x - f * y for x, y in zip(inv[i], inv[c])]
    return tuple(tuple(row) for row in inv)


def inverse_transpose(m, arith: Arith = EXACT):
    return transpose(invert(m, arith))
