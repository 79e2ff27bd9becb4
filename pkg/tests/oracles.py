"""Independent brute-force oracles used to freeze expected values.

Deliberately naive and self-contained: subset enumeration over tight
constraint sets with its own Gaussian elimination. Nothing here touches
the double-description kernel, so agreement is meaningful.
"""

from fractions import Fraction
from itertools import combinations


def _eliminate(rows):
    """Row echelon form over Fractions; returns (rows, pivot_cols)."""
    m = [[Fraction(x) for x in r] for r in rows]
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows):
    if not rows:
        return 0
    return len(_eliminate(rows)[0])


def nullspace(rows, dim):
    """Basis of {x : r.x = 0 for all rows}."""
    if not rows:
        return [tuple(Fraction(i == j) for i in range(dim)) for j in range(dim)]
    m, pivots = _eliminate(rows)
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * dim
        v[fc] = Fraction(1)
        for row, pc in zip(m, pivots):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return basis


def solve_square(rows, rhs):
    """Unique solution of a square system, or None."""
    dim = len(rows)
    m = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    m, pivots = _eliminate(m)
    if len(m) < dim or pivots != list(range(dim)):
        return None
    return tuple(m[i][dim] for i in range(dim))


def canonical_ray(v):
    for x in v:
        if x != 0:
            return tuple(Fraction(y) / abs(x) for y in v)
    return tuple(Fraction(x) for x in v)


def brute_dual_rays(rays, dim):
    """Extreme rays of {a : a.r >= 0} by tight-subset enumeration.

    Valid for pointed duals (primal rays spanning the space).
    """
    out = set()
    idx = range(len(rays))
    for S in combinations(idx, dim - 1):
        for v in nullspace([rays[i] for i in S], dim):
            for sgn in (1, -1):
                w = tuple(sgn * x for x in v)
                if all(sum(a * b for a, b in zip(w, r)) >= 0 for r in rays):
                    tight = [rays[i] for i in idx
                             if sum(a * b for a, b in zip(w, rays[i])) == 0]
                    if rank(tight) == dim - 1:
                        out.add(canonical_ray(w))
    return sorted(out)


def brute_polytope_vertices(ineqs, eqs, dim):
    """Vertices of {x : a.x >= rhs, c.x = rhs} by tight-subset enumeration."""
    eqs = list(eqs)
    neq = rank([list(a) for a, _ in eqs]) if eqs else 0
    verts = set()
    for S in combinations(range(len(ineqs)), dim - neq):
        rows = [list(ineqs[i][0]) for i in S] + [list(a) for a, _ in eqs]
        rhs = [ineqs[i][1] for i in S] + [b for _, b in eqs]
        if len(rows) < dim:
            continue
        aug, pivots = _eliminate([r + [v] for r, v in zip(rows, rhs)])
        if pivots != list(range(dim)):
            continue
        if len(aug) > dim and any(aug[i][dim] != 0 for i in range(dim, len(aug))):
            continue
        x = tuple(aug[i][dim] for i in range(dim))
        if all(sum(a * v for a, v in zip(r, x)) >= b for r, b in ineqs) and all(
            sum(a * v for a, v in zip(c, x)) == b for c, b in eqs
        ):
            verts.add(x)
    return sorted(verts)
