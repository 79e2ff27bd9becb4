"""Pure-Python double-description kernels.

Both kernels convert a homogeneous constraint system

    { x : b.x = 0 for b in eq_rows,  a.x >= 0 for a in ineq_rows }

into a minimal generator description (extreme rays plus a lineality
basis). Constraints are inserted one at a time; rays are combined only
across adjacent pairs, with adjacency decided by the combinatorial
zero-set test. Zero sets are tracked as int bitmasks over the inequality
rows and stay exact by construction: a positive combination of two rays is
tight exactly where both parents are.

`dd_exact` works on primitive integer tuples (gcd-reduced), `dd_approx`
on unit-norm float tuples with an epsilon for every sign test. Callers
canonicalize, deduplicate and sort both the input rows and the output.
"""

from __future__ import annotations

import math

from gptlab.errors import BudgetExceededError

KERNEL_NAME = "python"


def _gcd_reduce(vec):
    g = 0
    for x in vec:
        g = math.gcd(g, x)
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)


def _idot(a, b):
    s = 0
    for x, y in zip(a, b):
        s += x * y
    return s


def dd_exact(eq_rows, ineq_rows, dim, budget=None):
    """Enumerate (rays, lineality) of an integer constraint system."""
    lin = [tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim)]

    for b in eq_rows:
        s_lin = [_idot(b, l) for l in lin]
        k = next((i for i, s in enumerate(s_lin) if s != 0), None)
        if k is None:
            continue  # redundant on the current span
        l0, s0 = lin[k], s_lin[k]
        lin = [
            l if s == 0 else _gcd_reduce([s0 * x - s * y for x, y in zip(l, l0)])
            for i, (l, s) in enumerate(zip(lin, s_lin))
            if i != k
        ]

    rank_eq = dim - len(lin)  # equalities are tight everywhere but carry rank
    rays_v: list[tuple] = []
    rays_z: list[int] = []

    for j, a in enumerate(ineq_rows):
        bit = 1 << j

        s_lin = [_idot(a, l) for l in lin]
        k = next((i for i, s in enumerate(s_lin) if s != 0), None)
        if k is not None:
            # The constraint cuts the lineality space: one direction becomes
            # a ray, everything else is projected onto the hyperplane.
            l0, s0 = lin[k], s_lin[k]
            if s0 < 0:
                l0, s0 = tuple(-x for x in l0), -s0
            lin = [
                l if s == 0 else _gcd_reduce([s0 * x - s * y for x, y in zip(l, l0)])
                for i, (l, s) in enumerate(zip(lin, s_lin))
                if i != k
            ]
            for i in range(len(rays_v)):
                s = _idot(a, rays_v[i])
                if s:
                    rays_v[i] = _gcd_reduce(
                        [s0 * x - s * y for x, y in zip(rays_v[i], l0)]
                    )
                rays_z[i] |= bit
            rays_v.append(l0)
            rays_z.append(bit - 1)  # tight on every earlier inequality
            continue

        slacks = [_idot(a, r) for r in rays_v]
        pos = [i for i, s in enumerate(slacks) if s > 0]
        neg = [i for i, s in enumerate(slacks) if s < 0]
        if not neg:
            for i, s in enumerate(slacks):
                if s == 0:
                    rays_z[i] |= bit
            continue
        if len(neg) == len(slacks):
            rays_v, rays_z = [], []
            continue

        # inequality rows tight in common required for adjacency; the
        # equality rank counts toward tightness but has no bitmask bits
        need = dim - rank_eq - len(lin) - 2
        zcounts = [z.bit_count() for z in rays_z]
        nrays = len(rays_v)
        new_v, new_z = [], []
        for p in pos:
            zp, sp, rp = rays_z[p], slacks[p], rays_v[p]
            for n in neg:
                w = zp & rays_z[n]
                wc = w.bit_count()
                if wc < need:
                    continue
                adjacent = True
                for t in range(nrays):
                    if t == p or t == n or zcounts[t] < wc:
                        continue
                    if w & ~rays_z[t] == 0:
                        adjacent = False
                        break
                if adjacent:
                    sn, rn = slacks[n], rays_v[n]
                    new_v.append(
                        _gcd_reduce([sp * x - sn * y for x, y in zip(rn, rp)])
                    )
                    new_z.append(w | bit)

        keep_v, keep_z = [], []
        for i, s in enumerate(slacks):
            if s > 0:
                keep_v.append(rays_v[i])
                keep_z.append(rays_z[i])
            elif s == 0:
                keep_v.append(rays_v[i])
                keep_z.append(rays_z[i] | bit)
        rays_v = keep_v + new_v
        rays_z = keep_z + new_z
        if budget is not None and len(rays_v) > budget:
            raise BudgetExceededError(
                f"ray count {len(rays_v)} exceeded budget {budget}"
            )

    return rays_v, lin


def _unit(vec, eps):
    n = math.sqrt(math.fsum(x * x for x in vec))
    if n <= eps:
        return None
    return tuple(x / n for x in vec)


def dd_approx(eq_rows, ineq_rows, dim, eps, budget=None):
    """Float variant; rows and rays are kept at unit norm."""
    lin = [tuple(1.0 if i == j else 0.0 for i in range(dim)) for j in range(dim)]

    def project(vecs, slacks, l0, s0, skip=-1):
        out = []
        for i, (v, s) in enumerate(zip(vecs, slacks)):
            if i == skip:
                continue
            if abs(s) <= eps:
                out.append(v)
            else:
                w = _unit([s0 * x - s * y for x, y in zip(v, l0)], eps)
                if w is not None:
                    out.append(w)
        return out

    for b in eq_rows:
        s_lin = [math.fsum(x * y for x, y in zip(b, l)) for l in lin]
        k = next((i for i, s in enumerate(s_lin) if abs(s) > eps), None)
        if k is None:
            continue
        lin = project(lin, s_lin, lin[k], s_lin[k], skip=k)

    rank_eq = dim - len(lin)
    rays_v: list[tuple] = []
    rays_z: list[int] = []

    for j, a in enumerate(ineq_rows):
        bit = 1 << j

        s_lin = [math.fsum(x * y for x, y in zip(a, l)) for l in lin]
        k = next((i for i, s in enumerate(s_lin) if abs(s) > eps), None)
        if k is not None:
            l0, s0 = lin[k], s_lin[k]
            if s0 < 0:
                l0, s0 = tuple(-x for x in l0), -s0
            lin = project(lin, s_lin, l0, s0, skip=k)
            for i in range(len(rays_v)):
                s = math.fsum(x * y for x, y in zip(a, rays_v[i]))
                if abs(s) > eps:
                    w = _unit([s0 * x - s * y for x, y in zip(rays_v[i], l0)], eps)
                    if w is not None:
                        rays_v[i] = w
                rays_z[i] |= bit
            rays_v.append(l0)
            rays_z.append(bit - 1)
            continue

        slacks = [math.fsum(x * y for x, y in zip(a, r)) for r in rays_v]
        signs = [0 if abs(s) <= eps else (1 if s > 0 else -1) for s in slacks]
        pos = [i for i, s in enumerate(signs) if s > 0]
        neg = [i for i, s in enumerate(signs) if s < 0]
        if not neg:
            for i, s in enumerate(signs):
                if s == 0:
                    rays_z[i] |= bit
            continue
        if len(neg) == len(signs):
            rays_v, rays_z = [], []
            continue

        need = dim - rank_eq - len(lin) - 2
        zcounts = [z.bit_count() for z in rays_z]
        nrays = len(rays_v)
        new_v, new_z = [], []
        for p in pos:
            zp, sp, rp = rays_z[p], slacks[p], rays_v[p]
            for n in neg:
                w = zp & rays_z[n]
                wc = w.bit_count()
                if wc < need:
                    continue
                adjacent = True
                for t in range(nrays):
                    if t == p or t == n or zcounts[t] < wc:
                        continue
                    if w & ~rays_z[t] == 0:
                        adjacent = False
                        break
                if adjacent:
                    sn, rn = slacks[n], rays_v[n]
                    vec = _unit([sp * x - sn * y for x, y in zip(rn, rp)], eps)
                    if vec is None:
                        continue  # nearly antiparallel pair, merged face
                    new_v.append(vec)
                    new_z.append(w | bit)

        keep_v, keep_z = [], []
        for i, s in enumerate(signs):
            if s > 0:
                keep_v.append(rays_v[i])
                keep_z.append(rays_z[i])
            elif s == 0:
                keep_v.append(rays_v[i])
                keep_z.append(rays_z[i] | bit)
        rays_v = keep_v + new_v
        rays_z = keep_z + new_z
        if budget is not None and len(rays_v) > budget:
            raise BudgetExceededError(
                f"ray count {len(rays_v)} exceeded budget {budget}"
            )

    return rays_v, lin
