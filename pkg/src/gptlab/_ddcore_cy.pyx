# cython: language_level=3
"""Compiled double-description kernels.

Semantics are identical to `gptlab._ddcore_py` (same inputs, same output
set up to ordering); see that module for the algorithm notes. The hot
parts run as typed C loops: zero sets live in a uint64 bit matrix, the
adjacency scan and all bitset updates never touch Python objects. Exact
coordinates stay arbitrary-precision Python ints; the float kernel keeps
coordinates in C doubles throughout.
"""

import math

import numpy as np

from gptlab.errors import BudgetExceededError

cimport cython
from libc.stdint cimport uint64_t

KERNEL_NAME = "compiled"


cdef inline int _popcount64(uint64_t x) nogil:
    x = x - ((x >> 1) & 0x5555555555555555UL)
    x = (x & 0x3333333333333333UL) + ((x >> 2) & 0x3333333333333333UL)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0FUL
    return <int>((x * 0x0101010101010101UL) >> 56)


@cython.boundscheck(False)
@cython.wraparound(False)
cdef bint _is_adjacent(uint64_t[:, ::1] Z, long[::1] zcount, Py_ssize_t nrays,
                       Py_ssize_t p, Py_ssize_t n, uint64_t[::1] w, int wc,
                       Py_ssize_t nwords) nogil:
    cdef Py_ssize_t t, k
    cdef bint sub
    for t in range(nrays):
        if t == p or t == n or zcount[t] < wc:
            continue
        sub = True
        for k in range(nwords):
            if w[k] & ~Z[t, k]:
                sub = False
                break
        if sub:
            return False
    return True


cdef tuple _gcd_reduce(list vec):
    cdef Py_ssize_t k, n = len(vec)
    g = 0
    for k in range(n):
        g = math.gcd(g, vec[k])
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)


cdef object _odot(tuple a, tuple b, Py_ssize_t dim):
    cdef Py_ssize_t k
    s = 0
    for k in range(dim):
        s += a[k] * b[k]
    return s


cdef void _set_bit(uint64_t[:, ::1] Z, Py_ssize_t row, Py_ssize_t bit) nogil:
    Z[row, bit >> 6] |= (<uint64_t>1) << (bit & 63)


cdef void _fill_prefix(uint64_t[:, ::1] Z, Py_ssize_t row, Py_ssize_t j) nogil:
    # set bits 0..j-1
    cdef Py_ssize_t full = j >> 6, k
    for k in range(full):
        Z[row, k] = <uint64_t>0xFFFFFFFFFFFFFFFFUL
    if j & 63:
        Z[row, full] = ((<uint64_t>1) << (j & 63)) - 1


def dd_exact(eq_rows, ineq_rows, long dim, budget=None):
    """Enumerate (rays, lineality) of an integer constraint system."""
    cdef Py_ssize_t nrows = len(ineq_rows)
    cdef Py_ssize_t nwords = (nrows + 63) // 64 if nrows else 1
    cdef Py_ssize_t j, i, k, t, p, n, nrays, nnew
    cdef int wc, need
    cdef long bud = budget if budget is not None else -1

    lin = [tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim)]

    for b in eq_rows:
        s_lin = [_odot(b, l, dim) for l in lin]
        kk = next((i for i, s in enumerate(s_lin) if s != 0), None)
        if kk is None:
            continue
        l0, s0 = lin[kk], s_lin[kk]
        lin = [
            l if s == 0 else _gcd_reduce([s0 * x - s * y for x, y in zip(l, l0)])
            for i, (l, s) in enumerate(zip(lin, s_lin))
            if i != kk
        ]

    cdef long rank_eq = dim - len(lin)
    rays_v = []
    cdef uint64_t[:, ::1] Z = np.zeros((0, nwords), dtype=np.uint64)
    zmat = np.zeros((0, nwords), dtype=np.uint64)

    cdef uint64_t[::1] wbuf = np.zeros(nwords, dtype=np.uint64)
    cdef long[::1] zcount
    cdef long[::1] signs

    for j in range(nrows):
        a = ineq_rows[j]

        s_lin = [_odot(a, l, dim) for l in lin]
        kk = next((i for i, s in enumerate(s_lin) if s != 0), None)
        if kk is not None:
            l0, s0 = lin[kk], s_lin[kk]
            if s0 < 0:
                l0 = tuple(-x for x in l0)
                s0 = -s0
            lin = [
                l if s == 0 else _gcd_reduce([s0 * x - s * y for x, y in zip(l, l0)])
                for i, (l, s) in enumerate(zip(lin, s_lin))
                if i != kk
            ]
            nrays = len(rays_v)
            for i in range(nrays):
                s = _odot(a, rays_v[i], dim)
                if s != 0:
                    rays_v[i] = _gcd_reduce(
                        [s0 * x - s * y for x, y in zip(rays_v[i], l0)]
                    )
            newz = np.zeros((nrays + 1, nwords), dtype=np.uint64)
            newz[:nrays] = zmat
            zmat = newz
            Z = zmat
            for i in range(nrays):
                _set_bit(Z, i, j)
            _fill_prefix(Z, nrays, j)
            rays_v.append(l0)
            continue

        nrays = len(rays_v)
        slacks = [_odot(a, r, dim) for r in rays_v]
        signs_arr = np.empty(nrays, dtype=np.int64)
        signs = signs_arr
        npos = 0
        nneg = 0
        for i in range(nrays):
            s = slacks[i]
            if s > 0:
                signs[i] = 1
                npos += 1
            elif s < 0:
                signs[i] = -1
                nneg += 1
            else:
                signs[i] = 0
        if nneg == 0:
            for i in range(nrays):
                if signs[i] == 0:
                    _set_bit(Z, i, j)
            continue
        if nneg == nrays:
            rays_v = []
            zmat = np.zeros((0, nwords), dtype=np.uint64)
            Z = zmat
            continue

        need = dim - rank_eq - len(lin) - 2
        zcount_arr = np.empty(nrays, dtype=np.int64)
        zcount = zcount_arr
        for i in range(nrays):
            wc = 0
            for k in range(nwords):
                wc += _popcount64(Z[i, k])
            zcount[i] = wc

        new_v = []
        new_masks = []
        for p in range(nrays):
            if signs[p] != 1:
                continue
            sp = slacks[p]
            rp = rays_v[p]
            for n in range(nrays):
                if signs[n] != -1:
                    continue
                wc = 0
                for k in range(nwords):
                    wbuf[k] = Z[p, k] & Z[n, k]
                    wc += _popcount64(wbuf[k])
                if wc < need:
                    continue
                if _is_adjacent(Z, zcount, nrays, p, n, wbuf, wc, nwords):
                    sn = slacks[n]
                    rn = rays_v[n]
                    new_v.append(_gcd_reduce([sp * x - sn * y for x, y in zip(rn, rp)]))
                    mask = np.asarray(wbuf).copy()
                    new_masks.append(mask)

        keep = [i for i in range(nrays) if signs[i] >= 0]
        nnew = len(new_v)
        newz = np.zeros((len(keep) + nnew, nwords), dtype=np.uint64)
        rays_next = []
        for t, i in enumerate(keep):
            newz[t] = zmat[i]
            rays_next.append(rays_v[i])
        for t in range(nnew):
            newz[len(keep) + t] = new_masks[t]
            rays_next.append(new_v[t])
        zmat = newz
        Z = zmat
        for t, i in enumerate(keep):
            if signs[i] == 0:
                _set_bit(Z, t, j)
        for t in range(nnew):
            _set_bit(Z, len(keep) + t, j)
        rays_v = rays_next
        if bud >= 0 and len(rays_v) > bud:
            raise BudgetExceededError(
                f"ray count {len(rays_v)} exceeded budget {budget}"
            )

    return rays_v, lin


@cython.boundscheck(False)
@cython.wraparound(False)
def dd_approx(eq_rows, ineq_rows, long dim, double eps, budget=None):
    """Float variant; rows and rays are kept at unit norm."""
    cdef Py_ssize_t nrows = len(ineq_rows)
    cdef Py_ssize_t nwords = (nrows + 63) // 64 if nrows else 1
    cdef Py_ssize_t j, i, k, t, p, n, nrays, nnew, nkeep
    cdef int wc, need
    cdef long bud = budget if budget is not None else -1
    cdef double s, s0, sp, sn, nrm

    lin_mat = np.eye(dim, dtype=np.float64)
    rows = np.array(ineq_rows, dtype=np.float64).reshape(nrows, dim)

    def _unit_rows(m):
        nrms = np.sqrt((m * m).sum(axis=1))
        keepm = nrms > eps
        return m[keepm] / nrms[keepm, None]

    def _cut_lin(lmat, svec, other=None, so=None):
        # project everything onto the hyperplane of the pivot direction
        kk = int(np.argmax(np.abs(svec)))
        l0 = lmat[kk].copy()
        s0v = float(svec[kk])
        if s0v < 0:
            l0 = -l0
            s0v = -s0v
        rest = np.delete(lmat, kk, axis=0)
        srest = np.delete(svec, kk)
        proj = rest * s0v - np.outer(srest, l0)
        proj = _unit_rows(proj) if len(proj) else proj
        return l0, s0v, proj

    for b in eq_rows:
        bv = np.asarray(b, dtype=np.float64)
        if lin_mat.shape[0] == 0:
            continue
        svec = lin_mat @ bv
        if np.max(np.abs(svec)) <= eps:
            continue
        _, _, lin_mat = _cut_lin(lin_mat, svec)

    cdef long rank_eq = dim - lin_mat.shape[0]
    rays = np.zeros((0, dim), dtype=np.float64)
    zmat = np.zeros((0, nwords), dtype=np.uint64)
    cdef uint64_t[:, ::1] Z = zmat
    cdef uint64_t[::1] wbuf = np.zeros(nwords, dtype=np.uint64)
    cdef long[::1] zcount
    cdef long[::1] signs
    cdef double[:, ::1] RV
    cdef double[::1] SL

    for j in range(nrows):
        a = rows[j]

        if lin_mat.shape[0]:
            svec = lin_mat @ a
            if np.max(np.abs(svec)) > eps:
                l0, s0, lin_mat = _cut_lin(lin_mat, svec)
                nrays = rays.shape[0]
                if nrays:
                    sl = rays @ a
                    hit = np.abs(sl) > eps
                    rays[hit] = rays[hit] * s0 - np.outer(sl[hit], l0)
                    nrms = np.sqrt((rays * rays).sum(axis=1))
                    rays = rays / np.maximum(nrms, 1e-300)[:, None]
                newz = np.zeros((nrays + 1, nwords), dtype=np.uint64)
                newz[:nrays] = zmat
                zmat = newz
                Z = zmat
                for i in range(nrays):
                    _set_bit(Z, i, j)
                _fill_prefix(Z, nrays, j)
                rays = np.vstack([rays, l0[None, :]])
                continue

        nrays = rays.shape[0]
        slacks = rays @ a if nrays else np.zeros(0)
        signs_arr = np.zeros(nrays, dtype=np.int64)
        signs_arr[slacks > eps] = 1
        signs_arr[slacks < -eps] = -1
        signs = signs_arr
        npos = int((signs_arr == 1).sum())
        nneg = int((signs_arr == -1).sum())
        if nneg == 0:
            for i in range(nrays):
                if signs[i] == 0:
                    _set_bit(Z, i, j)
            continue
        if nneg == nrays:
            rays = np.zeros((0, dim), dtype=np.float64)
            zmat = np.zeros((0, nwords), dtype=np.uint64)
            Z = zmat
            continue

        need = dim - rank_eq - lin_mat.shape[0] - 2
        zcount_arr = np.empty(nrays, dtype=np.int64)
        zcount = zcount_arr
        for i in range(nrays):
            wc = 0
            for k in range(nwords):
                wc += _popcount64(Z[i, k])
            zcount[i] = wc

        RV = rays
        SL = slacks
        new_v = []
        new_masks = []
        for p in range(nrays):
            if signs[p] != 1:
                continue
            sp = SL[p]
            for n in range(nrays):
                if signs[n] != -1:
                    continue
                wc = 0
                for k in range(nwords):
                    wbuf[k] = Z[p, k] & Z[n, k]
                    wc += _popcount64(wbuf[k])
                if wc < need:
                    continue
                if _is_adjacent(Z, zcount, nrays, p, n, wbuf, wc, nwords):
                    sn = SL[n]
                    vec = np.empty(dim, dtype=np.float64)
                    nrm = 0.0
                    for k in range(dim):
                        s = sp * RV[n, k] - sn * RV[p, k]
                        vec[k] = s
                        nrm += s * s
                    nrm = math.sqrt(nrm)
                    if nrm <= eps:
                        continue  # nearly antiparallel pair, merged face
                    new_v.append(vec / nrm)
                    new_masks.append(np.asarray(wbuf).copy())

        keep = [i for i in range(nrays) if signs[i] >= 0]
        nkeep = len(keep)
        nnew = len(new_v)
        newrays = np.zeros((nkeep + nnew, dim), dtype=np.float64)
        newz = np.zeros((nkeep + nnew, nwords), dtype=np.uint64)
        for t, i in enumerate(keep):
            newrays[t] = rays[i]
            newz[t] = zmat[i]
        for t in range(nnew):
            newrays[nkeep + t] = new_v[t]
            newz[nkeep + t] = new_masks[t]
        rays = newrays
        zmat = newz
        Z = zmat
        for t, i in enumerate(keep):
            if signs[i] == 0:
                _set_bit(Z, t, j)
        for t in range(nnew):
            _set_bit(Z, nkeep + t, j)
        if bud >= 0 and rays.shape[0] > bud:
            raise BudgetExceededError(
                f"ray count {rays.shape[0]} exceeded budget {budget}"
            )

    out_rays = [tuple(float(x) for x in r) for r in rays]
    out_lin = [tuple(float(x) for x in l) for l in lin_mat]
    return out_rays, out_lin
