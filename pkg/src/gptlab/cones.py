"""Exact polyhedral cones and polytopes: duality, enumeration, membership.

Cones are handled in two descriptions, generators (`ConeV`) and
inequalities (`ConeH`); polytopes carry vertices and/or an inequality
system with right-hand sides. Conversions run through the
double-description kernel (`gptlab._ddcore`). All arithmetic is generic
over the scalar context: exact rationals by default, epsilon-guarded
floats for irrational geometry.

Conventions fixed here and relied on everywhere else:

* canonical ray scaling is "first nonzero entry +-1" (exact) or unit
  Euclidean norm (approx); canonical lists are sorted lexicographically;
* non-pointed cones are represented by listing both signs of a lineality
  basis among the rays;
* `kron` is row-major: entry i*dim(w)+j holds v[i]*w[j].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from gptlab import _ddcore
from gptlab.arith import Arith, EXACT, Vector
from gptlab.errors import InvalidInputError, UnboundedError
from gptlab.linalg import dot

DEFAULT_BUDGET = 50_000


def kron(v: Sequence, w: Sequence) -> Vector:
    """Kronecker product of two vectors, row-major in the first factor."""
    return tuple(x * y for x in v for y in w)


def _check_dims(vectors: Iterable[Sequence], dim: int, what: str) -> None:
    for v in vectors:
        if len(v) != dim:
            raise InvalidInputError(f"{what}: expected dimension {dim}, got {len(v)}")


def _primitive_int(vec) -> tuple[int, ...]:
    """Positive rescaling of a rational vector to coprime integers."""
    den = 1
    for x in vec:
        d = x.denominator
        den = den * d // math.gcd(den, d)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def _dedup_sorted(vectors, arith: Arith):
    if arith.mode == "exact":
        return sorted(set(vectors))
    kept: list[tuple] = []
    for v in sorted(vectors):
        if not any(arith.vec_equal(v, u) for u in kept):
            kept.append(v)
    return kept


def _prepare_rows(rows, dim, arith: Arith):
    """Canonical, deduplicated, lexicographically sorted constraint rows."""
    _check_dims(rows, dim, "constraint row")
    out = []
    for r in rows:
        v = arith.coerce_vector(r)
        if arith.mode == "exact":
            v = _primitive_int(v)
            if any(v):
                out.append(v)
        else:
            u = arith.canonical_ray(v)
            if any(u):
                out.append(u)
    return _dedup_sorted(out, arith)


def _run_dd(ineqs, eqs, dim, arith: Arith, budget):
    """Kernel call on prepared rows; returns canonical (rays, lineality)."""
    ineq_rows = _prepare_rows(ineqs, dim, arith)
    eq_rows = _prepare_rows(eqs, dim, arith)
    if arith.mode == "exact":
        raw_rays, raw_lin = _ddcore.dd_exact(eq_rows, ineq_rows, dim, budget)
        rays = [tuple(Fraction(x) for x in r) for r in raw_rays]
        lin = [tuple(Fraction(x) for x in l) for l in raw_lin]
    else:
        raw_rays, raw_lin = _ddcore.dd_approx(eq_rows, ineq_rows, dim, arith.eps, budget)
        rays, lin = list(raw_rays), list(raw_lin)
    rays = _dedup_sorted([arith.canonical_ray(r) for r in rays], arith)
    lin_out = []
    for l in lin:
        c = arith.canonical_ray(l)
        for x in c:
            if arith.sign(x) != 0:
                if arith.sign(x) < 0:
                    c = tuple(-y for y in c)
                break
        lin_out.append(c)
    return rays, sorted(lin_out)


def _rays_with_lineality(rays, lin):
    """Generator list for a possibly non-pointed cone: rays plus +-basis."""
    out = list(rays)
    for l in lin:
        out.append(l)
        out.append(tuple(-x for x in l))
    return out


def _rref(rows, arith: Arith):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        best = None
        if arith.mode == "exact":
            for i in range(r, len(m)):
                if m[i][c] != 0:
                    best = i
                    break
        else:
            mag = arith.eps
            for i in range(r, len(m)):
                if abs(m[i][c]) > mag:
                    mag, best = abs(m[i][c]), i
        if best is None:
            continue
        m[r], m[best] = m[best], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and not arith.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def _reduce_mod_equalities(ineq_augs, eq_augs, arith: Arith, skip: int = 0):
    """Canonical representatives of inequality rows modulo the equalities.

    For polytopes the rows follow the lifted convention g = (-rhs, a)
    acting on (1, x) and `skip` is 1; reducing against the equality RREF
    zeroes the leading columns, which in particular makes cone-section
    facets homogeneous again. Rows whose vector part vanishes are implied
    by the equalities and dropped.
    """
    eq_rref, pivots = _rref(eq_augs, arith) if eq_augs else ([], [])
    out = []
    for g in ineq_augs:
        g = list(g)
        for row, c in zip(eq_rref, pivots):
            if not arith.is_zero(g[c]):
                f = g[c]
                g = [x - f * y for x, y in zip(g, row)]
        if all(arith.is_zero(x) for x in g[skip:]):
            continue  # implied by the equalities
        out.append(tuple(g))
    return out, eq_rref


@dataclass(frozen=True, eq=False)
class ConeV:
    """Cone given by generators; canonicalized on construction."""

    rays: tuple
    dim: int
    arith: Arith = EXACT

    def __post_init__(self):
        _check_dims(self.rays, self.dim, "ray")
        canon = []
        for r in self.rays:
            v = self.arith.canonical_ray(self.arith.coerce_vector(r))
            if any(self.arith.sign(x) != 0 for x in v):
                canon.append(v)
        object.__setattr__(self, "rays", tuple(_dedup_sorted(canon, self.arith)))

    def __eq__(self, other):
        if not isinstance(other, ConeV):
            return NotImplemented
        if self.dim != other.dim or len(self.rays) != len(other.rays):
            return False
        return all(self.arith.vec_equal(a, b) for a, b in zip(self.rays, other.rays))


@dataclass(frozen=True, eq=False)
class ConeH:
    """Cone given by homogeneous inequalities a.x >= 0 and equalities."""

    inequalities: tuple
    equalities: tuple
    dim: int
    arith: Arith = EXACT

    def __post_init__(self):
        ineq = _prepare_rows(self.inequalities, self.dim, self.arith)
        if self.arith.mode == "exact":
            ineq = [tuple(Fraction(x) for x in r) for r in ineq]
        eq = []
        for r in self.equalities:
            v = self.arith.coerce_vector(r)
            c = self.arith.canonical_ray(v)
            for x in c:
                s = self.arith.sign(x)
                if s != 0:
                    if s < 0:
                        c = tuple(-y for y in c)
                    break
            if any(self.arith.sign(x) != 0 for x in c):
                eq.append(c)
        object.__setattr__(self, "inequalities", tuple(_dedup_sorted(
            [self.arith.canonical_ray(r) for r in ineq], self.arith)))
        object.__setattr__(self, "equalities", tuple(_dedup_sorted(eq, self.arith)))

    def canonical(self) -> "ConeH":
        """Minimal facet description via a generator round trip."""
        gens = vertex_enumeration(self)
        return facet_enumeration(gens, kind="cone", arith=self.arith)

    def __eq__(self, other):
        if not isinstance(other, ConeH):
            return NotImplemented
        return (
            self.dim == other.dim
            and len(self.inequalities) == len(other.inequalities)
            and len(self.equalities) == len(other.equalities)
            and all(self.arith.vec_equal(a, b) for a, b in zip(self.inequalities, other.inequalities))
            and all(self.arith.vec_equal(a, b) for a, b in zip(self.equalities, other.equalities))
        )


class Polytope:
    """Bounded convex polytope; vertices and facet system are interchangeable.

    Inequalities are pairs (a, rhs) meaning a.x >= rhs, equalities pairs
    (c, rhs) meaning c.x = rhs. Whichever description is missing is
    computed on demand through the enumeration kernel and cached.
    """

    __slots__ = ("dim", "arith", "budget", "_verts", "_ineqs", "_eqs")

    def __init__(self, dim, arith=EXACT, vertices=None, ineqs=None, eqs=None, budget=None):
        if vertices is None and ineqs is None:
            raise InvalidInputError("polytope needs vertices or an inequality system")
        self.dim = dim
        self.arith = arith
        self.budget = budget if budget is not None else DEFAULT_BUDGET
        self._verts = None
        self._ineqs = None
        self._eqs = None
        if vertices is not None:
            _check_dims(vertices, dim, "vertex")
            pts = [arith.coerce_vector(p) for p in vertices]
            self._verts = tuple(_dedup_sorted(pts, arith))
        if ineqs is not None:
            rows = [(arith.coerce_vector(a), arith.coerce(b)) for a, b in ineqs]
            _check_dims([a for a, _ in rows], dim, "inequality")
            self._ineqs = tuple(rows)
            rows_eq = [(arith.coerce_vector(a), arith.coerce(b)) for a, b in (eqs or [])]
            _check_dims([a for a, _ in rows_eq], dim, "equality")
            self._eqs = tuple(rows_eq)

    @classmethod
    def from_vertices(cls, vertices, arith=EXACT, reduce=False, budget=None):
        p = cls(dim=len(next(iter(vertices))), arith=arith, vertices=vertices, budget=budget)
        if reduce:
            # drop non-extreme points by a facet/vertex round trip
            q = facet_enumeration(p.vertices, kind="polytope", arith=arith)
            return cls(dim=p.dim, arith=arith, vertices=q.vertices,
                       ineqs=q._ineqs, eqs=q._eqs, budget=budget)
        return p

    @classmethod
    def from_hrep(cls, ineqs, eqs, dim, arith=EXACT, budget=None):
        return cls(dim=dim, arith=arith, ineqs=ineqs, eqs=eqs, budget=budget)

    @property
    def vertices(self) -> tuple:
        if self._verts is None:
            self._verts = tuple(_enumerate_polytope(
                self._ineqs, self._eqs, self.dim, self.arith, self.budget))
        return self._verts

    @property
    def hrep(self):
        """(inequalities, equalities) describing the polytope."""
        if self._ineqs is None:
            q = facet_enumeration(self.vertices, kind="polytope", arith=self.arith)
            self._ineqs, self._eqs = q._ineqs, q._eqs
        return self._ineqs, self._eqs

    def member(self, x) -> bool:
        return member(self, x)

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        a, b = self.vertices, other.vertices
        if self.dim != other.dim or len(a) != len(b):
            return False
        ar = self.arith.join(other.arith)
        return all(ar.vec_equal(u, v) for u, v in zip(a, b))

    __hash__ = None

    def __repr__(self):
        v = len(self._verts) if self._verts is not None else "?"
        return f"Polytope(dim={self.dim}, vertices={v}, mode={self.arith.mode})"


def _enumerate_polytope(ineqs, eqs, dim, arith, budget):
    """Vertices of {x : a.x >= rhs, c.x = rhs} via the lifted cone."""
    lift_ineq = [(-rhs,) + tuple(a) for a, rhs in ineqs]
    lift_ineq.append((arith.coerce(1),) + tuple(arith.coerce(0) for _ in range(dim)))
    lift_eq = [(-rhs,) + tuple(a) for a, rhs in (eqs or [])]
    rays, lin = _run_dd(lift_ineq, lift_eq, dim + 1, arith, budget)
    if lin:
        raise UnboundedError("constraint system has a lineality direction")
    verts = []
    for r in rays:
        t = r[0]
        if arith.sign(t) <= 0:
            raise UnboundedError("constraint system has a recession direction")
        verts.append(tuple(x / t for x in r[1:]))
    return _dedup_sorted(verts, arith)


def dual_cone(c: ConeV) -> ConeV:
    """Extreme generators of {a : a.r >= 0 for every ray r of c}."""
    if c.dim < 1:
        raise InvalidInputError("dimension must be >= 1")
    if not c.rays:
        # dual of the zero cone is the whole space
        basis = [tuple(c.arith.coerce(1 if i == j else 0) for i in range(c.dim)) for j in range(c.dim)]
        return ConeV(tuple(_rays_with_lineality([], basis)), c.dim, c.arith)
    rays, lin = _run_dd(c.rays, [], c.dim, c.arith, DEFAULT_BUDGET)
    return ConeV(tuple(_rays_with_lineality(rays, lin)), c.dim, c.arith)


def vertex_enumeration(h, budget=None):
    """Generators of a ConeH, or vertices of a Polytope in H-form."""
    if isinstance(h, Polytope):
        return list(h.vertices)
    if isinstance(h, ConeH):
        rays, lin = _run_dd(h.inequalities, h.equalities, h.dim, h.arith,
                            budget if budget is not None else DEFAULT_BUDGET)
        return sorted(_rays_with_lineality(rays, lin))
    raise InvalidInputError(f"cannot enumerate {type(h).__name__}")


def facet_enumeration(vertices_or_rays, kind: str, arith: Arith = EXACT, budget=None):
    """Minimal inequality description of a cone (ConeH) or polytope (Polytope)."""
    pts = list(vertices_or_rays)
    if not pts:
        raise InvalidInputError("facet_enumeration needs a non-empty input")
    budget = budget if budget is not None else DEFAULT_BUDGET
    if kind == "cone":
        cone = ConeV(tuple(pts), len(pts[0]), arith)
        rays, lin = _run_dd(cone.rays, [], cone.dim, arith, budget)
        reduced, eq_rref = _reduce_mod_equalities(list(rays), list(lin), arith, skip=0)
        return ConeH(tuple(reduced), tuple(eq_rref), cone.dim, arith)
    if kind == "polytope":
        dim = len(pts[0])
        _check_dims(pts, dim, "vertex")
        one = arith.coerce(1)
        lifted = [(one,) + tuple(arith.coerce_vector(p)) for p in pts]
        rays, lin = _run_dd(lifted, [], dim + 1, arith, budget)
        reduced, eq_rref = _reduce_mod_equalities(list(rays), list(lin), arith, skip=1)
        ineqs, eqs = [], []
        for g in reduced:
            row = arith.canonical_ray(g)
            ineqs.append((row[1:], -row[0]))
        for g in eq_rref:
            cvec = g[1:]
            if all(arith.sign(x) == 0 for x in cvec):
                raise InvalidInputError("inconsistent affine hull")
            row = arith.canonical_ray(g)
            for x in row[1:]:
                s = arith.sign(x)
                if s != 0:
                    if s < 0:
                        row = tuple(-y for y in row)
                    break
            eqs.append((row[1:], -row[0]))
        return Polytope.from_hrep(sorted(ineqs), sorted(eqs), dim, arith, budget=budget)
    raise InvalidInputError(f"unknown kind {kind!r}")


def _as_constraints(obj):
    """(ineqs, eqs, dim, arith, is_cone) for any supported geometry."""
    if isinstance(obj, ConeH):
        return ([(a, 0) for a in obj.inequalities],
                [(a, 0) for a in obj.equalities], obj.dim, obj.arith, True)
    if isinstance(obj, ConeV):
        h = facet_enumeration(obj.rays, kind="cone", arith=obj.arith)
        return _as_constraints(h)
    if isinstance(obj, Polytope):
        ineqs, eqs = obj.hrep
        return (list(ineqs), list(eqs), obj.dim, obj.arith, False)
    raise InvalidInputError(f"unsupported geometry {type(obj).__name__}")


def intersect(a, b, budget=None):
    """Intersection by constraint concatenation plus one enumeration."""
    ia, ea, dima, ara, cone_a = _as_constraints(a)
    ib, eb, dimb, arb, cone_b = _as_constraints(b)
    if dima != dimb:
        raise InvalidInputError(f"dimension mismatch: {dima} vs {dimb}")
    if cone_a != cone_b:
        raise InvalidInputError("cannot intersect a cone with a polytope")
    arith = ara.join(arb)
    budget = budget if budget is not None else DEFAULT_BUDGET
    if cone_a:
        rows = [r for r, _ in ia + ib]
        eqs = [r for r, _ in ea + eb]
        rays, lin = _run_dd(rows, eqs, dima, arith, budget)
        return ConeV(tuple(_rays_with_lineality(rays, lin)), dima, arith)
    poly = Polytope.from_hrep(ia + ib, ea + eb, dima, arith, budget=budget)
    poly.vertices  # enumerate eagerly; canonical result
    return poly


def _member_rows(ineqs, eqs, x, arith: Arith) -> bool:
    if arith.mode == "exact":
        for a, rhs in ineqs:
            if dot(a, x) < rhs:
                return False
        for a, rhs in eqs:
            if dot(a, x) != rhs:
                return False
        return True
    xn = math.sqrt(math.fsum(float(v) * float(v) for v in x) + 1.0)
    for a, rhs in ineqs:
        rn = math.sqrt(math.fsum(float(v) * float(v) for v in a) + float(rhs) ** 2)
        if dot(a, x) - rhs < -arith.eps * rn * xn:
            return False
    for a, rhs in eqs:
        rn = math.sqrt(math.fsum(float(v) * float(v) for v in a) + float(rhs) ** 2)
        if abs(dot(a, x) - rhs) > arith.eps * rn * xn:
            return False
    return True


def member(s, x) -> bool:
    """Constraint membership test with the context's tolerance policy."""
    if isinstance(s, ConeH):
        if len(x) != s.dim:
            raise InvalidInputError(f"dimension mismatch: {len(x)} vs {s.dim}")
        xv = s.arith.coerce_vector(x)
        return _member_rows([(a, s.arith.coerce(0)) for a in s.inequalities],
                            [(a, s.arith.coerce(0)) for a in s.equalities], xv, s.arith)
    if isinstance(s, Polytope):
        if len(x) != s.dim:
            raise InvalidInputError(f"dimension mismatch: {len(x)} vs {s.dim}")
        ineqs, eqs = s.hrep
        xv = s.arith.coerce_vector(x)
        return _member_rows(ineqs, eqs, xv, s.arith)
    raise InvalidInputError(f"membership undefined for {type(s).__name__}")
