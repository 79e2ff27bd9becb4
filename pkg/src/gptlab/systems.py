"""Single GPT systems: state polytope, effect polytope, unit effect.

A system stores its effect set explicitly, which may be smaller than the
full set of probability-valued functionals on the states. `unrestrict`
computes that full set; `is_unrestricted` tests whether the stored set
already equals it. Linear effect restrictions and representation changes
are the two ways of producing new systems from old ones.

The built-in models put the normalization direction last, so the unit
effect is (0, ..., 0, 1), but nothing here relies on that convention.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from gptlab.arith import Arith, ApproxArith, EXACT, approx
from gptlab.cones import ConeV, Polytope, dual_cone, intersect, member
from gptlab.errors import (
    InvalidInputError,
    InvalidRestrictionError,
)
from gptlab.linalg import dot, invert, matvec, rank, transpose


@dataclass(frozen=True, eq=False)
class GptSystem:
    label: str
    dim: int
    unit: tuple
    states: Polytope
    effects: Polytope
    arith: Arith = EXACT

    def __post_init__(self):
        object.__setattr__(self, "unit", self.arith.coerce_vector(self.unit))
        object.__setattr__(self, "_cache", {})
        _validate(self)

    # -- cached geometry ----------------------------------------------------

    def _cached(self, key, build):
        cache = self._cache
        if key not in cache:
            cache[key] = build()
        return cache[key]

    @property
    def state_cone_facets(self) -> tuple:
        """Facet normals of the cone over the states (a.x >= 0 rows)."""
        return self._cached(
            "state_facets",
            lambda: dual_cone(ConeV(self.states.vertices, self.dim, self.arith)).rays,
        )

    def state_member(self, x) -> bool:
        """Is x a normalized state (in the cone and on the unit section)?"""
        if not self.cone_member(x):
            return False
        p = dot(self.unit, self.arith.coerce_vector(x))
        return self.arith.sign(p - self.arith.coerce(1)) == 0

    def cone_member(self, x) -> bool:
        """Is x in the cone generated by the states (no normalization)?"""
        xv = self.arith.coerce_vector(x)
        if self.arith.mode == "exact":
            return all(dot(f, xv) >= 0 for f in self.state_cone_facets)
        scale = max(1.0, max(abs(v) for v in xv))
        return all(dot(f, xv) >= -self.arith.eps * scale for f in self.state_cone_facets)

    def effect_member(self, e) -> bool:
        return member(self.effects, e)

    def __repr__(self):
        return (
            f"GptSystem({self.label!r}, dim={self.dim}, "
            f"states={len(self.states.vertices)}, effects={len(self.effects.vertices)}, "
            f"mode={self.arith.mode})"
        )


def _validate(s: GptSystem) -> None:
    ar = s.arith
    if s.dim < 1:
        raise InvalidInputError("dimension must be positive")
    if len(s.unit) != s.dim or s.states.dim != s.dim or s.effects.dim != s.dim:
        raise InvalidInputError("unit/states/effects dimension mismatch")
    if not s.states.vertices:
        raise InvalidInputError("state space is empty")
    one = ar.coerce(1)
    for w in s.states.vertices:
        if ar.sign(dot(s.unit, w) - one) != 0:
            raise InvalidInputError(f"state {w} is not normalized")
    for e in s.effects.vertices:
        for w in s.states.vertices:
            p = dot(e, w)
            if ar.sign(p) < 0 or ar.sign(p - one) > 0:
                raise InvalidInputError(f"effect {e} gives value outside [0,1] on {w}")
    zero = tuple(ar.coerce(0) for _ in range(s.dim))
    if not member(s.effects, zero):
        raise InvalidInputError("zero functional is not an effect")
    if not member(s.effects, s.unit):
        raise InvalidInputError("unit is not an effect")
    if rank(s.states.vertices, ar) != s.dim:
        raise InvalidInputError("states do not span (affine dimension must be dim-1)")


def evaluate(e, w):
    """Outcome probability of effect e on state w (their inner product)."""
    return dot(e, w)


def mix(points, weights, arith: Arith = EXACT):
    """Convex combination of points with validated weights."""
    if len(points) != len(weights):
        raise InvalidInputError("points and weights must have equal length")
    if not points:
        raise InvalidInputError("nothing to mix")
    ws = [arith.coerce(x) for x in weights]
    if any(arith.sign(w) < 0 for w in ws):
        raise InvalidInputError("weights must be nonnegative")
    if arith.sign(sum(ws) - arith.coerce(1)) != 0:
        raise InvalidInputError("weights must sum to 1")
    dim = len(points[0])
    out = [arith.coerce(0)] * dim
    for p, w in zip(points, ws):
        for i in range(dim):
            out[i] += w * p[i]
    return tuple(out)


def unrestrict(s: GptSystem) -> GptSystem:
    """Same states, effects replaced by every [0,1]-valued functional."""

    def build():
        ar = s.arith
        zero = ar.coerce(0)
        mone = ar.coerce(-1)
        ineqs = [(w, zero) for w in s.states.vertices]
        ineqs += [(tuple(-x for x in w), mone) for w in s.states.vertices]
        full = Polytope.from_hrep(ineqs, [], s.dim, ar)
        full.vertices
        if full == s.effects:
            return s
        return GptSystem(s.label + "*", s.dim, s.unit, s.states, full, ar)

    return s._cached("unrestricted", build)


def is_unrestricted(s: GptSystem) -> bool:
    return unrestrict(s).effects == s.effects


def restrict_effects_linear(s: GptSystem, L) -> GptSystem:
    """Effects become the image of the unrestricted set under invertible L."""
    ar = s.arith
    invert(L, ar)  # raises SingularMapError if not a bijection
    base = unrestrict(s)
    image = [matvec(L, e) for e in base.effects.vertices]
    one = ar.coerce(1)
    for e in image:
        for w in s.states.vertices:
            p = dot(e, w)
            if ar.sign(p) < 0 or ar.sign(p - one) > 0:
                raise InvalidRestrictionError(
                    f"restricted effect {e} gives value outside [0,1]"
                )
    effects = Polytope.from_vertices(image, ar)
    if not member(effects, s.unit):
        raise InvalidRestrictionError("unit effect lost by the restriction")
    return GptSystem(s.label + "|L", s.dim, s.unit, s.states, effects, ar)


def transform_representation(s: GptSystem, L, arith: Arith | None = None) -> GptSystem:
    """Change of representation: effects by L, states by inverse-transpose."""
    ar = arith if arith is not None else _infer_arith(s.arith, L)
    Lc = tuple(ar.coerce_vector(row) for row in L)
    Minv_t = transpose(invert(Lc, ar))
    states = Polytope.from_vertices(
        [matvec(Minv_t, ar.coerce_vector(w)) for w in s.states.vertices], ar
    )
    effects = Polytope.from_vertices(
        [matvec(Lc, ar.coerce_vector(e)) for e in s.effects.vertices], ar
    )
    unit = matvec(Lc, ar.coerce_vector(s.unit))
    return GptSystem(s.label + "~", s.dim, unit, states, effects, ar)


def _infer_arith(base: Arith, L) -> Arith:
    if any(isinstance(x, float) for row in L for x in row):
        return base if base.mode == "approx" else approx()
    return base


def dichotomic_observables(s: GptSystem) -> list:
    """Vertices of E intersected with (unit - E); e and unit-e both effects."""

    def build():
        ineqs, eqs = s.effects.hrep
        flipped_ineqs = [
            (tuple(-x for x in a), rhs - dot(a, s.unit)) for a, rhs in ineqs
        ]
        flipped_eqs = [
            (tuple(-x for x in a), rhs - dot(a, s.unit)) for a, rhs in eqs
        ]
        both = Polytope.from_hrep(
            list(ineqs) + flipped_ineqs, list(eqs) + flipped_eqs, s.dim, s.arith
        )
        return list(both.vertices)

    return s._cached("dichotomic", build)


def same_system(a: GptSystem, b: GptSystem) -> bool:
    """Structural equality: dimensions, unit, states and effects coincide."""
    ar = a.arith.join(b.arith)
    return (
        a.dim == b.dim
        and ar.vec_equal(a.unit, b.unit)
        and a.states == b.states
        and a.effects == b.effects
    )


def as_approx(s: GptSystem, eps: float = 1e-9) -> GptSystem:
    """Float copy of a system (used to force approx mode from the CLI)."""
    ar = approx(eps)
    to_f = lambda vs: [tuple(float(x) for x in v) for v in vs]
    return GptSystem(
        s.label,
        s.dim,
        tuple(float(x) for x in s.unit),
        Polytope.from_vertices(to_f(s.states.vertices), ar),
        Polytope.from_vertices(to_f(s.effects.vertices), ar),
        ar,
    )


# -- serialization ----------------------------------------------------------


def system_to_doc(s: GptSystem) -> dict:
    doc = {
        "label": s.label,
        "dim": s.dim,
        "mode": s.arith.mode,
        "unit": [s.arith.format(x) for x in s.unit],
        "states": [[s.arith.format(x) for x in w] for w in s.states.vertices],
        "effects": [[s.arith.format(x) for x in e] for e in s.effects.vertices],
    }
    if s.arith.mode == "approx":
        doc["eps"] = s.arith.eps
    return doc


def system_from_doc(doc: dict) -> GptSystem:
    try:
        mode = doc["mode"]
        ar = EXACT if mode == "exact" else approx(float(doc.get("eps", 1e-9)))
        unit = tuple(ar.parse(x) for x in doc["unit"])
        states = [tuple(ar.parse(x) for x in w) for w in doc["states"]]
        effects = [tuple(ar.parse(x) for x in e) for e in doc["effects"]]
        label = doc.get("label", "system")
        dim = int(doc["dim"])
    except (KeyError, ValueError, TypeError) as exc:
        raise InvalidInputError(f"malformed system document: {exc}") from exc
    return GptSystem(
        label,
        dim,
        unit,
        Polytope.from_vertices(states, ar),
        Polytope.from_vertices(effects, ar),
        ar,
    )


def dumps_system(s: GptSystem) -> str:
    return json.dumps(system_to_doc(s), indent=2, sort_keys=True) + "\n"


def loads_system(text: str) -> GptSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"not a valid system file: {exc}") from exc
    return system_from_doc(doc)


def save_system(s: GptSystem, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_system(s))


def load_system(path) -> GptSystem:
    with open(path) as fh:
        return loads_system(fh.read())
