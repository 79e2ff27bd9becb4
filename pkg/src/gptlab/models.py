"""Model zoo: classical systems, boxworld and its noisy variants, regular
polygon systems, self-dualization, and the probabilistic Spekkens bit.

All rational-coordinate models are exact; polygon models have irrational
radius and are built in approx mode. The last coordinate is the
normalization direction, so the unit effect is (0, ..., 0, 1).
"""

from __future__ import annotations

import math
from fractions import Fraction

from gptlab.arith import Arith, EXACT, approx, parse_scalar
from gptlab.cones import ConeV, Polytope, dual_cone
from gptlab.errors import InvalidInputError
from gptlab.linalg import dot
from gptlab.systems import GptSystem, restrict_effects_linear


def _unrestricted_effects(states, dim, arith: Arith) -> Polytope:
    """All functionals with values in [0,1] on every state."""
    zero = arith.coerce(0)
    mone = arith.coerce(-1)
    ineqs = [(tuple(w), zero) for w in states]
    ineqs += [(tuple(-x for x in w), mone) for w in states]
    p = Polytope.from_hrep(ineqs, [], dim, arith)
    p.vertices
    return p


def _unit(dim, arith: Arith):
    return tuple(arith.coerce(1 if i == dim - 1 else 0) for i in range(dim))


def classical(k: int) -> GptSystem:
    """Classical k-outcome system: a simplex with the full dual effect set."""
    if k < 2:
        raise InvalidInputError("classical systems need k >= 2")
    dim = k
    states = []
    for i in range(k - 1):
        v = [Fraction(0)] * (k - 1)
        v[i] = Fraction(1)
        states.append(tuple(v) + (Fraction(1),))
    states.append(tuple([Fraction(-1)] * (k - 1)) + (Fraction(1),))
    effects = _unrestricted_effects(states, dim, EXACT)
    return GptSystem(
        f"classical:{k}", dim, _unit(dim, EXACT),
        Polytope.from_vertices(states, EXACT), effects, EXACT,
    )


def boxworld() -> GptSystem:
    """Square state space with the full dual effect set."""
    states = [
        (Fraction(s1), Fraction(s2), Fraction(1))
        for s1 in (1, -1)
        for s2 in (1, -1)
    ]
    effects = _unrestricted_effects(states, 3, EXACT)
    return GptSystem(
        "boxworld", 3, _unit(3, EXACT),
        Polytope.from_vertices(states, EXACT), effects, EXACT,
    )


def noisy_boxworld(lam) -> GptSystem:
    """Boxworld with effects shrunk by diag(lam, lam, 1) toward the center.

    For lam < 1 no nontrivial effect reaches probability 1 on any state:
    the unit measure is the only certain outcome.
    """
    lam = Fraction(lam)
    if not (0 < lam <= 1):
        raise InvalidInputError("noise parameter must be in (0, 1]")
    L = (
        (lam, Fraction(0), Fraction(0)),
        (Fraction(0), lam, Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(1)),
    )
    s = restrict_effects_linear(boxworld(), L)
    return GptSystem(f"noisy_boxworld:{lam}", s.dim, s.unit, s.states, s.effects, s.arith)


def polygon(n: int, eps: float = 1e-9) -> GptSystem:
    """Regular n-gon state space at the weakly self-dual radius.

    The radius sqrt(sec(pi/n)) makes the dual of the state cone a rotated
    copy of itself; it is irrational, so these systems live in approx
    mode (the exact rational square is `boxworld`).
    """
    if n < 3:
        raise InvalidInputError("polygons need n >= 3")
    ar = approx(eps)
    r = math.sqrt(1.0 / math.cos(math.pi / n))
    states = [
        (r * math.cos(2 * math.pi * i / n), r * math.sin(2 * math.pi * i / n), 1.0)
        for i in range(n)
    ]
    effects = _unrestricted_effects(states, 3, ar)
    return GptSystem(
        f"polygon:{n}", 3, _unit(3, ar),
        Polytope.from_vertices(states, ar), effects, ar,
    )


def self_dualize(s: GptSystem) -> GptSystem:
    """Restrict the effect cone to cone(states) intersected with its dual.

    The two cones are identified through the inner product of the stored
    representation. Every pair of resulting effects has nonnegative inner
    product, and the effect set shrinks inside the unrestricted one; the
    states are untouched, so applying this twice changes nothing more.
    """
    ar = s.arith
    state_cone = ConeV(s.states.vertices, s.dim, ar)
    c_facets = dual_cone(state_cone).rays  # H-rows of cone(states)
    zero = ar.coerce(0)
    mone = ar.coerce(-1)
    # K = cone(states) ∩ dual(cone(states)); cap by value <= 1 on states
    ineqs = [(tuple(f), zero) for f in c_facets]
    ineqs += [(tuple(w), zero) for w in s.states.vertices]
    ineqs += [(tuple(-x for x in w), mone) for w in s.states.vertices]
    effects = Polytope.from_hrep(ineqs, [], s.dim, ar)
    effects.vertices
    return GptSystem(s.label + "|selfdual", s.dim, s.unit, s.states, effects, ar)


def selfdual_polygon(n: int, eps: float = 1e-9) -> GptSystem:
    return self_dualize(polygon(n, eps))


def spekkens_bit(kind: str = "restricted") -> GptSystem:
    """Probabilistic Spekkens bit: octahedron states; the restricted kind
    carries only the six knowledge-balance effects plus 0 and unit."""
    states = []
    for i in range(3):
        for sign in (1, -1):
            v = [Fraction(0)] * 4
            v[i] = Fraction(sign)
            v[3] = Fraction(1)
            states.append(tuple(v))
    unit = _unit(4, EXACT)
    if kind == "unrestricted":
        effects = _unrestricted_effects(states, 4, EXACT)
        label = "spekkens_unrestricted"
    elif kind == "restricted":
        half = Fraction(1, 2)
        verts = [tuple(Fraction(0) for _ in range(4)), unit]
        verts += [tuple(half * x for x in w) for w in states]
        effects = Polytope.from_vertices(verts, EXACT)
        label = "spekkens_restricted"
    else:
        raise InvalidInputError(f"unknown spekkens kind {kind!r}")
    return GptSystem(label, 4, unit, Polytope.from_vertices(states, EXACT), effects, EXACT)


def parse_model_id(text: str, eps: float = 1e-9) -> GptSystem:
    """Build a zoo system from an id like 'noisy_boxworld:3/4' or 'polygon:8'."""
    name, _, param = text.partition(":")
    name = name.strip()
    try:
        if name == "classical":
            return classical(int(param))
        if name == "boxworld":
            return boxworld()
        if name == "noisy_boxworld":
            return noisy_boxworld(parse_scalar(param))
        if name == "polygon":
            return polygon(int(param), eps)
        if name == "selfdual_polygon":
            return selfdual_polygon(int(param), eps)
        if name == "spekkens_restricted":
            return spekkens_bit("restricted")
        if name == "spekkens_unrestricted":
            return spekkens_bit("unrestricted")
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"bad model parameter in {text!r}: {exc}") from exc
    raise InvalidInputError(f"unknown model {text!r}")


MODEL_NAMES = (
    "classical:<k>",
    "boxworld",
    "noisy_boxworld:<lambda>",
    "polygon:<n>",
    "selfdual_polygon:<n>",
    "spekkens_restricted",
    "spekkens_unrestricted",
)
