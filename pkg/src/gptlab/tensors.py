"""Joint state spaces and conditional states for bipartite systems.

Three joint state sets are built over the Kronecker product space, in
increasing size: the hull of product states, the generalized maximal
tensor product (constraints from both one-sided unrestrictions), and the
maximal tensor product (constraints from the stored effect sets only).
The generalized set is exactly the set of joint vectors with well-defined
conditional states on both sides; `membership_generalized` and
`has_valid_conditionals` are two independent routes to that predicate and
must agree everywhere.

Joint vectors are row-major in the first factor: index i*dim(B)+j.
"""

from __future__ import annotations

from dataclasses import dataclass

from gptlab.arith import Arith
from gptlab.cones import Polytope, kron, member
from gptlab.errors import InvalidEffectError, InvalidInputError
from gptlab.linalg import dot
from gptlab.systems import GptSystem, unrestrict

KIND_PRODUCT = "product"
KIND_GENMAX = "genmax"
KIND_MAX = "max"


@dataclass(frozen=True, eq=False)
class JointSystem:
    sysA: GptSystem
    sysB: GptSystem
    kind: str
    joint_states: Polytope

    @property
    def unit(self):
        return kron(self.sysA.unit, self.sysB.unit)

    @property
    def arith(self) -> Arith:
        return self.sysA.arith.join(self.sysB.arith)

    def __repr__(self):
        return (
            f"JointSystem({self.sysA.label!r} x {self.sysB.label!r}, kind={self.kind}, "
            f"vertices={len(self.joint_states.vertices)})"
        )


def _nonzero_effects(system: GptSystem):
    ar = system.arith
    return [e for e in system.effects.vertices if any(ar.sign(x) != 0 for x in e)]


def _product_rows(A: GptSystem, B: GptSystem):
    return [kron(e, f) for e in _nonzero_effects(A) for f in _nonzero_effects(B)]


def _joint_polytope(rows, A, B, budget):
    ar = A.arith.join(B.arith)
    dim = A.dim * B.dim
    one = ar.coerce(1)
    zero = ar.coerce(0)
    ineqs = [(r, zero) for r in rows]
    eqs = [(kron(A.unit, B.unit), one)]
    p = Polytope.from_hrep(ineqs, eqs, dim, ar, budget=budget)
    p.vertices
    return p


def max_tensor(A: GptSystem, B: GptSystem, budget=None) -> JointSystem:
    """All normalized joint vectors positive on products of stored effects."""
    rows = _product_rows(A, B)
    return JointSystem(A, B, KIND_MAX, _joint_polytope(rows, A, B, budget))


def generalized_max_tensor(A: GptSystem, B: GptSystem, budget=None) -> JointSystem:
    """Intersection of the two one-sided unrestricted maximal products."""
    rows = genmax_rows(A, B)
    return JointSystem(A, B, KIND_GENMAX, _joint_polytope(rows, A, B, budget))


def genmax_rows(A: GptSystem, B: GptSystem):
    """Constraint rows defining the generalized maximal tensor product."""
    return _product_rows(unrestrict(A), B) + _product_rows(A, unrestrict(B))


def product_states(A: GptSystem, B: GptSystem) -> JointSystem:
    """Hull of products of pure states (the separable baseline)."""
    ar = A.arith.join(B.arith)
    verts = [kron(a, b) for a in A.states.vertices for b in B.states.vertices]
    return JointSystem(A, B, KIND_PRODUCT, Polytope.from_vertices(verts, ar))


def product_state(wA, wB):
    return kron(wA, wB)


def contract(w, side: str, vec, dA: int, dB: int):
    """Apply a one-sided functional to a joint vector.

    side "B" with f gives the unnormalized A-vector sum_j w[i*dB+j] f[j];
    side "A" is symmetric.
    """
    if len(w) != dA * dB:
        raise InvalidInputError(f"joint vector has dimension {len(w)}, expected {dA * dB}")
    if side == "B":
        if len(vec) != dB:
            raise InvalidInputError("effect dimension mismatch")
        return tuple(
            sum(w[i * dB + j] * vec[j] for j in range(dB)) for i in range(dA)
        )
    if side == "A":
        if len(vec) != dA:
            raise InvalidInputError("effect dimension mismatch")
        return tuple(
            sum(w[i * dB + j] * vec[i] for i in range(dA)) for j in range(dB)
        )
    raise InvalidInputError(f"side must be 'A' or 'B', got {side!r}")


def marginal(w, side: str, A: GptSystem, B: GptSystem):
    """Unconditioned marginal on `side` (contraction with the other unit)."""
    if side == "A":
        return contract(w, "B", B.unit, A.dim, B.dim)
    if side == "B":
        return contract(w, "A", A.unit, A.dim, B.dim)
    raise InvalidInputError(f"side must be 'A' or 'B', got {side!r}")


def conditional_state(w, side: str, e, A: GptSystem, B: GptSystem):
    """Probability and post-measurement state when e occurs on `side`.

    Returns (prob, state-on-the-other-side) with the state absent when the
    probability is not strictly positive.
    """
    meas = A if side == "A" else B
    other = B if side == "A" else A
    if not member(meas.effects, e):
        raise InvalidEffectError(f"{e} is not an effect of system {meas.label}")
    ar = A.arith.join(B.arith)
    sigma = contract(w, side, e, A.dim, B.dim)
    prob = dot(other.unit, sigma)
    if ar.sign(prob) <= 0:
        return prob, None
    return prob, tuple(x / prob for x in sigma)


def has_valid_conditionals(w, A: GptSystem, B: GptSystem) -> bool:
    """True iff every one-sided conditioning lands in the other state cone.

    Checking the unnormalized contraction against the state cone covers
    both cases at once: positive probability with a valid normalized
    conditional, or zero probability with a vanishing contraction.
    """
    for f in B.effects.vertices:
        if not A.cone_member(contract(w, "B", f, A.dim, B.dim)):
            return False
    for e in A.effects.vertices:
        if not B.cone_member(contract(w, "A", e, A.dim, B.dim)):
            return False
    return True


def membership_generalized(w, A: GptSystem, B: GptSystem, rows=None) -> bool:
    """Direct H-form test against the generalized product constraints."""
    ar = A.arith.join(B.arith)
    if rows is None:
        rows = genmax_rows(A, B)
    norm = dot(kron(A.unit, B.unit), w)
    if ar.mode == "exact":
        if norm != 1:
            return False
        return all(dot(r, w) >= 0 for r in rows)
    scale = max(1.0, max(abs(float(x)) for x in w))
    if abs(norm - 1.0) > ar.eps * scale:
        return False
    return all(dot(r, w) >= -ar.eps * scale * max(1.0, max(abs(x) for x in r)) for r in rows)


# -- serialization ----------------------------------------------------------


def joint_to_doc(j: JointSystem) -> dict:
    from gptlab.systems import system_to_doc

    ar = j.arith
    return {
        "kind": j.kind,
        "system_a": system_to_doc(j.sysA),
        "system_b": system_to_doc(j.sysB),
        "joint_states": [[ar.format(x) for x in v] for v in j.joint_states.vertices],
    }


def joint_from_doc(doc: dict) -> JointSystem:
    from gptlab.systems import system_from_doc

    try:
        A = system_from_doc(doc["system_a"])
        B = system_from_doc(doc["system_b"])
        kind = doc["kind"]
        ar = A.arith.join(B.arith)
        verts = [tuple(ar.parse(x) for x in v) for v in doc["joint_states"]]
    except (KeyError, ValueError, TypeError) as exc:
        raise InvalidInputError(f"malformed joint system document: {exc}") from exc
    if kind not in (KIND_PRODUCT, KIND_GENMAX, KIND_MAX):
        raise InvalidInputError(f"unknown joint kind {kind!r}")
    poly = Polytope.from_vertices(verts, ar)
    return JointSystem(A, B, kind, poly)
