"""Bipartite measurement scenarios, behaviors, and CHSH optimization.

A scenario fixes two dichotomic measurements per side by their "+"
effects. `chsh_max` maximizes the CHSH combination over all joint-state
vertices and every ordered 4-tuple of extreme dichotomic effects; the
objective is multilinear in the state and in each effect separately, so
the maximum over the polytopes is attained there. A float search narrows
down candidates, which are then re-evaluated exactly in exact mode; ties
are broken by the lexicographically smallest witness.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from gptlab.arith import Arith
from gptlab.cones import member
from gptlab.errors import InvalidEffectError, InvalidInputError
from gptlab.linalg import dot, vsub
from gptlab.systems import (
    GptSystem,
    dichotomic_observables,
    restrict_effects_linear,
    unrestrict,
)
from gptlab.tensors import JointSystem, contract, generalized_max_tensor, max_tensor

OUTCOMES = ("+", "-")

_FLOAT_MARGIN = 1e-7  # float-search band before exact re-evaluation


@dataclass(frozen=True)
class Scenario:
    """Two dichotomic measurements per side, given by their '+' effects."""

    a0: tuple
    a1: tuple
    b0: tuple
    b1: tuple

    def validate(self, A: GptSystem, B: GptSystem) -> None:
        okA = {tuple(e) for e in dichotomic_observables(A)}
        okB = {tuple(e) for e in dichotomic_observables(B)}
        arA, arB = A.arith, B.arith
        for e in (self.a0, self.a1):
            if not any(arA.vec_equal(e, d) for d in okA) and not _dichotomic_member(A, e):
                raise InvalidEffectError(f"{e} is not a dichotomic effect of {A.label}")
        for f in (self.b0, self.b1):
            if not any(arB.vec_equal(f, d) for d in okB) and not _dichotomic_member(B, f):
                raise InvalidEffectError(f"{f} is not a dichotomic effect of {B.label}")


def _dichotomic_member(s: GptSystem, e) -> bool:
    return member(s.effects, e) and member(s.effects, vsub(s.unit, e))


@dataclass(frozen=True)
class Behavior:
    """Conditional probability table p(a,b|x,y) for a 2x2x2x2 scenario."""

    table: tuple  # flat, indexed by ((x*2+y)*2+a)*2+b
    arith: Arith

    def prob(self, x: int, y: int, a: int, b: int):
        return self.table[((x * 2 + y) * 2 + a) * 2 + b]

    def validate(self) -> None:
        ar = self.arith
        one = ar.coerce(1)
        for x in (0, 1):
            for y in (0, 1):
                tot = sum(self.prob(x, y, a, b) for a in (0, 1) for b in (0, 1))
                if ar.sign(tot - one) != 0:
                    raise InvalidInputError(f"table rows for ({x},{y}) do not sum to 1")
                for a in (0, 1):
                    for b in (0, 1):
                        p = self.prob(x, y, a, b)
                        if ar.sign(p) < 0 or ar.sign(p - one) > 0:
                            raise InvalidInputError("probability outside [0,1]")
        for x in (0, 1):
            for a in (0, 1):
                m0 = sum(self.prob(x, 0, a, b) for b in (0, 1))
                m1 = sum(self.prob(x, 1, a, b) for b in (0, 1))
                if ar.sign(m0 - m1) != 0:
                    raise InvalidInputError("signalling from B to A")
        for y in (0, 1):
            for b in (0, 1):
                m0 = sum(self.prob(0, y, a, b) for a in (0, 1))
                m1 = sum(self.prob(1, y, a, b) for a in (0, 1))
                if ar.sign(m0 - m1) != 0:
                    raise InvalidInputError("signalling from A to B")

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("x,y,a,b,p\n")
        for x in (0, 1):
            for y in (0, 1):
                for a in (0, 1):
                    for b in (0, 1):
                        out.write(
                            f"{x},{y},{OUTCOMES[a]},{OUTCOMES[b]},"
                            f"{self.arith.format(self.prob(x, y, a, b))}\n"
                        )
        return out.getvalue()


def behavior(w, sc: Scenario, A: GptSystem, B: GptSystem) -> Behavior:
    """Probability table of a joint state under a scenario."""
    sc.validate(A, B)
    ar = A.arith.join(B.arith)
    table = []
    for x in (0, 1):
        ex = (sc.a0, sc.a1)[x]
        for y in (0, 1):
            fy = (sc.b0, sc.b1)[y]
            for a in (0, 1):
                ea = ex if a == 0 else vsub(A.unit, ex)
                sigma = contract(w, "A", ea, A.dim, B.dim)
                for b in (0, 1):
                    fb = fy if b == 0 else vsub(B.unit, fy)
                    table.append(dot(sigma, fb))
    return Behavior(tuple(table), ar)


def chsh_value(b: Behavior):
    """S = E00 + E01 + E10 - E11 from a behavior table."""
    def corr(x, y):
        return (
            b.prob(x, y, 0, 0)
            - b.prob(x, y, 0, 1)
            - b.prob(x, y, 1, 0)
            + b.prob(x, y, 1, 1)
        )

    return corr(0, 0) + corr(0, 1) + corr(1, 0) - corr(1, 1)


@dataclass(frozen=True)
class ChshResult:
    value: object
    state: tuple
    effects: tuple  # (a0, a1, b0, b1)
    kind: str

    def scenario(self) -> Scenario:
        return Scenario(*self.effects)

    def to_doc(self, A: GptSystem, B: GptSystem) -> dict:
        ar = A.arith.join(B.arith)
        return {
            "model_a": A.label,
            "model_b": B.label,
            "tensor_kind": self.kind,
            "S": ar.format(self.value),
            "witness": {
                "state": [ar.format(x) for x in self.state],
                "effects": [[ar.format(x) for x in e] for e in self.effects],
            },
        }


def _correlator_tensor(verts, hatA, hatB, dA, dB):
    """Float correlators M[v, i, j] = (hatA_i x hatB_j) . w_v."""
    FA = np.array([[float(x) for x in h] for h in hatA])
    FB = np.array([[float(x) for x in h] for h in hatB])
    W = np.array([[float(x) for x in w] for w in verts]).reshape(len(verts), dA, dB)
    return np.einsum("ia,vab,jb->vij", FA, W, FB)


def _exact_correlators(w, hatA, hatB, dA, dB):
    rows = [contract(w, "A", h, dA, dB) for h in hatA]
    return [[dot(r, h) for h in hatB] for r in rows]


def chsh_max(J: JointSystem, effects_a=None, effects_b=None) -> ChshResult:
    """Exhaustive CHSH maximum over vertices and dichotomic 4-tuples.

    By default the measurements range over all extreme dichotomic effects
    of the two component systems (including the trivial pair 0 and unit,
    which always admits the deterministic value 2). Pass explicit effect
    lists to optimize over a different finite measurement set, e.g. only
    nontrivial effects of another system measured on this joint set.
    """
    A, B = J.sysA, J.sysB
    verts = J.joint_states.vertices
    DA = list(effects_a) if effects_a is not None else dichotomic_observables(A)
    DB = list(effects_b) if effects_b is not None else dichotomic_observables(B)
    if not verts or not DA or not DB:
        raise InvalidInputError("chsh_max needs joint vertices and dichotomic effects")
    ar = J.arith
    hatA = [vsub(tuple(2 * x for x in e), A.unit) for e in DA]
    hatB = [vsub(tuple(2 * x for x in f), B.unit) for f in DB]

    M = _correlator_tensor(verts, hatA, hatB, A.dim, B.dim)
    # S[i0,i1,j0,j1] = (M[i0,j0] + M[i0,j1]) + (M[i1,j0] - M[i1,j1])
    T1 = M[:, :, :, None] + M[:, :, None, :]
    T2 = M[:, :, :, None] - M[:, :, None, :]
    best = T1.max(axis=1) + T2.max(axis=1)  # per vertex and (j0, j1)
    s_float = float(best.max())

    margin = _FLOAT_MARGIN
    cand_idx = [v for v in range(len(verts)) if best[v].max() >= s_float - margin]

    if ar.mode == "approx":
        for v in cand_idx:
            Sv = T1[v][:, None, :, :] + T2[v][None, :, :, :]
            hits = np.argwhere(Sv >= s_float)
            if hits.size:
                i0, i1, j0, j1 = (int(t) for t in hits[0])
                return ChshResult(
                    s_float, verts[v], (DA[i0], DA[i1], DB[j0], DB[j1]), J.kind
                )
        raise AssertionError("float maximum not reattained")

    # exact mode: re-evaluate every candidate combination exactly
    best_val = None
    combos_per_vertex = []
    for v in cand_idx:
        Mx = _exact_correlators(verts[v], hatA, hatB, A.dim, B.dim)
        Sv = T1[v][:, None, :, :] + T2[v][None, :, :, :]
        combos = []
        for i0, i1, j0, j1 in np.argwhere(Sv >= s_float - margin):
            val = Mx[i0][j0] + Mx[i0][j1] + Mx[i1][j0] - Mx[i1][j1]
            combos.append(((int(i0), int(i1), int(j0), int(j1)), val))
            if best_val is None or val > best_val:
                best_val = val
        combos_per_vertex.append((v, combos))
    for v, combos in combos_per_vertex:  # vertices already in canonical order
        for (i0, i1, j0, j1), val in sorted(c for c in combos):
            if val == best_val:
                return ChshResult(
                    best_val, verts[v], (DA[i0], DA[i1], DB[j0], DB[j1]), J.kind
                )
    raise AssertionError("exact maximum not reattained")


@dataclass(frozen=True)
class CorrelationBoundReport:
    s_generalized: object
    s_unrestricted: object
    s_max_restricted: object
    bound_holds: bool
    identity_holds: bool

    @property
    def passed(self) -> bool:
        return self.bound_holds and self.identity_holds

    def to_doc(self, arith: Arith) -> dict:
        return {
            "S_generalized_restricted": arith.format(self.s_generalized),
            "S_max_unrestricted": arith.format(self.s_unrestricted),
            "S_max_restricted": arith.format(self.s_max_restricted),
            "bound_holds": self.bound_holds,
            "identity_holds": self.identity_holds,
        }


def correlation_bound_check(A: GptSystem, B: GptSystem, LA, LB) -> CorrelationBoundReport:
    """Compare restricted-system correlations against the unrestricted bound.

    Restricting effects by bijections can only weaken CHSH on the
    generalized product, while on the plain maximal product the restricted
    and unrestricted values coincide (a pure change of representation).
    """
    A2 = restrict_effects_linear(A, LA)
    B2 = restrict_effects_linear(B, LB)
    s_gen = chsh_max(generalized_max_tensor(A2, B2)).value
    s_unr = chsh_max(max_tensor(unrestrict(A), unrestrict(B))).value
    s_res = chsh_max(max_tensor(A2, B2)).value
    ar = A.arith.join(B.arith)
    if ar.mode == "exact":
        bound = s_gen <= s_unr
        ident = s_res == s_unr
    else:
        tol = 1000 * ar.eps
        bound = float(s_gen) <= float(s_unr) + tol
        ident = abs(float(s_res) - float(s_unr)) <= tol
    return CorrelationBoundReport(s_gen, s_unr, s_res, bound, ident)
