"""Cone/polytope engine tests: examples frozen from the brute-force oracles
plus the property suites (involution, round trips, soundness, determinism,
exact/approx agreement)."""

import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from gptlab.arith import EXACT, approx
from gptlab.cones import (
    ConeH,
    ConeV,
    Polytope,
    dual_cone,
    facet_enumeration,
    intersect,
    kron,
    member,
    vertex_enumeration,
)
from gptlab.errors import BudgetExceededError, InvalidInputError, UnboundedError

SQUARE_RAYS = ((1, 1, 1), (1, -1, 1), (-1, 1, 1), (-1, -1, 1))
DIAMOND_RAYS = ((1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1))

BOX_EFFECTS = (
    (F(1, 2), F(0), F(1, 2)),
    (F(-1, 2), F(0), F(1, 2)),
    (F(0), F(1, 2), F(1, 2)),
    (F(0), F(-1, 2), F(1, 2)),
)
BOX_STATES = tuple(tuple(F(x) for x in s) for s in SQUARE_RAYS)
UNIT3 = (F(0), F(0), F(1))
PR_VERTEX = tuple(F(x) for x in (1, 1, 0, 1, -1, 0, 0, 0, 1))


def box_pair_hrep():
    """Constraint system of the two-square maximal joint state set."""
    rows = [(kron(e, f), F(0)) for e in BOX_EFFECTS for f in BOX_EFFECTS]
    return rows, [(kron(UNIT3, UNIT3), F(1))]


class TestDualCone:
    def test_orthant_self_dual(self):
        c = ConeV(((1, 0), (0, 1)), 2)
        assert dual_cone(c).rays == c.rays

    def test_square_cone_dual_is_diamond(self):
        d = dual_cone(ConeV(SQUARE_RAYS, 3))
        expected = oracles.brute_dual_rays([tuple(map(F, r)) for r in SQUARE_RAYS], 3)
        assert list(d.rays) == expected
        assert {tuple(map(int, r)) for r in d.rays} == set(DIAMOND_RAYS)

    def test_single_ray_gives_half_plane(self):
        d = dual_cone(ConeV(((1, 0),), 2))
        assert set(d.rays) == {(F(1), F(0)), (F(0), F(1)), (F(0), F(-1))}

    def test_involution_on_square(self):
        c = ConeV(SQUARE_RAYS, 3)
        assert dual_cone(dual_cone(c)) == c

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            ConeV(((1, 0), (0, 1, 1)), 2)

    def test_zero_cone_dual_is_full_space(self):
        d = dual_cone(ConeV((), 2))
        assert set(d.rays) == {(F(1), F(0)), (F(-1), F(0)), (F(0), F(1)), (F(0), F(-1))}


class TestVertexEnumeration:
    def test_unit_simplex(self):
        p = Polytope.from_hrep([((1, 0), 0), ((0, 1), 0)], [((1, 1), 1)], 2)
        assert p.vertices == ((F(0), F(1)), (F(1), F(0)))

    def test_square_cone_round_trip(self):
        h = facet_enumeration(SQUARE_RAYS, kind="cone")
        assert sorted(vertex_enumeration(h)) == list(ConeV(SQUARE_RAYS, 3).rays)

    def test_box_pair_maximal_set_has_24_vertices(self):
        rows, eqs = box_pair_hrep()
        p = Polytope.from_hrep(rows, eqs, 9)
        assert len(p.vertices) == 24
        assert PR_VERTEX in p.vertices
        products = {kron(a, b) for a in BOX_STATES for b in BOX_STATES}
        assert products <= set(p.vertices)
        assert len(products) == 16

    def test_box_pair_matches_brute_force(self):
        rows, eqs = box_pair_hrep()
        p = Polytope.from_hrep(rows, eqs, 9)
        assert list(p.vertices) == oracles.brute_polytope_vertices(rows, eqs, 9)

    def test_empty_feasible_set(self):
        p = Polytope.from_hrep([((1,), 0), ((-1,), 1)], [], 1)
        assert p.vertices == ()

    def test_unbounded_raises(self):
        with pytest.raises(UnboundedError):
            Polytope.from_hrep([((1, 0), 0), ((0, 1), 0)], [], 2).vertices

    def test_budget_guard(self):
        rows, eqs = box_pair_hrep()
        with pytest.raises(BudgetExceededError):
            Polytope.from_hrep(rows, eqs, 9, budget=5).vertices


class TestFacetEnumeration:
    def test_simplex_facets(self):
        p = facet_enumeration([(1, 0), (0, 1)], kind="polytope")
        ineqs, eqs = p.hrep
        assert ineqs == (((F(0), F(1)), F(0)), ((F(1), F(0)), F(0)))
        assert eqs == (((F(1), F(1)), F(1)),)

    def test_square_cone_facets_match_dual(self):
        h = facet_enumeration(SQUARE_RAYS, kind="cone")
        d = dual_cone(ConeV(SQUARE_RAYS, 3))
        assert sorted(h.inequalities) == list(d.rays)
        assert h.equalities == ()

    def test_single_ray_dim2(self):
        h = facet_enumeration([(1, 0)], kind="cone")
        # minimal form: one inequality plus the spanning-line equality
        assert h.inequalities == ((F(1), F(0)),)
        assert h.equalities == ((F(0), F(1)),)
        assert vertex_enumeration(h) == [(F(1), F(0))]

    def test_polytope_round_trip(self):
        pts = [(F(0), F(0)), (F(2), F(0)), (F(0), F(3)), (F(1), F(1))]
        p = facet_enumeration(pts, kind="polytope")
        assert set(p.vertices) == {(F(0), F(0)), (F(2), F(0)), (F(0), F(3))}

    def test_empty_input_raises(self):
        with pytest.raises(InvalidInputError):
            facet_enumeration([], kind="cone")


class TestIntersect:
    def test_idempotence(self):
        h = facet_enumeration(SQUARE_RAYS, kind="cone")
        assert intersect(h, h) == ConeV(SQUARE_RAYS, 3)

    def test_square_with_scaled_diamond_is_octagon(self):
        sq = facet_enumeration(SQUARE_RAYS, kind="cone")
        dia = facet_enumeration([(3, 0, 2), (-3, 0, 2), (0, 3, 2), (0, -3, 2)], kind="cone")
        c = intersect(sq, dia)
        assert len(c.rays) == 8
        for r in c.rays:
            assert member(sq, r) and member(dia, r)

    def test_square_with_true_rotation_approx(self):
        ar = approx()
        s = math.sqrt(2.0)
        rot = [(s, 0, 1), (-s, 0, 1), (0, s, 1), (0, -s, 1)]
        sq = facet_enumeration(SQUARE_RAYS, kind="cone", arith=ar)
        rq = facet_enumeration(rot, kind="cone", arith=ar)
        c = intersect(sq, rq)
        assert len(c.rays) == 8

    def test_superset_absorbed(self):
        small = facet_enumeration(DIAMOND_RAYS, kind="cone")
        big = facet_enumeration(SQUARE_RAYS, kind="cone")
        assert intersect(small, big) == ConeV(DIAMOND_RAYS, 3)

    def test_dimension_mismatch(self):
        a = facet_enumeration([(1, 0), (0, 1)], kind="cone")
        b = facet_enumeration([(1,)], kind="cone")
        with pytest.raises(InvalidInputError):
            intersect(a, b)


class TestMember:
    def test_orthant(self):
        h = ConeH(((1, 0), (0, 1)), (), 2)
        assert member(h, (1, 1))
        assert not member(h, (1, -1))

    def test_pr_vertex_in_box_pair_set(self):
        rows, eqs = box_pair_hrep()
        p = Polytope.from_hrep(rows, eqs, 9)
        assert member(p, PR_VERTEX)
        bad = list(PR_VERTEX)
        bad[0] = F(3, 2)
        assert not member(p, tuple(bad))


class TestKron:
    def test_basis(self):
        assert kron((1, 0), (0, 1)) == (0, 1, 0, 0)

    def test_unit_normalization(self):
        w = kron((F(1), F(1), F(1)), (F(-1), F(1), F(1)))
        from gptlab.linalg import dot

        assert dot(kron(UNIT3, UNIT3), w) == 1

    @given(
        st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=2, max_size=3),
        st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=2, max_size=3),
        st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=2, max_size=3),
    )
    @settings(max_examples=30, deadline=None, derandomize=True)
    def test_bilinearity(self, a, b, c):
        if len(a) != len(b):
            return
        left = kron(tuple(x + y for x, y in zip(a, b)), tuple(c))
        right = tuple(x + y for x, y in zip(kron(tuple(a), tuple(c)), kron(tuple(b), tuple(c))))
        assert left == right


def _random_cone(rng, dim, nrays):
    rays = []
    while len(rays) < nrays:
        v = tuple(F(rng.randint(-3, 3)) for _ in range(dim))
        if any(v):
            rays.append(v)
    return ConeV(tuple(rays), dim)


class TestInvariants:
    def test_dual_involution_random(self):
        rng = random.Random(7)
        for _ in range(40):
            dim = rng.randint(2, 5)
            c = _random_cone(rng, dim, rng.randint(1, 8))
            dd = dual_cone(dual_cone(c))
            # double dual is the closed conic hull: applying it again fixes it
            assert dual_cone(dual_cone(dd)) == dd
            h = facet_enumeration(dd.rays, kind="cone")
            for r in c.rays:
                assert member(h, r)

    def test_involution_exact_on_extreme_inputs(self):
        rng = random.Random(11)
        for _ in range(25):
            dim = rng.randint(2, 4)
            c = dual_cone(dual_cone(_random_cone(rng, dim, rng.randint(2, 6))))
            assert dual_cone(dual_cone(c)) == c

    def test_determinism_under_input_order(self):
        rows, eqs = box_pair_hrep()
        p1 = Polytope.from_hrep(rows, eqs, 9)
        rng = random.Random(3)
        shuffled = rows[:]
        rng.shuffle(shuffled)
        p2 = Polytope.from_hrep(shuffled, eqs, 9)
        assert p1.vertices == p2.vertices

    def test_soundness_vertices_are_members(self):
        rows, eqs = box_pair_hrep()
        p = Polytope.from_hrep(rows, eqs, 9)
        for v in p.vertices:
            assert member(p, v)

    def test_violating_point_fails(self):
        p = Polytope.from_hrep([((1, 0), 0), ((0, 1), 0)], [((1, 1), 1)], 2)
        assert not member(p, (F(-1, 10), F(11, 10)))

    def test_exact_approx_agreement(self):
        rows, eqs = box_pair_hrep()
        pe = Polytope.from_hrep(rows, eqs, 9)
        pa = Polytope.from_hrep(
            [([float(x) for x in a], float(b)) for a, b in rows],
            [([float(x) for x in a], float(b)) for a, b in eqs],
            9,
            arith=approx(),
        )
        rng = random.Random(5)
        verts = pe.vertices
        for _ in range(80):
            k = rng.randint(1, 4)
            pts = [verts[rng.randrange(len(verts))] for _ in range(k)]
            wts = [rng.randint(0, 5) for _ in range(k)]
            if sum(wts) == 0:
                continue
            tot = sum(wts)
            mixp = tuple(sum(F(w) * p[i] for w, p in zip(wts, pts)) / tot for i in range(9))
            jitter = rng.choice([F(0), F(1, 4), F(-1, 4)])
            cand = list(mixp)
            cand[rng.randrange(9)] += jitter
            cand = tuple(cand)
            slacks = [oracles.Fraction(sum(a * x for a, x in zip(row, cand))) - rhs for row, rhs in rows]
            if min(abs(s) for s in slacks) <= F(1, 10 ** 6) and not all(s >= 0 for s in slacks):
                continue  # agreement only promised away from the boundary
            assert member(pe, cand) == member(pa, tuple(float(x) for x in cand))

    def test_approx_enumeration_matches_exact(self):
        rows, eqs = box_pair_hrep()
        pe = Polytope.from_hrep(rows, eqs, 9)
        pa = Polytope.from_hrep(
            [([float(x) for x in a], float(b)) for a, b in rows],
            [([float(x) for x in a], float(b)) for a, b in eqs],
            9,
            arith=approx(),
        )
        assert len(pa.vertices) == len(pe.vertices)
        # same point set; float rounding may reorder the lexicographic sort
        for v in pe.vertices:
            vf = tuple(float(x) for x in v)
            hits = [u for u in pa.vertices if max(abs(x - y) for x, y in zip(u, vf)) < 1e-9]
            assert len(hits) == 1
