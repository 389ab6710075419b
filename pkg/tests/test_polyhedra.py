import random
from fractions import Fraction as F

import pytest

from embform.encodings import gray, unary
from embform.polyhedra import (
    HRep,
    VRep,
    dual_description,
    hrep_to_vrep,
    minimize_hrep,
    vrep_to_hrep,
)
from embform.ratlin import dot, rank, vec_sub
from embform.sos2 import build_sos2, canonical_form, LinearSystem, lambda_names, y_names

from _golden import CC1DSTRONG, embedding_vrep


def test_simplex_hull():
    hull = vrep_to_hrep(VRep(vertices=((1, 0, 0), (0, 1, 0), (0, 0, 1))))
    assert hull.equations == (((1, 1, 1), F(1)),)
    assert set(hull.inequalities) == {
        ((-1, 0, 0), F(0)),
        ((0, -1, 0), F(0)),
        ((0, 0, -1), F(0)),
    }


def test_cube_hull():
    verts = tuple((a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1))
    hull = vrep_to_hrep(VRep(vertices=verts))
    assert not hull.equations
    assert len(hull.inequalities) == 6


def test_unary_embedding_matches_chain_system():
    hull = vrep_to_hrep(embedding_vrep(unary(4)))
    names = lambda_names(4) + y_names(4)
    system = LinearSystem(names, hull.equations, hull.inequalities)
    assert canonical_form(system) == canonical_form(CC1DSTRONG)


def test_unit_square_vertices():
    square = HRep(
        equations=(),
        inequalities=(
            ((1, 0), F(1)),
            ((-1, 0), F(0)),
            ((0, 1), F(1)),
            ((0, -1), F(0)),
        ),
    )
    vrep = hrep_to_vrep(square)
    assert set(vrep.vertices) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert not vrep.rays


def test_strong_chain_relaxation_is_integral():
    vrep = hrep_to_vrep(HRep(CC1DSTRONG.equations, CC1DSTRONG.inequalities))
    for v in vrep.vertices:
        assert all(x in (0, 1) for x in v[5:])


def test_infeasible_system_is_empty():
    infeasible = HRep(
        equations=(),
        inequalities=(((1,), F(0)), ((-1,), F(-1))),
    )
    assert hrep_to_vrep(infeasible).is_empty


def test_infeasible_equations_are_empty():
    contradictory = HRep(
        equations=(((1, 1), F(1)), ((2, 2), F(3))),
        inequalities=(),
    )
    assert hrep_to_vrep(contradictory).is_empty


def test_affine_subspace_vertices():
    line = HRep(equations=(((1, 1), F(2)),), inequalities=())
    vrep = hrep_to_vrep(line)
    assert len(vrep.vertices) == 1
    assert len(vrep.rays) == 2  # the line direction, both ways


def test_unbounded_direction_reported_as_ray():
    quadrant = HRep(
        equations=(),
        inequalities=(((-1, 0), F(0)), ((0, -1), F(0))),
    )
    vrep = hrep_to_vrep(quadrant)
    assert set(vrep.vertices) == {(0, 0)}
    assert set(vrep.rays) == {(0, 1), (1, 0)}


def test_lineality_reported_as_opposite_rays():
    strip = HRep(
        equations=(),
        inequalities=(((1, 0), F(1)), ((-1, 0), F(0))),
    )
    vrep = hrep_to_vrep(strip)
    assert (0, 1) in vrep.rays and (0, -1) in vrep.rays


def test_vrep_with_rays_round_trip():
    wedge = VRep(vertices=((0, 0), (1, 0)), rays=((1, 1),))
    hull = vrep_to_hrep(wedge)
    back = hrep_to_vrep(hull)
    assert set(back.vertices) == {(0, 0), (1, 0)}
    assert set(back.rays) == {(1, 1)}


def test_minimize_removes_duplicates():
    hull = minimize_hrep(
        HRep(
            equations=(),
            inequalities=(
                ((1,), F(1)),
                ((1,), F(1)),
                ((2,), F(2)),
                ((-1,), F(0)),
            ),
        )
    )
    assert len(hull.inequalities) == 2


def test_minimize_promotes_implicit_equality():
    hull = minimize_hrep(
        HRep(equations=(), inequalities=(((1,), F(1)), ((-1,), F(-1))))
    )
    assert hull.equations == (((1,), F(1)),)
    assert not hull.inequalities


def test_minimize_drops_injected_redundant_bound():
    formulation, report = build_sos2(gray(4))
    system = formulation.system
    width = system.num_vars
    redundant = [0] * width
    redundant[2] = -1  # lambda_3 >= 0 is implied for this code
    padded = HRep(
        system.equations, system.inequalities + ((tuple(redundant), F(0)),)
    )
    hull = minimize_hrep(padded)
    assert len(hull.inequalities) == report.size_G + report.size_B


def test_minimize_infeasible_marker():
    hull = minimize_hrep(
        HRep(equations=(), inequalities=(((1, 0), F(0)), ((-1, 0), F(-1))))
    )
    assert hull.inequalities == (((0, 0), F(-1)),)


def test_round_trip_random_01_polytopes():
    # 0-1 points are always in convex position, so the round trip must
    # return exactly the input set
    rng = random.Random(31)
    for dim in (3, 4, 6, 8):
        for _ in range(3):
            count = rng.randrange(dim + 1, dim + 6)
            verts = set()
            while len(verts) < count:
                verts.add(tuple(rng.randrange(2) for _ in range(dim)))
            hull = vrep_to_hrep(VRep(vertices=tuple(sorted(verts))))
            back = hrep_to_vrep(hull)
            assert not back.rays
            assert {tuple(map(F, v)) for v in verts} == set(back.vertices)
            assert vrep_to_hrep(back) == hull


def test_round_trip_random_rational_points():
    # random rational point clouds: interior points must be dropped, the
    # surviving hull must certify every facet and reproduce itself
    rng = random.Random(97)
    for dim in (2, 3, 4):
        for _ in range(4):
            count = rng.randrange(dim + 2, dim + 8)
            pts = [
                tuple(F(rng.randrange(-6, 7), rng.randrange(1, 4)) for _ in range(dim))
                for _ in range(count)
            ]
            hull = vrep_to_hrep(VRep(vertices=tuple(pts)))
            for coeffs, rhs in hull.inequalities:
                assert all(dot(coeffs, p) <= rhs for p in pts)
            for coeffs, rhs in hull.equations:
                assert all(dot(coeffs, p) == rhs for p in pts)
            back = hrep_to_vrep(hull)
            assert not back.rays
            assert set(back.vertices) <= {tuple(map(F, p)) for p in pts}
            assert vrep_to_hrep(back) == hull
            poly_dim = dim - len(hull.equations)
            for coeffs, rhs in hull.inequalities:
                tight = [v for v in back.vertices if dot(coeffs, v) == rhs]
                diffs = [vec_sub(v, tight[0]) for v in tight[1:]]
                assert rank(diffs) == poly_dim - 1, "non-facet row survived"


def test_facet_certificates():
    vrep = embedding_vrep(gray(8))
    hull = vrep_to_hrep(vrep)
    verts = [tuple(map(F, v)) for v in vrep.vertices]
    dim = len(verts[0]) - len(hull.equations)
    for coeffs, rhs in hull.inequalities:
        tight = [v for v in verts if dot(coeffs, v) == rhs]
        assert tight, (coeffs, rhs)
        diffs = [vec_sub(v, tight[0]) for v in tight[1:]]
        assert rank(diffs) == dim - 1
        assert all(dot(coeffs, v) <= rhs for v in verts)


def test_deterministic_output():
    vrep = embedding_vrep(gray(4))
    assert vrep_to_hrep(vrep) == vrep_to_hrep(vrep)


def test_vrep_requires_vertices():
    with pytest.raises(ValueError):
        vrep_to_hrep(VRep(vertices=()))


def test_dual_description_orthant():
    rows = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    lineality, rays = dual_description(rows, 3)
    assert not lineality
    assert set(rays) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_dual_description_halfspace():
    lineality, rays = dual_description([(1, 1)], 2)
    assert lineality == [(1, -1)]
    assert len(rays) == 1 and dot((1, 1), rays[0]) > 0


def test_budget_cap(monkeypatch):
    from embform.polyhedra import BudgetExceededError

    monkeypatch.setenv("EMBFORM_BUDGET_SECONDS", "0")
    with pytest.raises(BudgetExceededError):
        vrep_to_hrep(embedding_vrep(unary(6)))
