import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from conftest import random_curve
from squarepeg.poly import MultiPoly
from squarepeg.polytope import (LatticePolytopeP, bezout_number, cohen_hickey_triangulation,
                                convex_hull_2d, det, inscribed_bound, minkowski_params,
                                minkowski_support_vertices, minkowski_volume_poly, mixed_area_2d,
                                mixed_volume, newton_matches, newton_polytopes, p1_vertices,
                                p2_vertices, paired_minkowski_vertices, polygon_area,
                                shape_of_generator, simplex_volume, triangulation_volume,
                                volume_p1, volume_p2)
from squarepeg.squares import rewritten_generators


def hull_volume(points) -> float:
    return ConvexHull(np.array(points, dtype=float)).volume


# -- vertices --------------------------------------------------------------

def test_p1_vertex_labels():  # [PAPER]
    v = p1_vertices(4, 2)
    assert v[0] == (0, 0, 2, 0) and v[3] == (0, 0, 4, 0) and v[7] == (0, 0, 0, 4)


def test_p2_vertex_labels():  # [PAPER]
    v = p2_vertices(4, 1, 3)
    assert v[4] == (1, 0, 3, 0) and v[11] == (0, 1, 0, 3)


@pytest.mark.parametrize("bad", [(4, 0), (4, 4), (3, 1)])
def test_p1_rejects_bad_parameters(bad):
    with pytest.raises(ValueError):
        p1_vertices(*bad)
    if bad[0] >= 1:
        with pytest.raises(ValueError):
            LatticePolytopeP("P1", bad[0], bad[1]).vertices


def test_p2_rejects_bad_parameters():
    for args in [(4, 2, 2), (4, 0, 3), (4, 1, 4)]:
        with pytest.raises(ValueError):
            p2_vertices(*args)


def all_polytopes(m):
    yield LatticePolytopeP("P0", m)
    for l in range(1, m):
        yield LatticePolytopeP("P1", m, l)
        for k in range(l + 1, m):
            yield LatticePolytopeP("P2", m, l, k)


@pytest.mark.parametrize("m", range(4, 11))
def test_vertices_are_simple(m):
    for P in all_polytopes(m):
        verts = P.vertices
        assert len(set(verts)) == len(verts)
        for v in verts:
            assert P.contains(v)
            assert len(P.tight_facets(v)) == 4, (str(P), v)
        if P.kind == "P2":
            assert all(v[2] + v[3] in (P.l, P.k) for v in verts)


@pytest.mark.parametrize("m", [4, 5, 6])
def test_vertices_match_hull_of_lattice_points(m):  # [DERIVED]
    """The listed vertices are exactly the hull vertices of all lattice points inside."""
    pts = [e for e in itertools.product(range(m + 1), repeat=4) if sum(e) <= m]
    for P in all_polytopes(m):
        inside = np.array([e for e in pts if P.contains(e)], dtype=float)
        hull = ConvexHull(inside)
        found = {tuple(int(x) for x in inside[i]) for i in hull.vertices}
        assert found == set(P.vertices), str(P)


# -- shapes ----------------------------------------------------------------

def test_shape_table():  # [PAPER]
    assert str(shape_of_generator(1, 4)) == "P1(4, 2)"
    assert str(shape_of_generator(2, 5)) == "P1(5, 1)"
    assert str(shape_of_generator(2, 4)) == "P2(4, 1, 3)"
    assert str(shape_of_generator(1, 5)) == "P2(5, 2, 4)"
    assert str(shape_of_generator(4, 6)) == "P0(6)"
    with pytest.raises(ValueError):
        shape_of_generator(1, 3)


@pytest.mark.parametrize("m", range(4, 8))
def test_generic_generators_have_predicted_newton_polytopes(m):
    system = rewritten_generators(random_curve(m, 2))
    for i, g in enumerate(system.g, 1):
        assert newton_matches(g, shape_of_generator(i, m)), (m, i)


def test_newton_match_rejects_simplex_for_g1():
    g1 = rewritten_generators(random_curve(4, 2)).g[0]
    assert not newton_matches(g1, LatticePolytopeP("P0", 4))


def test_newton_match_rejects_point_outside():
    P = LatticePolytopeP("P1", 4, 2)
    p = MultiPoly({v: 1 for v in P.vertices}, 4)
    assert newton_matches(p, P)
    assert not newton_matches(p + MultiPoly({(0, 0, 1, 0): 1}, 4), P)
    assert not newton_matches(MultiPoly.zero(4), P)


# -- triangulation and volumes ---------------------------------------------

def test_triangulation_labels():  # [PAPER]
    simplices = cohen_hickey_triangulation(LatticePolytopeP("P1", 4, 2))
    assert sorted(map(set, simplices), key=sorted) == sorted(
        [{1, 5, 6, 7, 8}, {1, 2, 6, 7, 8}, {1, 2, 3, 4, 8}, {1, 2, 3, 7, 8}], key=sorted)


def test_triangulation_simplices_are_nondegenerate():
    P = LatticePolytopeP("P1", 4, 2)
    v = P.vertices
    for s in cohen_hickey_triangulation(P):
        rows = [[a - b for a, b in zip(v[i - 1], v[s[0] - 1])] for i in s[1:]]
        assert det(rows) != 0


def test_triangulation_interiors_disjoint():
    """Sampled interior points lie in exactly one simplex."""
    P = LatticePolytopeP("P1", 5, 2)
    v = np.array(P.vertices, dtype=float)
    simplices = [np.array([v[i - 1] for i in s]) for s in cohen_hickey_triangulation(P)]
    rng = np.random.default_rng(0)
    for _ in range(300):
        w = rng.dirichlet(np.ones(len(v)))
        x = w @ v
        hits = 0
        for S in simplices:
            M = np.vstack([S.T, np.ones(5)])
            bary = np.linalg.solve(M, np.append(x, 1.0))
            if np.all(bary > 1e-9):
                hits += 1
        assert hits <= 1


def test_simplex_volumes():  # [PAPER]
    e = [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    assert simplex_volume(e) == Fraction(1, 24)
    assert simplex_volume([tuple(7 * x for x in p) for p in e]) == Fraction(7 ** 4, 24)
    assert simplex_volume([e[0], e[1], e[1], e[3], e[4]]) == 0
    assert simplex_volume([(0, 0), (1, 0), (0, 1)]) == Fraction(1, 2)


def test_volume_examples():
    assert volume_p1(4, 2) == Fraction(10, 3)
    assert volume_p2(4, 1, 3) == Fraction(22, 3)
    for m in range(1, 9):
        assert volume_p1(m, 0) == Fraction(m ** 4, 24)
    with pytest.raises(ValueError):
        volume_p1(4, 4)


@pytest.mark.parametrize("m", range(4, 13))
def test_volume_formula_matches_triangulation(m):  # [DERIVED]
    for l in range(1, m):
        P = LatticePolytopeP("P1", m, l)
        assert triangulation_volume(P) == volume_p1(m, l) == Fraction((m - l) ** 3 * (m + 3 * l), 24)


@pytest.mark.parametrize("m", [4, 6, 9])
def test_volumes_against_hull(m):  # [DERIVED]
    for P in all_polytopes(m):
        assert float(P.volume()) == pytest.approx(hull_volume(P.vertices), rel=1e-12)
        if P.kind == "P2":
            assert triangulation_volume(P) == P.volume()


# -- Minkowski volume polynomial -------------------------------------------

def test_mu_table():  # [PAPER]
    l1, l2, l3, l4 = (MultiPoly.variable(i, 4) for i in range(4))
    even, odd = minkowski_params(6), minkowski_params(7)
    assert (even.mu1, even.mu2) == (l1, l2 + l3)
    assert (odd.mu1, odd.mu2) == (l2 + l3, l1)


def test_mixed_volume_m4():  # [PAPER]
    assert minkowski_volume_poly(4).coefficient((1, 1, 1, 1)) == 192


@pytest.mark.parametrize("m", range(4, 11))
def test_volume_polynomial_properties(m):
    vol = minkowski_volume_poly(m)
    assert all(sum(e) == 4 for e in vol.support())
    assert all(c >= 0 for _, c in vol.items())
    assert vol.coefficient((1, 1, 1, 1)) == m ** 4 - 5 * m ** 2 + 4 * m
    assert vol.evaluate((0, 0, 0, 1)) == Fraction(m ** 4, 24)
    swapped = MultiPoly({(e[0], e[2], e[1], e[3]): c for e, c in vol.items()}, 4)
    assert swapped == vol


@pytest.mark.parametrize("m", [4, 5])
def test_volume_polynomial_against_hull(m):  # [DERIVED]
    """Volume of the scaled sum, computed from lattice sums of vertices, agrees."""
    rng = random.Random(m)
    vol = minkowski_volume_poly(m)
    polys = newton_polytopes(m)
    for _ in range(3):
        s = [rng.randint(1, 3) for _ in range(4)]
        pts = {tuple(sum(si * x for si, x in zip(s, col)) for col in zip(*combo))
               for combo in itertools.product(*(P.vertices for P in polys))}
        assert hull_volume(sorted(pts)) == pytest.approx(float(vol.evaluate(s)), rel=1e-9)


@pytest.mark.parametrize("m", range(4, 9))
def test_normal_cone_pairing(m):  # [DERIVED]
    rng = random.Random(100 + m)
    for _ in range(4):
        s = [rng.randint(1, 5) for _ in range(4)]
        target, paired = paired_minkowski_vertices(m, s)
        assert sorted(paired) == sorted(target.vertices)
        for v in paired:
            assert target.contains(v)
        # independent check: maximizers of the support function in many
        # random directions are exactly the predicted vertex set
        dirs = np.random.default_rng(m).normal(size=(400, 4))
        found = minkowski_support_vertices(m, s, dirs.tolist())
        assert found == set(target.vertices)


def test_pairing_rejects_nonpositive_scalings():
    with pytest.raises(ValueError):
        paired_minkowski_vertices(4, [1, 0, 1, 1])


def test_bound_values():  # [PAPER]
    want = {3: 12, 4: 48, 5: 130, 6: 285, 7: 546, 8: 952, 9: 1548, 10: 2385}
    assert {m: inscribed_bound(m) for m in want} == want
    assert inscribed_bound(1) == 0
    assert mixed_volume(2) == 4 and mixed_volume(3) == 48
    assert bezout_number(3) == 81
    with pytest.raises(ValueError):
        mixed_volume(0)


# -- planar mixed area -----------------------------------------------------

def rect(a, b):
    return [(0, 0), (a, 0), (a, b), (0, b)]


def test_mixed_area_rectangles():  # [PAPER]
    rng = random.Random(0)
    for _ in range(50):
        a1, b1, a2, b2 = (rng.randint(1, 20) for _ in range(4))
        assert mixed_area_2d(rect(a1, b1), rect(a2, b2)) == a1 * b2 + a2 * b1


def test_mixed_area_self_and_segment():
    tri = [(0, 0), (3, 0), (1, 2)]
    assert mixed_area_2d(tri, tri) == 2 * polygon_area(tri)
    assert mixed_area_2d(rect(1, 1), [(0, 0), (1, 0)]) == 1


def test_mixed_area_by_polarization():  # [DERIVED]
    """Area of l1 P + l2 Q sampled at three points fixes the mixed term."""
    rng = random.Random(4)
    for _ in range(20):
        P = convex_hull_2d([(rng.randint(0, 9), rng.randint(0, 9)) for _ in range(6)])
        Q = convex_hull_2d([(rng.randint(0, 9), rng.randint(0, 9)) for _ in range(6)])
        if len(P) < 3 or len(Q) < 3:
            continue
        both = ConvexHull(np.array([(p[0] + q[0], p[1] + q[1]) for p in P for q in Q], dtype=float)).volume
        oracle = both - ConvexHull(np.array(P, dtype=float)).volume - ConvexHull(np.array(Q, dtype=float)).volume
        assert float(mixed_area_2d(P, Q)) == pytest.approx(oracle)


def test_mixed_area_rejects_nonconvex():
    with pytest.raises(ValueError):
        mixed_area_2d([(0, 0), (2, 0), (1, 1), (2, 2), (0, 2)], rect(1, 1))
