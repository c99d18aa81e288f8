import itertools
from fractions import Fraction

import numpy as np
import pytest

from qsatkit.errors import InvalidParametersError, ResourceLimitError
from qsatkit.fields import QI
from qsatkit.graph import FactorGraph
from qsatkit.groebner import Polynomial, solve_lex
from qsatkit.instance import random_instance
from qsatkit.polysystem import build_equations
from qsatkit.polytope import (LatticePolytope, bkk_bound, minkowski_sum,
                              mixed_volume, newton_polytope,
                              scaled_sum_volume_coefficients, volume)

SQUARE = LatticePolytope.from_points([(0, 0), (1, 0), (0, 1), (1, 1)])
TRIANGLE = LatticePolytope.from_points([(0, 0), (1, 0), (0, 2)])


def mc_volume(P, rng, samples=200_000):
    """Monte Carlo hull volume oracle (hit counting via LP-free test:
    a point is inside iff it is a convex combination, checked with a tiny
    exact-ish least squares -> use scipy ConvexHull-free approach: for the
    small 2/3-D cases below, use matplotlib-free half-space test from the
    brute-force facet list)."""
    from qsatkit.polytope import _facets

    pts = sorted(P.points)
    n = P.n
    lo = [min(p[i] for p in pts) for i in range(n)]
    hi = [max(p[i] for p in pts) for i in range(n)]
    facets = _facets(pts, n, 10 ** 6)
    box_vol = 1.0
    for a, b in zip(lo, hi):
        box_vol *= (b - a)
    if box_vol == 0:
        return 0.0
    u = rng.random(size=(samples, n))
    x = np.array(lo) + u * (np.array(hi) - np.array(lo))
    inside = np.ones(samples, dtype=bool)
    for normal, offset in facets:
        inside &= (x @ np.array(normal) <= offset + 1e-12)
    return box_vol * inside.mean()


# ---------------------------------------------------------------------------
# newton polytopes


def test_newton_polytope_square_and_triangle():
    f = Polynomial({(1, 1): QI(3), (1, 0): QI(1), (0, 1): QI(2),
                    (0, 0): QI(5)}, 2)
    assert newton_polytope(f).points == SQUARE.points
    g = Polynomial({(0, 2): QI(1), (1, 0): QI(4), (0, 0): QI(1)}, 2)
    assert newton_polytope(g).points == TRIANGLE.points


def test_newton_polytope_constant_and_zero():
    c = Polynomial({(0, 0): QI(7)}, 2)
    assert newton_polytope(c).points == {(0, 0)}
    with pytest.raises(InvalidParametersError):
        newton_polytope(Polynomial.zero(2))


# ---------------------------------------------------------------------------
# Minkowski sums


def test_minkowski_identity_and_commutativity():
    origin = LatticePolytope.from_points([(0, 0)])
    assert minkowski_sum(SQUARE, origin).points == SQUARE.points
    ab = minkowski_sum(SQUARE, TRIANGLE)
    ba = minkowski_sum(TRIANGLE, SQUARE)
    assert ab.points == ba.points
    with pytest.raises(InvalidParametersError):
        minkowski_sum(SQUARE, LatticePolytope.from_points([(0, 0, 0)]))


def test_minkowski_sum_volume_example():
    total = volume(minkowski_sum(SQUARE, TRIANGLE))
    assert total == 5  # 1 + 3 + 1


# ---------------------------------------------------------------------------
# exact volumes


def test_volume_basics():
    assert volume(SQUARE) == 1
    assert volume(TRIANGLE) == 1
    segment = LatticePolytope.from_points([(0, 0), (2, 2)])
    assert volume(segment) == 0
    point = LatticePolytope.from_points([(5, 5)])
    assert volume(point) == 0


def test_volume_simplex_and_box():
    simplex = LatticePolytope.from_points([(0, 0, 0), (1, 0, 0), (0, 1, 0),
                                           (0, 0, 1)])
    assert volume(simplex) == Fraction(1, 6)
    box = LatticePolytope.from_points(list(itertools.product((0, 2), (0, 3),
                                                             (0, 1))))
    assert volume(box) == 6


def test_volume_interior_points_ignored():
    with_extras = LatticePolytope.from_points(
        list(SQUARE.points) + [(0, 0), (1, 1)])
    assert volume(with_extras) == 1


def test_volume_matches_monte_carlo(rng):
    for trial in range(6):
        n = int(rng.integers(2, 4))
        pts = [tuple(int(x) for x in rng.integers(-3, 4, size=n))
               for _ in range(int(rng.integers(n + 1, n + 6)))]
        P = LatticePolytope.from_points(pts)
        exact = float(volume(P))
        approx = mc_volume(P, rng)
        assert abs(exact - approx) < 0.05 * max(exact, 1.0)


def test_volume_dimension_cap():
    with pytest.raises(ResourceLimitError):
        volume(LatticePolytope.from_points([tuple([0] * 11), tuple([1] * 11)]))


# ---------------------------------------------------------------------------
# mixed volumes


def test_mixed_volume_worked_pair():
    assert mixed_volume([SQUARE, TRIANGLE]) == 3
    vp, mv, vq = scaled_sum_volume_coefficients(SQUARE, TRIANGLE)
    assert (vp, mv, vq) == (1, 3, 1)


def test_mixed_volume_diagonal():
    # MV(P, P) = 2 Vol(P) in the plane
    assert mixed_volume([SQUARE, SQUARE]) == 2


def test_mixed_volume_orthogonal_segments():
    s1 = LatticePolytope.from_points([(0, 0), (1, 0)])
    s2 = LatticePolytope.from_points([(0, 0), (0, 1)])
    assert mixed_volume([s1, s2]) == 1


def test_mixed_volume_symmetry(rng):
    polys = [
        LatticePolytope.from_points([(0, 0, 0), (1, 0, 0), (0, 1, 0),
                                     (1, 1, 1)]),
        LatticePolytope.from_points([(0, 0, 0), (0, 0, 2), (1, 0, 0)]),
        LatticePolytope.from_points([(0, 0, 0), (0, 1, 0), (0, 0, 1),
                                     (1, 1, 0)]),
    ]
    ref = mixed_volume(polys)
    for perm in itertools.permutations(range(3)):
        assert mixed_volume([polys[i] for i in perm]) == ref


def test_mixed_volume_multilinearity(rng):
    # MV(P + P', Q) = MV(P, Q) + MV(P', Q) in the plane
    for trial in range(5):
        def rand_poly2():
            pts = [tuple(int(x) for x in rng.integers(0, 4, size=2))
                   for _ in range(4)]
            return LatticePolytope.from_points(pts)

        P, Pp, Q = rand_poly2(), rand_poly2(), rand_poly2()
        lhs = mixed_volume([minkowski_sum(P, Pp), Q])
        rhs = mixed_volume([P, Q]) + mixed_volume([Pp, Q])
        assert lhs == rhs


def test_mixed_volume_validation():
    with pytest.raises(InvalidParametersError):
        mixed_volume([SQUARE])  # one 2-D polytope is not a square system
    with pytest.raises(ResourceLimitError):
        seg = LatticePolytope.from_points([tuple([0] * 9), tuple([1] * 9)])
        mixed_volume([seg] * 9)


# ---------------------------------------------------------------------------
# BKK bound


def test_bkk_single_clause_one_retained_variable():
    # a + b z in one variable: Newton polytope is the segment [0, 1]
    from qsatkit.polysystem import PolySystem

    p = Polynomial({(0,): QI(3, 1, 2), (1,): QI(1, -2)}, 1)
    system = PolySystem((p,), (0,), True)
    assert bkk_bound(system) == 1


def test_bkk_doubled_support():
    g = FactorGraph(2, 2, ((0, 1), (0, 1)))
    inst = random_instance(g, 0, "exact", 8)
    system = build_equations(inst)
    # two unit squares: MV = 2 Vol = permanent of the all-ones 2x2 matrix
    assert bkk_bound(system) == 2


def test_bkk_requires_square():
    g = FactorGraph(3, 4, ((0, 1, 2),))
    inst = random_instance(g, 0, "exact", 8)
    with pytest.raises(InvalidParametersError):
        bkk_bound(build_equations(inst))


def test_bkk_depends_only_on_graph(rng):
    g = FactorGraph(3, 4, ((0, 1, 2), (1, 2, 3), (0, 2, 3), (0, 1, 3)))
    vals = set()
    for seed in range(5):
        inst = random_instance(g, seed, "exact", 8)
        vals.add(bkk_bound(build_equations(inst)))
    assert len(vals) == 1


def test_bkk_equals_dimer_count_for_square_multilinear():
    # full-support multilinear systems have box Newton polytopes, so the
    # mixed volume is the permanent of the incidence matrix = the number of
    # dimer coverings
    from qsatkit.graph import count_dimer_coverings

    m = 5
    g = FactorGraph(3, m, tuple(tuple((i + j) % m for j in range(3))
                                for i in range(m)))
    inst = random_instance(g, 1, "exact", 8)
    assert bkk_bound(build_equations(inst)) == count_dimer_coverings(g)


def test_bkk_equals_lex_root_count(rng):
    # the equality clause for generic coefficients, on small square systems
    for trial in range(6):
        n = int(rng.integers(2, 5))
        while True:
            sups = [tuple(sorted(rng.choice(n, size=min(3, n), replace=False).tolist()))
                    for _ in range(n)]
            if set().union(*sups) == set(range(n)):
                break
        g = FactorGraph(min(3, n), n, tuple(sups))
        inst = random_instance(g, int(rng.integers(0, 2 ** 32)), "exact", 8)
        system = build_equations(inst)
        mv = bkk_bound(system)
        roots = solve_lex(list(system.polys))
        toric = [r for r in roots if np.all(np.abs(r) > 1e-10)]
        assert len(toric) == mv
