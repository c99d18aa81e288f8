"""Newton polytopes, Minkowski sums, exact rational volumes, mixed volumes
by inclusion-exclusion over subset sums, and the root-count bound for
square systems.

All geometry is exact: hyperplanes, triangulations and volumes are computed
over the integers / rationals, never in floating point.  Box-shaped inputs
(the Newton polytopes of full-support multilinear systems are boxes) take a
product fast path, which is what makes the interaction-graph experiments
cheap; general polytopes go through facet enumeration + pyramid
triangulation, which is intended for low dimension and small generator
sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

from .errors import InvalidParametersError, ResourceLimitError

VOLUME_DIM_CAP = 10
MIXED_VOLUME_DIM_CAP = 8
FACET_SUBSET_BUDGET = 2_000_000


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of a finite set of integer points (the generators)."""

    points: frozenset
    n: int

    def __post_init__(self):
        pts = frozenset(tuple(int(x) for x in p) for p in self.points)
        if not pts:
            raise InvalidParametersError("polytope needs at least one point")
        if any(len(p) != self.n for p in pts):
            raise InvalidParametersError("point dimension mismatch")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_points(cls, pts):
        pts = [tuple(p) for p in pts]
        if not pts:
            raise InvalidParametersError("polytope needs at least one point")
        return cls(frozenset(pts), len(pts[0]))

    def translate(self, vec):
        return LatticePolytope(
            frozenset(tuple(x + d for x, d in zip(p, vec)) for p in self.points),
            self.n)

    def bounding_box(self):
        pts = list(self.points)
        lo = tuple(min(p[i] for p in pts) for i in range(self.n))
        hi = tuple(max(p[i] for p in pts) for i in range(self.n))
        return lo, hi

    def is_box(self):
        """True when the hull is exactly the bounding box (all corners of
        the box are generators; degenerate sides collapse)."""
        lo, hi = self.bounding_box()
        corners = set(itertools.product(*[(a, b) if a != b else (a,)
                                          for a, b in zip(lo, hi)]))
        return corners <= self.points


def newton_polytope(f):
    """Convex hull of the exponent vectors of a nonzero polynomial."""
    if not f:
        raise InvalidParametersError("zero polynomial has no Newton polytope")
    return LatticePolytope(frozenset(f.terms.keys()), f.nvars)


def minkowski_sum(P, Q):
    """Generator set of P + Q: all pairwise sums (hull-equivalent)."""
    if P.n != Q.n:
        raise InvalidParametersError("ambient dimension mismatch")
    pts = frozenset(tuple(a + b for a, b in zip(p, q))
                    for p in P.points for q in Q.points)
    return LatticePolytope(pts, P.n)


# ---------------------------------------------------------------------------
# exact volume


def _affine_rank(pts):
    base = pts[0]
    rows = [[Fraction(x - b) for x, b in zip(p, base)] for p in pts[1:]]
    rank = 0
    ncols = len(base)
    pivot_col = 0
    r = 0
    while r < len(rows) and pivot_col < ncols:
        piv = None
        for i in range(r, len(rows)):
            if rows[i][pivot_col] != 0:
                piv = i
                break
        if piv is None:
            pivot_col += 1
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        inv = 1 / pr[pivot_col]
        rows[r] = [x * inv for x in pr]
        for i in range(len(rows)):
            if i != r and rows[i][pivot_col] != 0:
                f = rows[i][pivot_col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        rank += 1
        pivot_col += 1
    return rank


def _hyperplane_through(pts):
    """Primitive integer normal a and offset b with a . p = b for all pts,
    or None when the points do not span a hyperplane.  pts has n points in
    dimension n."""
    n = len(pts[0])
    base = pts[0]
    rows = [[p[i] - base[i] for i in range(n)] for p in pts[1:]]
    # exact null space of the (n-1) x n difference matrix
    frac_rows = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, len(frac_rows)):
            if frac_rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        frac_rows[r], frac_rows[piv] = frac_rows[piv], frac_rows[r]
        inv = 1 / frac_rows[r][col]
        frac_rows[r] = [x * inv for x in frac_rows[r]]
        for i in range(len(frac_rows)):
            if i != r and frac_rows[i][col] != 0:
                f = frac_rows[i][col]
                frac_rows[i] = [a - f * b for a, b in
                                zip(frac_rows[i], frac_rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        return None  # rank < n-1: no unique hyperplane
    fc = free[0]
    normal = [Fraction(0)] * n
    normal[fc] = Fraction(1)
    for i, pc in enumerate(pivots):
        normal[pc] = -frac_rows[i][fc]
    den = 1
    for x in normal:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in normal]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints]
    offset = sum(a * x for a, x in zip(ints, base))
    return tuple(ints), offset


def _facets(pts, n, budget):
    """All facet hyperplanes of conv(pts) in canonical (outward) form, by
    exhausting n-subsets.  Returns a list of (normal, offset) with
    a . x <= b for every point and equality on the facet."""
    if comb(len(pts), n) > budget:
        raise ResourceLimitError("facet enumeration budget exceeded",
                                 points=len(pts), dim=n)
    seen = {}
    for sub in itertools.combinations(pts, n):
        hp = _hyperplane_through(list(sub))
        if hp is None:
            continue
        a, b = hp
        if (a, b) in seen or (tuple(-x for x in a), -b) in seen:
            continue
        side_pos = any(sum(ai * xi for ai, xi in zip(a, p)) > b for p in pts)
        side_neg = any(sum(ai * xi for ai, xi in zip(a, p)) < b for p in pts)
        if side_pos and side_neg:
            seen[(a, b)] = False
            continue
        if side_pos:  # flip so the polytope satisfies a . x <= b
            a, b = tuple(-x for x in a), -b
        seen[(a, b)] = True
    return [hp for hp, good in seen.items() if good]


def _triangulate(pts, n, budget):
    """Simplices (tuples of n + 1 points) partitioning conv(pts), assuming
    the points affinely span dimension n."""
    pts = sorted(set(pts))
    if n == 0:
        return [(pts[0],)]
    if n == 1:
        return [(pts[0], pts[-1])]
    apex = pts[0]
    simplices = []
    for a, b in _facets(pts, n, budget):
        if sum(ai * xi for ai, xi in zip(a, apex)) == b:
            continue  # apex on the facet: no pyramid
        on_facet = [p for p in pts
                    if sum(ai * xi for ai, xi in zip(a, p)) == b]
        drop = next(i for i, ai in enumerate(a) if ai != 0)
        proj = {}
        for p in on_facet:
            key = p[:drop] + p[drop + 1:]
            proj[key] = p
        sub = _triangulate(list(proj.keys()), n - 1, budget)
        for simplex in sub:
            simplices.append((apex,) + tuple(proj[q] for q in simplex))
    return simplices


def _simplex_volume(simplex):
    base = simplex[0]
    n = len(base)
    mat = [[Fraction(p[i] - base[i]) for i in range(n)] for p in simplex[1:]]
    # exact determinant by fraction-free-ish elimination
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for r in range(col + 1, n):
            if mat[r][col] != 0:
                f = mat[r][col] * inv
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
    fact = 1
    for i in range(2, n + 1):
        fact *= i
    return abs(det) / fact


def volume(P, budget=FACET_SUBSET_BUDGET):
    """Exact n-dimensional volume of the hull.  Lower-dimensional hulls have
    volume zero; boxes take the product fast path."""
    n = P.n
    if n > VOLUME_DIM_CAP:
        raise ResourceLimitError(f"volume capped at dimension {VOLUME_DIM_CAP}",
                                 dim=n)
    pts = sorted(P.points)
    if n == 0:
        return Fraction(0)
    if len(pts) <= n:
        return Fraction(0)
    if _affine_rank(pts) < n:
        return Fraction(0)
    if P.is_box():
        lo, hi = P.bounding_box()
        vol = Fraction(1)
        for a, b in zip(lo, hi):
            vol *= (b - a)
        return vol
    if n == 1:
        return Fraction(pts[-1][0] - pts[0][0])
    total = Fraction(0)
    for simplex in _triangulate(pts, n, budget):
        total += _simplex_volume(simplex)
    return total


# ---------------------------------------------------------------------------
# mixed volumes


def mixed_volume(polytopes, budget=FACET_SUBSET_BUDGET, dim_cap=MIXED_VOLUME_DIM_CAP):
    """MV(P_1, ..., P_n) = sum over nonempty S of (-1)^(n-|S|)
    Vol(sum_{i in S} P_i): the coefficient of lambda_1...lambda_n in the
    volume of the scaled Minkowski sum.  Exact; boxes short-circuit to
    products of summed side lengths."""
    polys = list(polytopes)
    n = len(polys)
    if n == 0:
        raise InvalidParametersError("need at least one polytope")
    if any(P.n != n for P in polys):
        raise InvalidParametersError(
            "mixed volume needs as many polytopes as ambient dimensions")
    if n > dim_cap:
        raise ResourceLimitError(f"mixed volume capped at dimension {dim_cap}",
                                 dim=n)
    if all(P.is_box() for P in polys):
        sides = []
        for P in polys:
            lo, hi = P.bounding_box()
            sides.append([b - a for a, b in zip(lo, hi)])
        total = Fraction(0)
        for size in range(1, n + 1):
            sign = (-1) ** (n - size)
            for S in itertools.combinations(range(n), size):
                prod = Fraction(1)
                for d in range(n):
                    prod *= sum(sides[i][d] for i in S)
                total += sign * prod
        return total
    total = Fraction(0)
    for size in range(1, n + 1):
        sign = (-1) ** (n - size)
        for S in itertools.combinations(range(n), size):
            acc = polys[S[0]]
            for i in S[1:]:
                acc = minkowski_sum(acc, polys[i])
            total += sign * volume(acc, budget)
    return total


def scaled_sum_volume_coefficients(P, Q, budget=FACET_SUBSET_BUDGET):
    """Coefficients (Vol(P), MV(P, Q), Vol(Q)) of lambda1^2, lambda1 lambda2,
    lambda2^2 in Vol(lambda1 P + lambda2 Q) for planar polytopes."""
    if P.n != 2 or Q.n != 2:
        raise InvalidParametersError("pair decomposition is 2-dimensional")
    vp = volume(P, budget)
    vq = volume(Q, budget)
    mv = volume(minkowski_sum(P, Q), budget) - vp - vq
    return vp, mv, vq


def bkk_bound(system, budget=FACET_SUBSET_BUDGET, dim_cap=MIXED_VOLUME_DIM_CAP):
    """Mixed volume of the Newton polytopes of a square polynomial system:
    an upper bound (generically an equality) on the number of common roots
    with all coordinates nonzero."""
    if system.npolys != system.nvars:
        raise InvalidParametersError("BKK bound needs a square system")
    polys = [newton_polytope(p) for p in system.polys]
    mv = mixed_volume(polys, budget, dim_cap)
    if mv.denominator != 1:
        raise AssertionError("mixed volume of lattice polytopes must be integral")
    return int(mv)
