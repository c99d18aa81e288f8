"""Polynomial constraint systems of core instances, square reduction via a
dimer covering, and the Jacobian-at-zero nonsingularity test.

The polynomial for clause m is the constraint functional evaluated on
(|0> + z|1>) factors: one multilinear polynomial per clause whose monomial
coefficients are the conjugated projector amplitudes, indexed by the clause
bit convention (first clause qubit = most significant bit).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInstanceError, InvalidParametersError
from .graph import DimerCovering
from .groebner import Polynomial

DET_RTOL = 1e-10


@dataclass(frozen=True)
class PolySystem:
    """One polynomial per clause over the core variables.

    ``var_map[i]`` is the core variable node behind polynomial variable i.
    """

    polys: tuple
    var_map: tuple
    exact: bool

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        object.__setattr__(self, "var_map", tuple(self.var_map))

    @property
    def nvars(self):
        return len(self.var_map)

    @property
    def npolys(self):
        return len(self.polys)


@dataclass(frozen=True)
class SquareSystem:
    """Square reduction of a constant-free PolySystem: uncovered variables
    are pinned to zero and the survivors are relabeled so variable j is the
    one matched to clause j."""

    polys: tuple
    covering: DimerCovering
    star_map: tuple  # clause index -> matched core variable node
    exact: bool

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        object.__setattr__(self, "star_map", tuple(self.star_map))

    @property
    def size(self):
        return len(self.polys)


def build_equations(core_inst):
    """The multilinear constraint polynomials of a core instance; variable i
    of every polynomial is core variable node i."""
    g = core_inst.graph
    nv = g.n_vars
    polys = []
    exact = core_inst.mode == "exact"
    for j, cl in enumerate(g.clauses):
        if exact:
            coeffs = core_inst.projectors[j].exact_functional_row()
        else:
            coeffs = core_inst.projectors[j].functional_row()
        terms = {}
        for t in range(2 ** g.k):
            c = coeffs[t]
            if not c:
                continue
            mono = [0] * nv
            for pos in range(g.k):
                if (t >> (g.k - 1 - pos)) & 1:
                    mono[cl[pos]] = 1
            terms[tuple(mono)] = c
        polys.append(Polynomial(terms, nv, prune=False))
    return PolySystem(tuple(polys), tuple(range(nv)), exact)


def constant_terms(s):
    """The constant coefficient of each polynomial (complex view)."""
    out = []
    for p in s.polys:
        c = p.constant_term()
        out.append(complex(c) if c is not None else 0j)
    return out


def drop_constants(s):
    """Remove the constant term from every polynomial (the t = 0...0
    coefficient); adding them back restores the system exactly."""
    zero = (0,) * (s.polys[0].nvars if s.polys else 0)
    polys = []
    for p in s.polys:
        terms = {m: c for m, c in p.terms.items() if m != zero}
        polys.append(Polynomial(terms, p.nvars, prune=False))
    return PolySystem(tuple(polys), s.var_map, s.exact)


def reduce_square(s, cov):
    """Square system: substitute 0 for every variable not in the covering
    and relabel the matched variables so polynomial j has matched variable
    j.  The covering must cover every clause of ``s``."""
    if not isinstance(cov, DimerCovering):
        raise InvalidParametersError("covering must cover every clause")
    mprime = s.npolys
    if set(cov.assignment.keys()) != set(range(mprime)):
        raise InvalidParametersError("covering must cover every clause")
    star = [cov.assignment[j] for j in range(mprime)]
    pos_of_node = {node: i for i, node in enumerate(s.var_map)}
    new_index = {pos_of_node[v]: j for j, v in enumerate(star)}
    polys = []
    for j, p in enumerate(s.polys):
        terms = {}
        for m, c in p.terms.items():
            if any(e and (i not in new_index) for i, e in enumerate(m)):
                continue  # touched an uncovered variable: pinned to zero
            mono = [0] * mprime
            for i, e in enumerate(m):
                if e:
                    mono[new_index[i]] = e
            terms[tuple(mono)] = c
        poly = Polynomial(terms, mprime, prune=False)
        linear = tuple(1 if i == j else 0 for i in range(mprime))
        if linear not in poly.terms:
            raise DegenerateInstanceError(
                f"clause {j} lost the linear term of its matched variable",
                clause=j)
        polys.append(poly)
    return SquareSystem(tuple(polys), cov, tuple(star), s.exact)


def jacobian_at_zero(sq):
    """(m, j) entry: coefficient of the linear monomial of variable j in
    polynomial m, i.e. the Jacobian of the square map at the origin."""
    n = sq.size
    J = np.zeros((n, n), dtype=complex)
    for mi, p in enumerate(sq.polys):
        for mono, c in p.terms.items():
            if sum(mono) == 1:
                j = next(i for i, e in enumerate(mono) if e)
                J[mi, j] = complex(c)
    return J


def check_nonsingular(sq):
    """True iff the Jacobian at the origin has full numerical rank:
    smallest singular value above DET_RTOL times the largest (row-scaled
    first).  A determinant cut is not used because |det| of a nonsingular
    random Jacobian decays exponentially with the clause count, while the
    singular-value ratio stays scale- and dimension-invariant."""
    J = jacobian_at_zero(sq)
    row_max = np.max(np.abs(J), axis=1)
    if np.any(row_max == 0):
        return False
    scaled = J / row_max[:, None]
    svals = np.linalg.svd(scaled, compute_uv=False)
    if svals[0] == 0:
        return False
    return svals[-1] > DET_RTOL * svals[0]
