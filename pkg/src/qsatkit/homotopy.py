"""Homotopy continuation from the trivial root of the constant-free square
system to a root of the full system, and the end-to-end product-state
pipeline built on it.

The deformation is H(z, t) = F_sqr(z) + phi(t) c with phi a Moebius arc
from 0 to 1 steered by a random unit-modulus gamma, which keeps the path
away from the discriminant set with probability one.  Tracking is Euler
prediction + Newton correction with adaptive step halving; the corrector
never accepts a step that increases the residual at fixed t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateInstanceError, InvalidParametersError,
                     PathFailureError)
from .graph import hall_violator, leaf_removal, max_matching
from .instance import Instance, ProductState, evaluate_state
from .polysystem import (build_equations, check_nonsingular, constant_terms,
                         drop_constants, reduce_square)
from .transfer import reconstruct

INITIAL_STEP = 0.1
MIN_STEP = 1e-12
CORRECTOR_ITERS = 6
CORRECTOR_TOL = 1e-11


class _FastSystem:
    """Term arrays for repeated numeric evaluation of a square system."""

    def __init__(self, sq):
        self.n = sq.size
        self.polys = []
        self.jac_terms = []
        for p in sq.polys:
            terms = [(complex(c), tuple(i for i, e in enumerate(m) if e))
                     for m, c in p.terms.items()]
            self.polys.append(terms)
        for p in sq.polys:
            row = []
            for v in range(self.n):
                d = p.derivative(v)
                row.append([(complex(c), tuple(i for i, e in enumerate(m) if e))
                            for m, c in d.terms.items()])
            self.jac_terms.append(row)

    def value(self, z):
        out = np.zeros(self.n, dtype=complex)
        for i, terms in enumerate(self.polys):
            acc = 0j
            for c, idxs in terms:
                v = c
                for ix in idxs:
                    v *= z[ix]
                acc += v
            out[i] = acc
        return out

    def jacobian(self, z):
        J = np.zeros((self.n, self.n), dtype=complex)
        for i in range(self.n):
            for v in range(self.n):
                acc = 0j
                for c, idxs in self.jac_terms[i][v]:
                    val = c
                    for ix in idxs:
                        val *= z[ix]
                    acc += val
                J[i, v] = acc
        return J


def solve_square(sq, constants, seed=0, tol=1e-9):
    """Track the trivial root z = 0 of the constant-free square system to
    a root of F_sqr(z) + c = 0.  Requires check_nonsingular(sq).  Returns
    the root with ||F_sqr(z*) + c||_inf < tol; raises PathFailureError
    (carrying the reached t) if the step size underflows."""
    if not check_nonsingular(sq):
        raise InvalidParametersError("Jacobian at the origin is singular")
    n = sq.size
    c = np.asarray(constants, dtype=complex)
    if c.shape != (n,):
        raise InvalidParametersError("need one constant per clause")
    fs = _FastSystem(sq)
    rng = np.random.default_rng(seed)
    gamma = np.exp(2j * np.pi * rng.random())

    def phi(t):
        return gamma * t / (1.0 + (gamma - 1.0) * t)

    def dphi(t):
        return gamma / (1.0 + (gamma - 1.0) * t) ** 2

    def residual(z, t):
        return np.max(np.abs(fs.value(z) + phi(t) * c))

    z = np.zeros(n, dtype=complex)
    t = 0.0
    step = INITIAL_STEP
    while t < 1.0:
        dt = min(step, 1.0 - t)
        t_new = t + dt
        # Euler predictor along dz/dt = -J^{-1} phi'(t) c
        try:
            J = fs.jacobian(z)
            dz = np.linalg.solve(J, -dphi(t) * c)
        except np.linalg.LinAlgError:
            dz = np.zeros(n, dtype=complex)
        z_pred = z + dz * dt
        # Newton corrector at fixed t_new; reject residual increases
        ok = False
        z_cur = z_pred
        res_prev = residual(z_cur, t_new)
        for _ in range(CORRECTOR_ITERS):
            if res_prev < CORRECTOR_TOL:
                ok = True
                break
            try:
                J = fs.jacobian(z_cur)
                delta = np.linalg.solve(J, fs.value(z_cur) + phi(t_new) * c)
            except np.linalg.LinAlgError:
                break
            z_next = z_cur - delta
            res_next = residual(z_next, t_new)
            if not np.isfinite(res_next) or res_next >= res_prev:
                break
            z_cur, res_prev = z_next, res_next
        if not ok and res_prev < CORRECTOR_TOL:
            ok = True
        if ok:
            z, t = z_cur, t_new
            step = min(step * 1.5, INITIAL_STEP * 2)
        else:
            step *= 0.5
            if step < MIN_STEP:
                raise PathFailureError(
                    f"step underflow at t = {t:.6f}", t_reached=t)
    # final polish on the target system
    for _ in range(20):
        val = fs.value(z) + c
        if np.max(np.abs(val)) < min(tol, 1e-12):
            break
        try:
            z = z - np.linalg.solve(fs.jacobian(z), val)
        except np.linalg.LinAlgError:
            break
    if np.max(np.abs(fs.value(z) + c)) >= tol:
        raise PathFailureError("final polish failed to reach tolerance",
                               t_reached=1.0)
    return z


@dataclass(frozen=True)
class NoCoveringCertificate:
    """Witness that no product-state solution exists: a clause set with
    |clauses| = |variables touched| + 1, in original clause labels."""

    clause_set: tuple
    neighborhood: tuple


@dataclass(frozen=True)
class ProdsatResult:
    state: object            # ProductState or None
    certificate: object      # NoCoveringCertificate or None
    residuals: tuple
    covering_used: object    # DimerCovering on the core, or None
    core_size: tuple         # (core clauses, core variables)

    @property
    def solved(self):
        return self.state is not None


def prodsat_solve(inst, seed=0, tol=1e-8, max_gamma_retries=5):
    """Full pipeline: peel to the core; an empty core reconstructs
    directly; otherwise find a dimer covering (or return the Hall-violator
    certificate), square-reduce the constant-free system, continue the
    trivial root to the full system, and extend to all N qubits through
    the removal list."""
    g = inst.graph
    core_res = leaf_removal(g)
    core = core_res.core

    if core_res.core_is_empty:
        state = reconstruct(core_res, None, inst)
        residuals = evaluate_state(inst, state)
        return ProdsatResult(state, None, tuple(residuals), None, (0, 0))

    cover, covered = max_matching(core)
    if covered < core.m:
        s_core = hall_violator(core)
        clause_set = tuple(sorted(core_res.clause_map[j] for j in s_core))
        nb = set()
        for j in clause_set:
            nb.update(g.clauses[j])
        return ProdsatResult(None, NoCoveringCertificate(clause_set, tuple(sorted(nb))),
                             (), None, (core.m, core.n_vars))

    core_inst = Instance(core, tuple(inst.projectors[j] for j in core_res.clause_map),
                         inst.mode)
    system = build_equations(core_inst)
    consts = constant_terms(system)
    sq = reduce_square(drop_constants(system), cover)

    z_star = None
    last_exc = None
    for retry in range(max_gamma_retries):
        try:
            z_star = solve_square(sq, consts, seed=np.random.SeedSequence(
                [int(seed), retry]).generate_state(1)[0], tol=tol * 1e-2)
            break
        except PathFailureError as exc:
            last_exc = exc
    if z_star is None:
        raise last_exc

    z_core = np.zeros(core.n_vars, dtype=complex)
    for j, v in enumerate(sq.star_map):
        z_core[v] = z_star[j]
    qubits = np.stack([np.ones(core.n_vars), z_core], axis=1)
    qubits /= np.linalg.norm(qubits, axis=1)[:, None]
    core_state = ProductState(qubits)

    state = reconstruct(core_res, core_state, inst, residual_tol=tol)
    residuals = evaluate_state(inst, state)
    if max(residuals) >= tol:
        raise DegenerateInstanceError(
            f"assembled state misses tolerance (max residual {max(residuals):.3e})")
    return ProdsatResult(state, None, tuple(residuals), cover,
                         (core.m, core.n_vars))
