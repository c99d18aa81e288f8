"""The clause transfer matrix and the reconstruction pass that extends a
core solution (or nothing, when the core is empty) to a zero-energy product
state on every variable, replaying leaf removal in reverse.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateInstanceError, InvalidParametersError
from .instance import ProductState

DEFAULT_QUBIT = np.array([1.0, 1.0]) / np.sqrt(2.0)


def transfer_matrix(p, selected):
    """2 x 2^(k-1) matrix T such that, given the states of the other k - 1
    clause qubits (in clause order), T applied to their tensor product is a
    state of the selected qubit satisfying the clause.

    With the selected qubit in last position, row 1 holds <Phi|i_1...i_{k-1} 1>
    and row 2 holds -<Phi|i_1...i_{k-1} 0> over all 2^(k-1) patterns; other
    positions are handled by permuting the selected qubit to last before
    extraction.
    """
    k = p.k
    if not 1 <= selected <= k:
        raise InvalidParametersError(f"selected position {selected} not in 1..{k}")
    row = p.functional_row()  # conjugated amplitudes: <Phi| as a row
    if selected != k:
        # reorder amplitude bits: (others in original order, selected last)
        perm = [j for j in range(k) if j != selected - 1] + [selected - 1]
        reordered = np.empty_like(row)
        for t in range(2 ** k):
            bits = [(t >> (k - 1 - j)) & 1 for j in range(k)]
            t_new = 0
            for j in perm:
                t_new = (t_new << 1) | bits[j]
            reordered[t_new] = row[t]
        row = reordered
    half = 2 ** (k - 1)
    T = np.empty((2, half), dtype=complex)
    for pat in range(half):
        T[0, pat] = row[(pat << 1) | 1]
        T[1, pat] = -row[pat << 1]
    return T


def apply_transfer(p, selected, other_states):
    """State of the selected qubit given the other clause qubits' states
    (clause order, the selected one omitted).  Raises on the
    probability-zero degenerate case where the output vanishes."""
    T = transfer_matrix(p, selected)
    vec = np.array([1.0 + 0j])
    for st in other_states:
        vec = np.kron(vec, np.asarray(st, dtype=complex))
    out = T @ vec
    nrm = np.linalg.norm(out)
    if nrm < 1e-14:
        raise DegenerateInstanceError("transfer matrix annihilated its input")
    return out / nrm


def reconstruct(core_result, core_state, inst, rng=None, residual_tol=1e-8):
    """Extend a core solution to all N variables by replaying the removal
    list backwards; each removed leaf's state comes from the transfer
    matrix of its clause.  Free qubits (never constrained) get the uniform
    superposition, or a random state when ``rng`` is given.

    ``core_state`` is a ProductState over the core's own indices and must
    satisfy every core clause to ``residual_tol``; pass None for an empty
    core.
    """
    from .instance import Instance, evaluate_state

    g = inst.graph
    n = g.n_vars
    assigned = [None] * n

    if not core_result.core_is_empty:
        if core_state is None:
            raise InvalidParametersError("non-empty core requires a core state")
        core_inst = Instance(core_result.core,
                             tuple(inst.projectors[j] for j in core_result.clause_map),
                             inst.mode)
        residuals = evaluate_state(core_inst, core_state)
        if max(residuals) >= residual_tol:
            raise InvalidParametersError(
                f"core state violates a core constraint (residual {max(residuals):.3e})")
        norm_qubits = core_state.normalized().qubits
        for new_idx, orig in enumerate(core_result.var_map):
            assigned[orig] = norm_qubits[new_idx]

    def default_qubit():
        if rng is None:
            return DEFAULT_QUBIT.astype(complex)
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        return v / np.linalg.norm(v)

    for v, c in reversed(core_result.removal_list):
        clause = g.clauses[c]
        pos = clause.index(v) + 1
        others = []
        for w in clause:
            if w == v:
                continue
            if assigned[w] is None:
                assigned[w] = default_qubit()
            others.append(assigned[w])
        if assigned[v] is not None:
            # the removed leaf had degree one, so this cannot happen on a
            # valid removal list
            raise AssertionError(f"leaf variable {v} already assigned")
        try:
            assigned[v] = apply_transfer(inst.projectors[c], pos, others)
        except DegenerateInstanceError as exc:
            raise DegenerateInstanceError(
                f"degenerate transfer at clause {c}", clause=c) from exc

    for v in range(n):
        if assigned[v] is None:
            assigned[v] = default_qubit()
    return ProductState(np.array(assigned))
