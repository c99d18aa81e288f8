"""Projectors, instances, product states, Hamiltonian constraint matrices,
kernel dimensions (dense Hermitian eigensolve in float mode, exact sparse
rank over the Gaussian rationals in exact mode) and per-clause residuals.

Conventions (enforced by golden tests):

* Amplitude index t encodes clause bits (i_1, ..., i_k) with i_1 most
  significant: t = sum_j i_j * 2^(k-j).
* In the full 2^N computational basis, qubit 0 is the most significant bit.
* A clause with ket amplitudes phi enforces the single linear functional
  x -> sum_t conj(phi_t) x_t on its k qubits; rows of the constraint matrix
  are therefore conjugated amplitude rows, and the polynomial layer uses
  the same conjugated coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidParametersError, ResourceLimitError
from .fields import QI

FLOAT_KERNEL_CAP = 12
EXACT_KERNEL_CAP = 10
CONSTRAINT_CAP = 14
DEFAULT_KERNEL_TOL = 1e-9


@dataclass(frozen=True)
class Projector:
    """Rank-one clause projector given by its 2^k ket amplitudes.

    ``amplitudes`` is a complex numpy vector (float mode, unit norm) or a
    tuple of QI values (exact mode, nonzero vector; normalization is
    dropped since each constraint may be rescaled freely).
    """

    k: int
    amplitudes: object
    exact: bool = False

    def __post_init__(self):
        if self.exact:
            amps = tuple(self.amplitudes)
            if len(amps) != 2 ** self.k:
                raise InvalidParametersError("amplitude length must be 2^k")
            if not any(amps):
                raise InvalidParametersError("exact projector must be nonzero")
            object.__setattr__(self, "amplitudes", amps)
        else:
            vec = np.asarray(self.amplitudes, dtype=complex)
            if vec.shape != (2 ** self.k,):
                raise InvalidParametersError("amplitude length must be 2^k")
            nrm = np.linalg.norm(vec)
            if abs(nrm - 1.0) > 1e-12:
                raise InvalidParametersError("float projector must be unit norm")
            vec = vec.copy()
            vec.setflags(write=False)
            object.__setattr__(self, "amplitudes", vec)

    def as_complex(self):
        if self.exact:
            return np.array([complex(a) for a in self.amplitudes])
        return self.amplitudes

    def functional_row(self):
        """The conjugated amplitude row implementing the constraint."""
        return np.conj(self.as_complex())

    def exact_functional_row(self):
        if not self.exact:
            raise InvalidParametersError("exact rows need an exact projector")
        return tuple(a.conjugate() for a in self.amplitudes)


@dataclass(frozen=True)
class Instance:
    """A factor graph plus one projector per clause."""

    graph: object
    projectors: tuple
    mode: str = "float"

    def __post_init__(self):
        object.__setattr__(self, "projectors", tuple(self.projectors))
        if len(self.projectors) != self.graph.m:
            raise InvalidParametersError("one projector per clause required")
        for p in self.projectors:
            if p.k != self.graph.k:
                raise InvalidParametersError("projector arity mismatch")
        if self.mode not in ("float", "exact"):
            raise InvalidParametersError(f"unknown mode {self.mode!r}")
        exact = self.mode == "exact"
        if any(p.exact != exact for p in self.projectors):
            raise InvalidParametersError("projector mode mismatch")

    def to_float(self):
        """Float view of an exact instance (amplitudes normalized)."""
        if self.mode == "float":
            return self
        projs = []
        for p in self.projectors:
            vec = p.as_complex()
            projs.append(Projector(p.k, vec / np.linalg.norm(vec)))
        return Instance(self.graph, tuple(projs), "float")


@dataclass(frozen=True)
class ProductState:
    """One single-qubit state per variable node."""

    qubits: object  # (N, 2) complex array

    def __post_init__(self):
        arr = np.asarray(self.qubits, dtype=complex)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise InvalidParametersError("qubits must be an (N, 2) array")
        norms = np.linalg.norm(arr, axis=1)
        if np.any(norms == 0):
            raise InvalidParametersError("zero qubit state")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "qubits", arr)

    @property
    def n(self):
        return self.qubits.shape[0]

    def normalized(self):
        arr = self.qubits / np.linalg.norm(self.qubits, axis=1)[:, None]
        return ProductState(arr)

    def full_vector(self):
        """The 2^N tensor-product vector (qubit 0 most significant)."""
        vec = np.array([1.0 + 0j])
        for q in self.normalized().qubits:
            vec = np.kron(vec, q)
        return vec


# ---------------------------------------------------------------------------
# sampling


def sample_projector(k, seed):
    """Uniform random projector: i.i.d. standard complex Gaussian
    amplitudes, normalized.  Deterministic per seed."""
    if k < 2:
        raise InvalidParametersError("k must be at least 2")
    rng = np.random.default_rng(seed)
    vec = rng.normal(size=2 ** k) + 1j * rng.normal(size=2 ** k)
    return Projector(k, vec / np.linalg.norm(vec))


def _random_rational(rng, denom_bound):
    num = int(rng.integers(-denom_bound, denom_bound + 1))
    den = int(rng.integers(1, denom_bound + 1))
    return Fraction(num, den)


def rationalize_projector(p, denom_bound, seed):
    """Exact-mode projector with fresh independent uniform rational real and
    imaginary parts (denominators <= denom_bound).  This is a fresh draw,
    not a rounding of ``p``; exact zero amplitudes are rejected and
    resampled so every monomial coefficient downstream is nonzero."""
    if denom_bound < 2:
        raise InvalidParametersError("denom_bound must be >= 2")
    rng = np.random.default_rng(seed)
    amps = []
    for _ in range(2 ** p.k):
        while True:
            re = _random_rational(rng, denom_bound)
            im = _random_rational(rng, denom_bound)
            if re != 0 or im != 0:
                break
        amps.append(QI.from_fractions(re, im))
    return Projector(p.k, tuple(amps), exact=True)


def separable_projector(single_qubit_states):
    """Projector whose ket is the tensor product of the given k single-qubit
    states.  Accepts complex 2-vectors (float mode) or pairs of QI (exact
    mode)."""
    if not single_qubit_states:
        raise InvalidParametersError("need at least one factor")
    exact = isinstance(single_qubit_states[0][0], QI)
    k = len(single_qubit_states)
    if exact:
        amps = [QI.ONE]
        for st in single_qubit_states:
            a, b = st
            if not a and not b:
                raise InvalidParametersError("zero factor state")
            amps = [x * c for x in amps for c in (a, b)]
        return Projector(k, tuple(amps), exact=True)
    vec = np.array([1.0 + 0j])
    for st in single_qubit_states:
        st = np.asarray(st, dtype=complex)
        if np.linalg.norm(st) == 0:
            raise InvalidParametersError("zero factor state")
        vec = np.kron(vec, st)
    return Projector(k, vec / np.linalg.norm(vec))


def _seed_int(seed):
    if isinstance(seed, np.random.SeedSequence):
        return int(seed.generate_state(1)[0])
    return int(seed)


def random_instance(g, seed, mode="float", denom_bound=64):
    """Instance over graph ``g`` with independent random projectors; clause
    seeds derive from (seed, clause index)."""
    base = _seed_int(seed)
    projs = []
    for j in range(g.m):
        ss = np.random.SeedSequence([base, j])
        p = sample_projector(g.k, ss)
        if mode == "exact":
            p = rationalize_projector(p, denom_bound,
                                      np.random.SeedSequence([base, j, 1]))
        projs.append(p)
    return Instance(g, tuple(projs), mode)


def random_separable_instance(g, seed, mode="float", denom_bound=64):
    """Instance whose projectors are products of random single-qubit states."""
    base = _seed_int(seed)
    projs = []
    for j in range(g.m):
        rng = np.random.default_rng(np.random.SeedSequence([base, j, 2]))
        if mode == "exact":
            states = []
            for _ in range(g.k):
                while True:
                    st = (QI.from_fractions(_random_rational(rng, denom_bound),
                                            _random_rational(rng, denom_bound)),
                          QI.from_fractions(_random_rational(rng, denom_bound),
                                            _random_rational(rng, denom_bound)))
                    if st[0] or st[1]:
                        break
                states.append(st)
        else:
            states = [rng.normal(size=2) + 1j * rng.normal(size=2)
                      for _ in range(g.k)]
        projs.append(separable_projector(states))
    return Instance(g, tuple(projs), mode)


# ---------------------------------------------------------------------------
# basis indexing


def _basis_indices(clause, n):
    """idx[t, e]: full-basis index when the clause qubits carry bit pattern
    t (clause order, first qubit most significant) and the remaining qubits
    (ascending index, first most significant) carry pattern e."""
    k = len(clause)
    others = [q for q in range(n) if q not in clause]
    t_weights = np.array([2 ** (n - 1 - q) for q in clause], dtype=np.int64)
    e_weights = np.array([2 ** (n - 1 - q) for q in others], dtype=np.int64)
    t_vals = np.zeros(2 ** k, dtype=np.int64)
    for t in range(2 ** k):
        bits = [(t >> (k - 1 - j)) & 1 for j in range(k)]
        t_vals[t] = int(np.dot(bits, t_weights))
    e_vals = np.zeros(2 ** (n - k), dtype=np.int64)
    for e in range(2 ** (n - k)):
        bits = [(e >> (n - k - 1 - j)) & 1 for j in range(n - k)]
        e_vals[e] = int(np.dot(bits, e_weights)) if others else 0
    return t_vals, e_vals


def constraint_matrix(inst, cap=CONSTRAINT_CAP):
    """Stacked constraint functionals: one row per (clause, environment
    basis state), each row a conjugated amplitude row placed at the basis
    positions compatible with that environment.  ker H_F is exactly the
    null space of this matrix, so dim ker H_F = 2^N - rank.

    Float mode returns a scipy CSR matrix of shape (M 2^(N-k), 2^N); exact
    mode returns a list of sparse rows (dict column -> QI).
    """
    from scipy.sparse import csr_matrix as _csr

    g = inst.graph
    n = g.n_vars
    if n > cap:
        raise ResourceLimitError(f"constraint matrix capped at N <= {cap}", n=n)
    k = g.k
    if inst.mode == "exact":
        rows = []
        for j, cl in enumerate(g.clauses):
            t_vals, e_vals = _basis_indices(cl, n)
            row_func = inst.projectors[j].exact_functional_row()
            for e in range(2 ** (n - k)):
                rows.append({int(t_vals[t] + e_vals[e]): row_func[t]
                             for t in range(2 ** k) if row_func[t]})
        return rows
    data, ri, ci = [], [], []
    r = 0
    for j, cl in enumerate(g.clauses):
        t_vals, e_vals = _basis_indices(cl, n)
        row_func = inst.projectors[j].functional_row()
        for e in range(2 ** (n - k)):
            for t in range(2 ** k):
                ri.append(r)
                ci.append(int(t_vals[t] + e_vals[e]))
                data.append(row_func[t])
            r += 1
    return _csr((np.array(data), (np.array(ri), np.array(ci))),
                shape=(g.m * 2 ** (n - k), 2 ** n))


def hamiltonian(inst):
    """Dense H_F = sum of embedded rank-one projectors."""
    g = inst.graph
    n = g.n_vars
    if n > FLOAT_KERNEL_CAP:
        raise ResourceLimitError(f"dense Hamiltonian capped at N <= {FLOAT_KERNEL_CAP}", n=n)
    H = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for j, cl in enumerate(g.clauses):
        amp = inst.projectors[j].as_complex()
        if inst.mode == "exact":
            amp = amp / np.linalg.norm(amp)
        P = np.outer(amp, np.conj(amp))
        t_vals, e_vals = _basis_indices(cl, n)
        idx = t_vals[:, None] + e_vals[None, :]        # (2^k, 2^(n-k))
        H[idx[:, None, :], idx[None, :, :]] += P[:, :, None]
    return H


def _exact_rank(rows, ncols):
    """Rank of a sparse QI matrix by incremental row elimination."""
    pivots = {}  # pivot column -> normalized row (dict col -> QI)
    rank = 0
    for row in rows:
        row = dict(row)
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                coeff = row[c]
                row = {cc: vv / coeff for cc, vv in row.items()}
                pivots[c] = row
                rank += 1
                break
            factor = row[c]
            for cc, vv in piv.items():
                s = row.get(cc)
                d = vv * factor
                s = -d if s is None else s - d
                if s:
                    row[cc] = s
                elif cc in row:
                    del row[cc]
        # empty row: linearly dependent, nothing to do
    return rank


def kernel_dimension(inst, tol=DEFAULT_KERNEL_TOL):
    """dim ker H_F.  Float mode counts eigenvalues below tol * (largest
    eigenvalue); exact mode computes 2^N - rank of the constraint matrix
    over the Gaussian rationals."""
    dim, _ = kernel_dimension_details(inst, tol)
    return dim


def kernel_dimension_details(inst, tol=DEFAULT_KERNEL_TOL):
    """(dimension, gap ratio).  The gap ratio is the smallest eigenvalue
    counted as nonzero divided by the cut tol * max eigenvalue (inf when
    everything is zero); exact mode reports inf."""
    n = inst.graph.n_vars
    if inst.mode == "exact":
        if n > EXACT_KERNEL_CAP:
            raise ResourceLimitError(f"exact kernel capped at N <= {EXACT_KERNEL_CAP}", n=n)
        rows = constraint_matrix(inst)
        return 2 ** n - _exact_rank(rows, 2 ** n), float("inf")
    if n > FLOAT_KERNEL_CAP:
        raise ResourceLimitError(f"float kernel capped at N <= {FLOAT_KERNEL_CAP}", n=n)
    H = hamiltonian(inst)
    w = np.linalg.eigvalsh(H)
    top = w[-1]
    if top < 1e-14:
        return 2 ** n, float("inf")
    cut = tol * top
    dim = int(np.sum(w < cut))
    nonzero = w[w >= cut]
    gap = float(nonzero[0] / cut) if len(nonzero) else float("inf")
    return dim, gap


def evaluate_state(inst, psi):
    """Per-clause residuals |<Phi^m|psi_{m_1} x ... x psi_{m_k}>| with every
    qubit normalized; computed clause-locally, never forming the 2^N
    vector."""
    psi = psi.normalized()
    g = inst.graph
    res = []
    for j, cl in enumerate(g.clauses):
        vec = inst.projectors[j].functional_row()
        if inst.mode == "exact":
            vec = vec / np.linalg.norm(vec)
        vec = vec.reshape((2,) * g.k)
        for q in cl:
            vec = np.tensordot(psi.qubits[q], vec, axes=(0, 0))
        res.append(abs(complex(vec)))
    return res
