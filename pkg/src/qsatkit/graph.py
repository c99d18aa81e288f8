"""Random factor graphs, leaf removal to the 2-core, dimer coverings via
bipartite matching, Hall violators, exact dimer counting, and the
leaf-removal threshold / core-size curves with their Monte Carlo estimators.

Clause density is measured as alpha = m / n throughout (clauses per
variable), matching the ensemble with m independent uniformly random
k-subsets.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import InvalidParametersError, ResourceLimitError


@dataclass(frozen=True)
class FactorGraph:
    """Bipartite multigraph of variable nodes and arity-k clause nodes.

    Each clause stores its k distinct variables in a fixed order; that
    order defines amplitude bit positions downstream, so it is part of the
    graph's identity.  Repeated supports across clauses are allowed.
    """

    k: int
    n_vars: int
    clauses: tuple

    def __post_init__(self):
        for cl in self.clauses:
            if len(cl) != self.k or len(set(cl)) != self.k:
                raise InvalidParametersError(f"clause {cl} is not a {self.k}-subset")
            if any(not 0 <= v < self.n_vars for v in cl):
                raise InvalidParametersError(f"clause {cl} out of variable range")

    @property
    def m(self):
        return len(self.clauses)

    def variable_degrees(self):
        deg = [0] * self.n_vars
        for cl in self.clauses:
            for v in cl:
                deg[v] += 1
        return deg

    def var_adjacency(self):
        adj = [[] for _ in range(self.n_vars)]
        for j, cl in enumerate(self.clauses):
            for v in cl:
                adj[v].append(j)
        return adj


@dataclass(frozen=True)
class CoreResult:
    """Outcome of leaf removal: the 2-core (reindexed, with maps back to the
    original labels) and the chronological list of removed
    (leaf variable, attached clause) pairs, in original labels."""

    core: FactorGraph
    var_map: tuple          # core variable index -> original variable
    clause_map: tuple       # core clause index -> original clause index
    removal_list: tuple     # ((original var, original clause), ...) in order

    @property
    def core_is_empty(self):
        return self.core.m == 0 and self.core.n_vars == 0


@dataclass(frozen=True)
class DimerCovering:
    """Injective clause -> variable assignment covering every clause."""

    assignment: dict = field(hash=False)

    def __post_init__(self):
        vals = list(self.assignment.values())
        if len(set(vals)) != len(vals):
            raise InvalidParametersError("covering assignment is not injective")


def sample_graph(n, m, k, seed):
    """m independent clauses, each support uniform over the C(n, k)
    k-subsets; variables inside a clause are stored sorted ascending.
    Deterministic per seed."""
    if k < 2 or k > n:
        raise InvalidParametersError(f"need 2 <= k <= n, got k={k}, n={n}")
    if m < 0:
        raise InvalidParametersError("m must be nonnegative")
    rng = np.random.default_rng(seed)
    if m == 0:
        return FactorGraph(k, n, ())
    draws = rng.integers(0, n, size=(m, k))
    while True:
        srt = np.sort(draws, axis=1)
        bad = (np.diff(srt, axis=1) == 0).any(axis=1)
        if not bad.any():
            break
        idx = np.where(bad)[0]
        draws[idx] = rng.integers(0, n, size=(len(idx), k))
    clauses = tuple(tuple(int(v) for v in row) for row in np.sort(draws, axis=1))
    return FactorGraph(k, n, clauses)


def leaf_removal(g):
    """Peel degree-one variables (lowest index first) together with their
    attached clause until the residual graph has minimum variable degree at
    least two.  The surviving node set is order-independent; the fixed
    selection order only makes the removal list reproducible."""
    adj = g.var_adjacency()
    deg = [len(a) for a in adj]
    alive = [True] * g.m
    removal = []
    heap = [v for v in range(g.n_vars) if deg[v] == 1]
    heapq.heapify(heap)
    while heap:
        v = heapq.heappop(heap)
        if deg[v] != 1:
            continue
        c = next(j for j in adj[v] if alive[j])
        removal.append((v, c))
        alive[c] = False
        for w in g.clauses[c]:
            deg[w] -= 1
            if deg[w] == 1:
                heapq.heappush(heap, w)
    core_vars = [v for v in range(g.n_vars) if deg[v] >= 2]
    new_index = {v: i for i, v in enumerate(core_vars)}
    core_clauses = []
    clause_map = []
    for j, cl in enumerate(g.clauses):
        if alive[j]:
            core_clauses.append(tuple(new_index[v] for v in cl))
            clause_map.append(j)
    core = FactorGraph(g.k, len(core_vars), tuple(core_clauses))
    return CoreResult(core, tuple(core_vars), tuple(clause_map), tuple(removal))


# ---------------------------------------------------------------------------
# thresholds (clause-density units alpha = m/n)


def _rate(x, k):
    return x / (k * (1.0 - math.exp(-x)) ** (k - 1))


def _rate_minimizer(k):
    lo, hi = 1e-6, 50.0
    for _ in range(200):
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if _rate(m1, k) < _rate(m2, k):
            hi = m2
        else:
            lo = m1
    return 0.5 * (lo + hi)


def alpha_lr(k):
    """Leaf-removal (2-core emergence) threshold in clause-density units:
    the minimum over x > 0 of x / (k (1 - e^-x)^(k-1)).  For k = 2 the
    function increases from its x -> 0+ limit, so the infimum 1/2 is
    returned directly."""
    if k < 2:
        raise InvalidParametersError("k must be at least 2")
    if k == 2:
        return 0.5
    return _rate(_rate_minimizer(k), k)


def core_fraction(alpha, k):
    """Asymptotic fraction of variables in the 2-core at clause density
    alpha: zero below alpha_lr(k), else 1 - e^-x - x e^-x with x the
    greatest root of alpha = x / (k (1 - e^-x)^(k-1))."""
    if alpha <= 0:
        raise InvalidParametersError("alpha must be positive")
    if alpha < alpha_lr(k):
        return 0.0
    if k == 2:
        lo = 1e-12
    else:
        lo = _rate_minimizer(k)
    hi = max(2.0 * lo, 1.0)
    while _rate(hi, k) < alpha:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _rate(mid, k) < alpha:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    return 1.0 - math.exp(-x) - x * math.exp(-x)


# ---------------------------------------------------------------------------
# matchings


def max_matching(g):
    """Maximum-cardinality clause-to-variable matching (Hopcroft-Karp).

    Returns ``(covering_or_partial, covered_count)``; the first element is a
    DimerCovering when every clause is covered, otherwise the partial
    assignment dict."""
    if g.m == 0:
        return DimerCovering({}), 0
    rows = np.repeat(np.arange(g.m), g.k)
    cols = np.array([v for cl in g.clauses for v in cl])
    biadj = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)),
                       shape=(g.m, g.n_vars))
    match = maximum_bipartite_matching(biadj, perm_type="column")
    assignment = {j: int(match[j]) for j in range(g.m) if match[j] >= 0}
    covered = len(assignment)
    if covered == g.m:
        return DimerCovering(assignment), covered
    return assignment, covered


def hall_violator(g):
    """None when a covering exists; otherwise a clause set S' with
    |S'| = |N(S')| + 1 whose clauses contain every variable of the
    deficient neighborhood, extracted by alternating-path reachability
    from the unmatched clauses of a maximum matching."""
    result, covered = max_matching(g)
    if covered == g.m:
        return None
    assignment = result if isinstance(result, dict) else result.assignment
    matched_clause_of = {v: j for j, v in assignment.items()}
    adj = g.var_adjacency()
    # alternating BFS: clause -> any incident variable, variable -> its
    # matched clause
    reach_clauses = set(j for j in range(g.m) if j not in assignment)
    reach_vars = set()
    queue = sorted(reach_clauses)
    while queue:
        nxt = []
        for j in queue:
            for v in g.clauses[j]:
                if v in reach_vars:
                    continue
                reach_vars.add(v)
                back = matched_clause_of.get(v)
                if back is not None and back not in reach_clauses:
                    reach_clauses.add(back)
                    nxt.append(back)
        queue = sorted(nxt)
    # reach_vars == N(reach_clauses) and the deficiency equals the number of
    # unmatched clauses; shrink to exactly |N| + 1 clauses covering all of N
    chosen = []
    covered_vars = set()
    for v in sorted(reach_vars):
        if v in covered_vars:
            continue
        j = matched_clause_of.get(v)
        if j is None or j not in reach_clauses:
            j = next(c for c in sorted(adj[v]) if c in reach_clauses)
        if j not in chosen:
            chosen.append(j)
            covered_vars.update(g.clauses[j])
    for j in sorted(reach_clauses):
        if len(chosen) >= len(reach_vars) + 1:
            break
        if j not in chosen:
            chosen.append(j)
    s_prime = tuple(sorted(chosen))
    neighborhood = set()
    for j in s_prime:
        neighborhood.update(g.clauses[j])
    if len(s_prime) != len(neighborhood) + 1:
        raise AssertionError("violator extraction produced wrong deficiency")
    return s_prime


def count_dimer_coverings(g, node_budget=10 ** 8):
    """Exact count of clause-covering dimer configurations by backtracking,
    always branching on the clause with the fewest remaining candidate
    variables.  Intended for small graphs; raises ResourceLimitError when
    the search tree exceeds ``node_budget`` nodes."""
    clauses = [set(cl) for cl in g.clauses]
    used = set()
    remaining = list(range(g.m))
    nodes = 0

    def rec():
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise ResourceLimitError("dimer counting budget exceeded",
                                     nodes=nodes)
        if not remaining:
            return 1
        best_i = min(range(len(remaining)),
                     key=lambda i: len(clauses[remaining[i]] - used))
        j = remaining.pop(best_i)
        cands = sorted(clauses[j] - used)
        total = 0
        for v in cands:
            used.add(v)
            total += rec()
            used.remove(v)
        remaining.insert(best_i, j)
        return total

    return rec()


# ---------------------------------------------------------------------------
# Monte Carlo threshold estimation


@dataclass(frozen=True)
class ThresholdRow:
    alpha: float
    trials: int
    empty_core_freq: float
    empty_core_se: float
    covering_freq: float
    covering_se: float
    mean_core_fraction: float
    core_fraction_se: float


def _binomial_se(p, trials):
    return math.sqrt(max(p * (1.0 - p), 0.0) / trials)


def estimate_thresholds(k, n, alpha_grid, trials, seed):
    """Per-alpha Monte Carlo frequencies of empty cores and of clause
    coverings, plus the mean core fraction, with standard errors.
    Per-trial RNG streams derive from (seed, alpha index, trial index)."""
    if trials < 1:
        raise InvalidParametersError("trials must be >= 1")
    rows = []
    for ai, alpha in enumerate(alpha_grid):
        m = int(round(alpha * n))
        empty = 0
        cover = 0
        fracs = []
        for t in range(trials):
            ss = np.random.SeedSequence([int(seed), ai, t])
            g = sample_graph(n, m, k, ss)
            res = leaf_removal(g)
            frac = res.core.n_vars / n
            fracs.append(frac)
            if res.core_is_empty:
                empty += 1
                cover += 1  # empty core always has the trivial covering
            else:
                # covering heredity: g has a covering iff its core does
                _, covered = max_matching(res.core)
                if covered == res.core.m:
                    cover += 1
        p_emp = empty / trials
        p_cov = cover / trials
        fr = np.array(fracs)
        rows.append(ThresholdRow(
            alpha=float(alpha), trials=trials,
            empty_core_freq=p_emp, empty_core_se=_binomial_se(p_emp, trials),
            covering_freq=p_cov, covering_se=_binomial_se(p_cov, trials),
            mean_core_fraction=float(fr.mean()),
            core_fraction_se=float(fr.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0,
        ))
    return rows
