import itertools

import numpy as np
import pytest

from qsatkit.errors import InvalidParametersError
from qsatkit.graph import count_dimer_coverings
from qsatkit.patterns import (make_pattern, mixed_chain_dim, recurrence_dim,
                              recurrence_dimers, separable_chain_dim,
                              separable_cycle_dim, verify_pattern)


def brute_force_coverings(g):
    count = 0
    for choice in itertools.product(*g.clauses):
        if len(set(choice)) == g.m:
            count += 1
    return count


# ---------------------------------------------------------------------------
# constructors


def test_sunflower_shape():
    g = make_pattern("sunflower", 3, 4)
    assert g.n_vars == 9
    deg = g.variable_degrees()
    assert deg[0] == 4
    assert all(d == 1 for d in deg[1:])


def test_loose_chain_shape():
    g = make_pattern("loose_chain", 3, 2)
    assert g.n_vars == 5
    assert count_dimer_coverings(g) == 8


def test_loose_cycle_shape():
    g = make_pattern("loose_cycle", 3, 4)
    assert g.n_vars == 8
    deg = sorted(g.variable_degrees())
    assert deg == [1, 1, 1, 1, 2, 2, 2, 2]


def test_strong_chain_shape():
    g = make_pattern("strong_chain", 3, 4)
    assert g.n_vars == 6
    # interior variables reach degree k
    assert max(g.variable_degrees()) == 3


def test_strong_cycle_shape():
    g = make_pattern("strong_cycle", 3, 6)
    assert g.n_vars == 6
    assert all(d == 3 for d in g.variable_degrees())


def test_make_pattern_validation():
    with pytest.raises(InvalidParametersError):
        make_pattern("strong_chain", 4, 3)
    with pytest.raises(InvalidParametersError):
        make_pattern("loose_cycle", 3, 1)
    with pytest.raises(InvalidParametersError):
        make_pattern("strong_cycle", 3, 3)
    with pytest.raises(InvalidParametersError):
        make_pattern("garden", 3, 3)


def test_general_k_patterns():
    g = make_pattern("sunflower", 4, 2)
    assert g.n_vars == 7
    g = make_pattern("loose_chain", 2, 3)   # two-qubit chain
    assert g.n_vars == 4
    assert g.clauses == ((0, 1), (1, 2), (2, 3))
    g = make_pattern("loose_cycle", 2, 4)   # two-qubit cycle
    assert g.n_vars == 4


# ---------------------------------------------------------------------------
# recurrences


def test_recurrence_dim_values():
    assert recurrence_dim("sunflower", 1) == 7
    assert recurrence_dim("sunflower", 2) == 24
    assert recurrence_dim("sunflower", 3) == 81
    assert recurrence_dim("loose_chain", 3) == 82
    assert recurrence_dim("loose_chain", 4) == 280
    assert recurrence_dim("loose_cycle", 2) == 12
    assert recurrence_dim("loose_cycle", 4) == 136
    assert recurrence_dim("strong_chain", 3) == 20
    assert recurrence_dim("strong_chain", 4) == 33
    assert recurrence_dim("strong_cycle", 6) == 19
    with pytest.raises(InvalidParametersError):
        recurrence_dim("loose_cycle", 1)


def test_recurrence_dimers_values():
    assert recurrence_dimers("sunflower", 1) == 3
    assert recurrence_dimers("sunflower", 2) == 8
    assert recurrence_dimers("loose_chain", 2) == 8
    assert recurrence_dimers("loose_chain", 3) == 21
    # published m = 2 start is inconsistent; exact counts give 7, 18, 47
    assert recurrence_dimers("loose_cycle", 4) == 47
    assert recurrence_dimers("strong_chain", 4) == 26
    assert recurrence_dimers("strong_cycle", 7) == 31


def test_recurrences_match_exact_counts():
    cases = [("sunflower", (1, 2, 3, 4)), ("loose_chain", (1, 2, 3, 4)),
             ("loose_cycle", (2, 3, 4, 5)), ("strong_chain", (1, 2, 3, 4, 5)),
             ("strong_cycle", (4, 5, 6, 7))]
    for kind, ms in cases:
        for m in ms:
            g = make_pattern(kind, 3, m)
            counted = count_dimer_coverings(g)
            assert counted == recurrence_dimers(kind, m) == brute_force_coverings(g)


def test_strong_family_invariants():
    # strong cycle: kernel dim = dimer count - 1; strong chain: + m + 3
    for m in range(4, 10):
        assert recurrence_dim("strong_cycle", m) == recurrence_dimers("strong_cycle", m) - 1
    for m in range(1, 10):
        assert recurrence_dim("strong_chain", m) == \
            recurrence_dimers("strong_chain", m) + m + 3


def test_loose_chain_growth_rate():
    # dominant root of x^2 = 4x - 2
    target = 2 + np.sqrt(2)
    prev = recurrence_dim("loose_chain", 11)
    cur = recurrence_dim("loose_chain", 12)
    assert abs(cur / prev - target) < 1e-3


# ---------------------------------------------------------------------------
# separable formulas


def test_separable_chain_dim_k3():
    assert separable_chain_dim(3, 1) == 7
    assert separable_chain_dim(3, 2) == 24
    assert separable_chain_dim(3, 3) == 82


def test_separable_cycle_dim_k3():
    assert separable_cycle_dim(3, 2) == 12
    assert separable_cycle_dim(3, 3) == 40
    assert separable_cycle_dim(3, 4) == 136


def test_separable_chain_dim_k2_matches_plus_two():
    # two-qubit chains have kernel dimension m + 2
    for m in range(1, 7):
        assert separable_chain_dim(2, m) == m + 2


def test_separable_cycle_dim_k2_constant():
    for m in range(2, 7):
        assert separable_cycle_dim(2, m) == 2


def test_mixed_chain_dim():
    assert mixed_chain_dim(3, 2) == 13
    assert mixed_chain_dim(2, 5) == 5 + 3  # reduces to the 2-qubit chain
    assert mixed_chain_dim(3, 0) == 7


def test_separable_chain_dim_measured_k4():
    # general-k starts are measured; the recurrence then extends them
    r1 = separable_chain_dim(4, 1)
    r2 = separable_chain_dim(4, 2)
    assert r1 == 2 ** 4 - 1
    assert r2 == 2 ** 7 - 2 ** 4
    assert separable_chain_dim(4, 3) == 8 * r2 - 4 * r1


# ---------------------------------------------------------------------------
# verification harness


def test_verify_pattern_sunflower_m2():
    rep = verify_pattern("sunflower", 2)
    assert rep["generic_dim"] == [24]
    assert rep["separable_dim"] == [24]
    assert rep["recurrence_dim"] == 24
    assert rep["dimers"] == 8
    assert rep["recurrence_dimers"] == 8
    assert rep["dim_match"] and rep["dimer_match"]


def test_verify_pattern_strong_cycle_m5():
    rep = verify_pattern("strong_cycle", 5)
    assert rep["recurrence_dim"] == 12
    assert rep["dimers"] == 13
    assert rep["dim_match"] and rep["dimer_match"]


def test_verify_pattern_loose_chain_m3():
    rep = verify_pattern("loose_chain", 3)
    assert rep["generic_dim"] == [82]
    assert rep["separable_dim"] == [82]
    assert rep["dim_match"] and rep["dimer_match"]
