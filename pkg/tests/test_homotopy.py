import numpy as np
import pytest

from qsatkit.errors import InvalidParametersError, PathFailureError
from qsatkit.graph import FactorGraph, max_matching, sample_graph
from qsatkit.groebner import solve_lex
from qsatkit.instance import hamiltonian, random_instance
from qsatkit.homotopy import (NoCoveringCertificate, prodsat_solve,
                              solve_square)
from qsatkit.polysystem import (build_equations, constant_terms,
                                drop_constants, reduce_square)


def square_setup(inst):
    system = build_equations(inst)
    consts = constant_terms(system)
    cov, covered = max_matching(inst.graph)
    assert covered == inst.graph.m
    sq = reduce_square(drop_constants(system), cov)
    return sq, consts


def strong_cycle_instance(m, seed, mode="float", denom_bound=16):
    g = FactorGraph(3, m, tuple(tuple((i + j) % m for j in range(3))
                                for i in range(m)))
    return random_instance(g, seed, mode, denom_bound)


# ---------------------------------------------------------------------------
# solve_square


def test_solve_square_linear_clause():
    # one clause, one retained variable: a0 + a1 z = 0
    g = FactorGraph(2, 2, ((0, 1),))
    inst = random_instance(g, 3)
    sq, consts = square_setup(inst)
    z = solve_square(sq, consts, seed=0, tol=1e-12)
    row = inst.projectors[0].functional_row()
    cov_var = sq.star_map[0]
    # amplitude index with only the matched qubit excited
    pos = 0b10 if cov_var == 0 else 0b01
    expected = -row[0] / row[pos]
    assert abs(z[0] - expected) < 1e-12


def test_solve_square_matches_lex_roots(rng):
    # homotopy lands on one of the complete solution set's roots
    for trial in range(5):
        inst = strong_cycle_instance(4, int(rng.integers(0, 2 ** 32)),
                                     "exact", 16)
        sq, consts = square_setup(inst)
        z = solve_square(sq, consts, seed=trial, tol=1e-10)
        full = build_equations(inst)
        roots = solve_lex(list(full.polys))
        assert roots
        z_full = np.zeros(4, dtype=complex)
        for j, v in enumerate(sq.star_map):
            z_full[v] = z[j]
        dist = min(np.max(np.abs(z_full - r)) for r in roots)
        assert dist < 1e-6


def test_solve_square_small_constants_small_root(rng):
    # shr946: small constant terms give a root of matching size, and Newton
    # from the origin reaches the same point (local uniqueness)
    inst = strong_cycle_instance(4, 99)
    sq, consts = square_setup(inst)
    scale = 1e-3 / max(abs(c) for c in consts)
    tiny = [c * scale for c in consts]
    z = solve_square(sq, tiny, seed=1, tol=1e-12)
    assert np.max(np.abs(z)) < 1e-2
    # plain Newton from zero converges to the same root
    from qsatkit.homotopy import _FastSystem
    fs = _FastSystem(sq)
    w = np.zeros(4, dtype=complex)
    for _ in range(50):
        w = w - np.linalg.solve(fs.jacobian(w), fs.value(w) + np.array(tiny))
    np.testing.assert_allclose(w, z, atol=1e-9)


def test_solve_square_deterministic():
    inst = strong_cycle_instance(5, 123)
    sq, consts = square_setup(inst)
    z1 = solve_square(sq, consts, seed=42)
    z2 = solve_square(sq, consts, seed=42)
    np.testing.assert_array_equal(z1, z2)


def test_solve_square_validates_inputs():
    inst = strong_cycle_instance(4, 7)
    sq, consts = square_setup(inst)
    with pytest.raises(InvalidParametersError):
        solve_square(sq, consts[:2])


def test_solve_square_residual_contract(rng):
    for trial in range(10):
        inst = strong_cycle_instance(int(rng.choice([4, 5, 6])),
                                     int(rng.integers(0, 2 ** 32)))
        sq, consts = square_setup(inst)
        z = solve_square(sq, consts, seed=trial, tol=1e-9)
        from qsatkit.homotopy import _FastSystem
        fs = _FastSystem(sq)
        assert np.max(np.abs(fs.value(z) + np.array(consts))) < 1e-9


# ---------------------------------------------------------------------------
# prodsat_solve pipeline


def test_prodsat_empty_core(rng):
    g = sample_graph(200, 140, 3, seed=6)
    inst = random_instance(g, 6)
    res = prodsat_solve(inst, seed=0)
    assert res.solved
    assert res.core_size == (0, 0)
    assert max(res.residuals) < 1e-9


def test_prodsat_nonempty_core():
    inst = strong_cycle_instance(6, 9)
    res = prodsat_solve(inst, seed=0)
    assert res.solved
    assert res.core_size == (6, 6)
    assert max(res.residuals) < 1e-8
    assert res.covering_used is not None


def test_prodsat_solution_zeroes_unreduced_system():
    # the embedded solution (zeros on uncovered variables) kills every
    # polynomial of the full core system, not only the reduced one
    g = FactorGraph(3, 5, ((0, 1, 2), (1, 2, 3), (2, 3, 4), (0, 3, 4),
                           (0, 1, 4)))
    inst = random_instance(g, 21)
    res = prodsat_solve(inst, seed=3)
    assert res.solved
    system = build_equations(inst)
    z = np.array([q[1] / q[0] for q in res.state.qubits])
    for p in system.polys:
        assert abs(p.eval_complex(z)) < 1e-7


def test_prodsat_no_covering_certificate():
    g = sample_graph(100, 110, 3, seed=4)
    inst = random_instance(g, 4)
    res = prodsat_solve(inst, seed=0)
    assert not res.solved
    cert = res.certificate
    assert isinstance(cert, NoCoveringCertificate)
    nb = set()
    for j in cert.clause_set:
        nb.update(g.clauses[j])
    assert len(cert.clause_set) == len(nb) + 1
    assert tuple(sorted(nb)) == cert.neighborhood


def test_prodsat_sunflower_brute_force_kernel():
    # tiny instance: check the state against the dense Hamiltonian kernel
    g = FactorGraph(3, 5, ((0, 1, 2), (0, 3, 4)))
    inst = random_instance(g, 42)
    res = prodsat_solve(inst, seed=5)
    assert res.solved
    vec = res.state.full_vector()
    H = hamiltonian(inst)
    assert float(np.real(vec.conj() @ H @ vec)) < 1e-16


def test_prodsat_deterministic():
    inst = strong_cycle_instance(5, 77)
    r1 = prodsat_solve(inst, seed=9)
    r2 = prodsat_solve(inst, seed=9)
    np.testing.assert_array_equal(r1.state.qubits, r2.state.qubits)


@pytest.mark.slow
def test_prodsat_monte_carlo_solvable_regime(rng):
    solved = 0
    worst = 0.0
    for trial in range(30):
        g = sample_graph(200, 160, 3, int(rng.integers(0, 2 ** 32)))
        inst = random_instance(g, int(rng.integers(0, 2 ** 32)))
        res = prodsat_solve(inst, seed=trial)
        if res.solved:
            solved += 1
            worst = max(worst, max(res.residuals))
    assert solved >= 28
    assert worst < 1e-8
