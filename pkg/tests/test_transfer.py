import numpy as np
import pytest

from qsatkit.errors import DegenerateInstanceError, InvalidParametersError
from qsatkit.graph import FactorGraph, leaf_removal, sample_graph
from qsatkit.instance import (Instance, ProductState, Projector,
                              evaluate_state, random_instance,
                              sample_projector, separable_projector)
from qsatkit.transfer import apply_transfer, reconstruct, transfer_matrix


def test_transfer_matrix_forces_orthogonal_state():
    # Phi = |01>: amplitudes (0, 1, 0, 0); selecting qubit 2 forces it
    # orthogonal to |1> whenever the first qubit overlaps |0>
    p = Projector(2, np.array([0.0, 1.0, 0.0, 0.0]))
    T = transfer_matrix(p, 2)
    np.testing.assert_allclose(T, [[1.0, 0.0], [0.0, 0.0]])
    out = T @ np.array([0.3, 0.7])
    np.testing.assert_allclose(out / np.linalg.norm(out), [1.0, 0.0])


def test_transfer_matrix_shape_and_position_validation():
    p = sample_projector(3, 0)
    assert transfer_matrix(p, 1).shape == (2, 4)
    with pytest.raises(InvalidParametersError):
        transfer_matrix(p, 0)
    with pytest.raises(InvalidParametersError):
        transfer_matrix(p, 4)


def test_transfer_satisfies_constraint_random(rng):
    # the defining property, over random projectors, inputs and positions
    for trial in range(100):
        k = int(rng.integers(2, 5))
        sel = int(rng.integers(1, k + 1))
        p = sample_projector(k, int(rng.integers(0, 2 ** 32)))
        chis = [rng.normal(size=2) + 1j * rng.normal(size=2)
                for _ in range(k - 1)]
        out = apply_transfer(p, sel, chis)
        states = chis[:sel - 1] + [out] + chis[sel - 1:]
        g = FactorGraph(k, k, (tuple(range(k)),))
        inst = Instance(g, (p,), "float")
        psi = ProductState(np.array(states))
        assert evaluate_state(inst, psi)[0] < 1e-12


def test_transfer_separable_projector(rng):
    # separable Phi = phi1 (x) phi2: the output is orthogonal to phi2
    # whenever <phi1 | chi1> != 0
    for trial in range(20):
        phi1 = rng.normal(size=2) + 1j * rng.normal(size=2)
        phi2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        p = separable_projector([phi1, phi2])
        chi = rng.normal(size=2) + 1j * rng.normal(size=2)
        if abs(np.vdot(phi1, chi)) < 1e-6:
            continue
        out = apply_transfer(p, 2, [chi])
        assert abs(np.vdot(phi2, out)) < 1e-10


def test_transfer_degenerate_input():
    # orthogonal first factor annihilates the transfer output
    phi1 = np.array([1.0, 0.0])
    phi2 = np.array([0.0, 1.0])
    p = separable_projector([phi1, phi2])
    with pytest.raises(DegenerateInstanceError):
        apply_transfer(p, 2, [np.array([0.0, 1.0])])


# ---------------------------------------------------------------------------
# reconstruction


def test_reconstruct_single_clause():
    g = FactorGraph(3, 3, ((0, 1, 2),))
    inst = random_instance(g, 5)
    res = leaf_removal(g)
    psi = reconstruct(res, None, inst)
    vals = evaluate_state(inst, psi)
    assert vals[0] < 1e-12
    # two free qubits got the uniform default
    defaults = sum(1 for q in psi.qubits
                   if np.allclose(q, np.array([1, 1]) / np.sqrt(2)))
    assert defaults == 2


def test_reconstruct_empty_core_large(rng):
    g = sample_graph(200, 140, 3, seed=17)
    inst = random_instance(g, 17)
    res = leaf_removal(g)
    assert res.core_is_empty
    psi = reconstruct(res, None, inst)
    assert max(evaluate_state(inst, psi)) < 1e-9


def test_reconstruct_requires_core_state():
    m = 4
    g = FactorGraph(3, 4, tuple(tuple((i + j) % m for j in range(3))
                                for i in range(m)))
    inst = random_instance(g, 2)
    res = leaf_removal(g)
    assert not res.core_is_empty
    with pytest.raises(InvalidParametersError):
        reconstruct(res, None, inst)


def test_reconstruct_rejects_bad_core_state(rng):
    m = 4
    g = FactorGraph(3, 4, tuple(tuple((i + j) % m for j in range(3))
                                for i in range(m)))
    inst = random_instance(g, 2)
    res = leaf_removal(g)
    bad = ProductState(rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2)))
    with pytest.raises(InvalidParametersError):
        reconstruct(res, bad, inst)


def test_reconstruct_randomized_free_qubits(rng):
    g = FactorGraph(3, 3, ((0, 1, 2),))
    inst = random_instance(g, 5)
    res = leaf_removal(g)
    psi = reconstruct(res, None, inst, rng=np.random.default_rng(3))
    assert max(evaluate_state(inst, psi)) < 1e-12
    psi2 = reconstruct(res, None, inst, rng=np.random.default_rng(4))
    assert not np.allclose(psi.qubits, psi2.qubits)


def test_reconstruct_isolated_variables():
    g = FactorGraph(3, 5, ((0, 1, 2),))  # variables 3, 4 never constrained
    inst = random_instance(g, 1)
    res = leaf_removal(g)
    psi = reconstruct(res, None, inst)
    assert psi.n == 5
    assert max(evaluate_state(inst, psi)) < 1e-12


@pytest.mark.slow
def test_reconstruct_linear_time_scaling():
    import time

    g = sample_graph(10_000, 7_000, 3, seed=23)
    inst = random_instance(g, 23)
    res = leaf_removal(g)
    assert res.core_is_empty
    t0 = time.time()
    psi = reconstruct(res, None, inst)
    assert time.time() - t0 < 1.0
    assert max(evaluate_state(inst, psi)) < 1e-8
