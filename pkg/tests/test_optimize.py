import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import DENSE_MAX_Q_PLUS
from qri.errors import DimensionMismatch, ValidationError
from qri.incompat import quantumness, quantumness_batch
from qri.optimize import (
    BasisParams,
    _qubit_objective,
    canonical_params,
    max_q_over_b,
    max_q_over_b_general,
)
from qri.states import (
    bloch_pure,
    depolarized,
    maximally_mixed,
    named_basis,
    pure_state,
    qubit_basis,
    random_density_matrix,
    random_pure_state,
)

DENSE_GRID_MAX_Q_PLUS = DENSE_MAX_Q_PLUS

Z = named_basis("computational")


def test_qubit_objective_matches_quantumness(rng):
    for _ in range(20):
        rho = random_density_matrix(2, rng)
        f = _qubit_objective(rho, Z, 2)
        beta, gamma = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
        assert f(beta, gamma) == pytest.approx(quantumness(rho, Z, qubit_basis(beta, gamma)), abs=1e-12)


@given(st.floats(-20, 20), st.floats(-20, 20), st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_canonical_params_preserve_the_measurement(beta, gamma, seed):
    rho = random_density_matrix(2, np.random.default_rng(seed))
    cb, cg = canonical_params(beta, gamma)
    assert 0 <= cb <= math.pi and 0 <= cg < 2 * math.pi
    f = _qubit_objective(rho, Z, 2)
    assert f(cb, cg) == pytest.approx(f(beta, gamma), abs=1e-10)


def test_basis_params_ranges():
    BasisParams(0.0, 0.0)
    with pytest.raises(ValidationError):
        BasisParams(4.0, 0.0)
    with pytest.raises(ValidationError):
        BasisParams(1.0, 2 * math.pi)


def test_pole_state_reaches_one():
    res = max_q_over_b(pure_state([1, 0]), Z)
    assert res.q_max == pytest.approx(1.0, abs=1e-9)
    assert res.argmax.beta == pytest.approx(math.pi / 2, abs=1e-4)


def test_maximally_mixed_gives_zero():
    assert max_q_over_b(maximally_mixed(2), Z).q_max <= 1e-12


def test_plus_state_matches_dense_grid_oracle():
    res = max_q_over_b(pure_state([1, 1]), Z, grid_n=32)
    assert abs(res.q_max - DENSE_GRID_MAX_Q_PLUS) <= 1e-4
    # the refinement may only improve on the brute-force grid
    assert res.q_max >= DENSE_GRID_MAX_Q_PLUS - 1e-12


def test_result_dominates_grid_samples(rng):
    rho = random_density_matrix(2, rng)
    n = 16
    res = max_q_over_b(rho, Z, grid_n=n, refine_iters=50)
    betas = np.linspace(0, math.pi, n)
    gammas = np.arange(n) * 2 * math.pi / n
    grid = [quantumness(rho, Z, qubit_basis(b, g)) for b in betas for g in gammas]
    assert res.q_max >= max(grid) - 1e-12
    assert res.q_max >= 0
    assert res.basis is not None
    assert quantumness(rho, Z, res.basis) == pytest.approx(res.q_max, abs=1e-10)


def test_refinement_trace_is_monotone(rng):
    res = max_q_over_b(random_pure_state(2, rng), Z, grid_n=8, refine_iters=100)
    vals = [v for _, v in res.trace]
    assert vals and all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))


def test_no_refinement_returns_grid_best():
    res = max_q_over_b(bloch_pure(0.4, 0.0), Z, grid_n=8, refine_iters=0)
    assert res.trace == []
    assert res.refine_iterations == 0


def test_deterministic():
    rho = depolarized(bloch_pure(1.0, 0.3), 0.7)
    r1 = max_q_over_b(rho, Z, 16, 100, seed=5)
    r2 = max_q_over_b(rho, Z, 16, 100, seed=5)
    assert r1.q_max == r2.q_max and r1.argmax == r2.argmax and r1.trace == r2.trace


def test_argument_errors():
    with pytest.raises(ValidationError):
        max_q_over_b(pure_state([1, 0]), Z, grid_n=4)
    with pytest.raises(DimensionMismatch):
        max_q_over_b(maximally_mixed(3), named_basis("computational", 3))
    with pytest.raises(ValidationError):
        max_q_over_b_general(maximally_mixed(2), Z, samples=8)


def test_upper_bound_for_pure_qubits(rng):
    for _ in range(10):
        assert max_q_over_b(random_pure_state(2, rng), Z, 16, 100).q_max <= 1 + 1e-9


# --- general dimension --------------------------------------------------------

@pytest.mark.parametrize("theta", [0.0, 0.6, math.pi / 2, 2.5])
def test_general_agrees_with_qubit_path(theta):
    rho = bloch_pure(theta, 0.9)
    grid = max_q_over_b(rho, Z).q_max
    general = max_q_over_b_general(rho, Z, samples=64, seed=11).q_max
    assert abs(general - grid) <= 1e-3


def test_general_maximally_mixed():
    for d in (2, 3, 4):
        assert max_q_over_b_general(maximally_mixed(d), named_basis("computational", d), samples=32).q_max <= 1e-12


def test_general_qutrit_reaches_fourier_lower_bound():
    rho = pure_state([1, 0, 0])
    z3 = named_basis("computational", 3)
    fourier_value = quantumness(rho, z3, named_basis("fourier", 3))
    assert fourier_value == pytest.approx(math.log2(3), abs=1e-12)
    res = max_q_over_b_general(rho, z3, samples=128, seed=1)
    assert res.q_max >= fourier_value - 0.05


def test_general_improves_on_raw_samples_and_is_deterministic():
    rho = random_density_matrix(3, np.random.default_rng(4))
    z3 = named_basis("computational", 3)
    res = max_q_over_b_general(rho, z3, samples=40, seed=9)
    raw_best = res.trace[0][1]
    assert res.q_max >= raw_best
    vals = [v for _, v in res.trace]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    again = max_q_over_b_general(rho, z3, samples=40, seed=9)
    assert again.q_max == res.q_max
    np.testing.assert_array_equal(again.basis.matrix, res.basis.matrix)
    assert quantumness(rho, z3, res.basis) == pytest.approx(res.q_max, abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_pure_state_bound_is_log_d(d, rng):
    # empirical check only: -sum x log z <= log d was observed, not proven
    zd = named_basis("computational", d)
    for _ in range(3):
        res = max_q_over_b_general(random_pure_state(d, rng), zd, samples=64, refine_iters=300,
                                   seed=int(rng.integers(1 << 30)))
        assert res.q_max <= math.log2(d) + 1e-9


def test_batch_and_basis_stack_agree(rng):
    from qri.optimize import _qubit_basis_stack
    rho = random_density_matrix(2, rng)
    betas = rng.uniform(0, math.pi, 10)
    gammas = rng.uniform(0, 2 * math.pi, 10)
    batch = quantumness_batch(rho.mat, Z.matrix, _qubit_basis_stack(betas, gammas))
    scalar = [quantumness(rho, Z, qubit_basis(b, g)) for b, g in zip(betas, gammas)]
    np.testing.assert_allclose(batch, scalar, atol=1e-13)
