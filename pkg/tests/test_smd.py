import math

import mpmath
import numpy as np
import pytest

from burgmd import (
    ConvergenceError,
    InvalidArgumentError,
    ShotDataset,
    SolverConfig,
    bregman_objective,
    iterate,
    log_barrier_simplex_root,
    maximally_mixed,
    mirror_step,
    nll,
    run,
    sample_loss_gradient,
    step_size_for_horizon,
    theoretical_error_bound,
)
from burgmd import smd
from conftest import BINOMIAL_FSTAR, random_density, random_hermitian, random_projector

GOLDEN = (1 + math.sqrt(5)) / 2


# -- schedule ---------------------------------------------------------------

def test_step_size_examples():
    assert step_size_for_horizon(1, 8) == pytest.approx(0.33768, abs=5e-6)
    # d ln T == T exactly when d = T / ln T; the formula then gives 1/2
    T = 100
    assert step_size_for_horizon(T / math.log(T), T) == pytest.approx(0.5, rel=1e-14)


def test_step_size_paper_scale_matches_mpmath():
    d, T = 64, 409600 * 200
    with mpmath.workdps(50):
        a = mpmath.sqrt(d * mpmath.log(T))
        ref = float(a / (mpmath.sqrt(T) + a))
    assert step_size_for_horizon(d, T) == pytest.approx(ref, rel=1e-14)
    assert 0 < ref < 1


@pytest.mark.parametrize("T", [0, 1])
def test_step_size_degenerate_horizon(T):
    with pytest.raises(InvalidArgumentError):
        step_size_for_horizon(4, T)
    with pytest.raises(InvalidArgumentError):
        theoretical_error_bound(4, T)


def test_error_bound():
    assert theoretical_error_bound(8, 10_000) == pytest.approx(0.17904, abs=1e-5)
    assert theoretical_error_bound(8, 100) < theoretical_error_bound(16, 100)
    assert theoretical_error_bound(8, 10**8) < theoretical_error_bound(8, 10**4)


# -- Newton -----------------------------------------------------------------

def test_newton_single_coordinate():
    assert log_barrier_simplex_root([0.0]) == (1.0, 0)


@pytest.mark.parametrize("d, a", [(1, 3.0), (4, -2.5), (16, 0.1), (64, 7.0)])
def test_newton_constant_vector(d, a):
    theta, _ = log_barrier_simplex_root(np.full(d, a))
    assert theta == pytest.approx(d - a, abs=1e-10)
    np.testing.assert_allclose(1 / (theta + np.full(d, a)), np.full(d, 1 / d), rtol=1e-10)


def test_newton_golden_ratio():
    theta, its = log_barrier_simplex_root([0.0, 1.0])
    assert abs(theta - GOLDEN) <= 1e-10
    assert its <= 30


def test_newton_certificate(rng):
    for d in (2, 17, 64):
        lam = rng.standard_normal(d) * 10
        theta, _ = log_barrier_simplex_root(lam, 1e-12)
        assert theta + lam.min() > 0
        assert abs(np.sum(1 / (theta + lam)) - 1) < 1e-10


def test_newton_errors():
    with pytest.raises(InvalidArgumentError):
        log_barrier_simplex_root([0.0, np.nan])
    with pytest.raises(InvalidArgumentError):
        log_barrier_simplex_root([])
    with pytest.raises(InvalidArgumentError):
        log_barrier_simplex_root([1.0], eps=0)


def test_newton_iteration_cap(monkeypatch):
    monkeypatch.setattr(smd, "MAX_NEWTON_ITERATIONS", 2)
    with pytest.raises(ConvergenceError):
        log_barrier_simplex_root(np.arange(64.0), 1e-12)


# -- mirror step ------------------------------------------------------------

def test_mirror_step_zero_eta(rng):
    rho = random_density(rng, 4, floor=0.1)
    step = mirror_step(random_hermitian(rng, 4), rho, np.linalg.inv(rho), 0.0)
    np.testing.assert_allclose(step.rho, rho, atol=1e-12)
    assert abs(step.internals.theta) < 1e-10


def test_mirror_step_one_dimensional():
    step = mirror_step(np.array([[-5.0]]), np.eye(1), np.eye(1), 0.7)
    np.testing.assert_allclose(step.rho, [[1.0]], rtol=1e-12)


def test_mirror_step_diagonal_grid_oracle():
    rho_t = maximally_mixed(2)
    g = -np.diag([2.0, 0]).astype(complex)
    eta = 0.5
    p = np.arange(1, 10**6) * 1e-6
    # eta <g, rho - rho_t> + D_h(rho, rho_t) restricted to diag(p, 1 - p)
    grid = eta * (-2) * (p - 0.5) - np.log(p) - np.log(1 - p) + np.log(0.25) + 2 - 2
    k = int(np.argmin(grid))
    step = mirror_step(g, rho_t, np.linalg.inv(rho_t), eta)
    assert abs(step.rho[0, 1]) < 1e-14
    assert step.rho[0, 0].real == pytest.approx(p[k], abs=2e-6)
    val = bregman_objective(step.rho, g, rho_t, eta)
    assert val <= grid[k] + 1e-12
    assert abs(val - grid[k]) <= 1e-8


def _random_instance(rng, d):
    rho_t = random_density(rng, d, floor=0.05)
    if rng.random() < 0.5:
        g = random_hermitian(rng, d, scale=3.0)
    else:
        g = sample_loss_gradient(random_projector(rng, d, 1), random_density(rng, d, floor=0.1))
    return g, rho_t, float(rng.uniform(0.01, 1.0))


def test_mirror_step_kkt_and_trace(rng):
    for d in (2, 3, 8, 16):
        for _ in range(10):
            g, rho_t, eta = _random_instance(rng, d)
            rho, rho_inv, info = mirror_step(g, rho_t, np.linalg.inv(rho_t), eta)
            kkt = info.theta * np.eye(d) + eta * g + np.linalg.inv(rho_t)
            assert np.linalg.norm(rho_inv - kkt) <= 1e-8 * np.linalg.norm(rho_inv)
            assert abs(np.trace(rho).real - 1) <= 1e-8
            assert np.linalg.eigvalsh(rho)[0] > 0
            assert np.all(info.shifted_eigenvalues > 0)
            assert np.max(np.abs(rho @ rho_inv - np.eye(d))) <= 1e-8


def test_mirror_step_beats_random_search(rng):
    for d in (2, 3):
        for _ in range(5):
            g, rho_t, eta = _random_instance(rng, d)
            step = mirror_step(g, rho_t, np.linalg.inv(rho_t), eta)
            cand = np.stack([random_density(rng, d) for _ in range(2000)])
            best = np.min(bregman_objective(cand, g, rho_t, eta))
            assert bregman_objective(step.rho, g, rho_t, eta) <= best + 1e-6


def test_mirror_step_rejects_negative_eta():
    with pytest.raises(InvalidArgumentError):
        mirror_step(np.eye(2), maximally_mixed(2), 2 * np.eye(2), -1.0)


# -- solver -----------------------------------------------------------------

def test_config_validation():
    with pytest.raises(InvalidArgumentError):
        SolverConfig(0.0, 10)
    with pytest.raises(InvalidArgumentError):
        SolverConfig(0.1, 10, newton_eps=0)
    with pytest.raises(InvalidArgumentError):
        SolverConfig(0.1, 10, seed=-1)
    cfg = SolverConfig.for_horizon(4, 100, seed=3)
    assert cfg.eta == step_size_for_horizon(4, 100) and cfg.seed == 3


def test_run_identity_data_stays_mixed():
    data = ShotDataset.from_operators([np.eye(4)], [50])
    out = run(data, SolverConfig(0.3, 200))
    np.testing.assert_allclose(out, maximally_mixed(4), atol=1e-12)


def test_run_single_iteration(binomial_data):
    seen = []
    out = run(binomial_data, SolverConfig(0.5, 1), lambda t, rb: seen.append(t))
    assert seen == [1]
    np.testing.assert_array_equal(out, maximally_mixed(2))


def test_run_rejects_empty():
    with pytest.raises(InvalidArgumentError):
        run(ShotDataset.empty(2), SolverConfig(0.5, 3))


def test_averaging_identity_and_state_invariants(rng):
    ops = [random_projector(rng, 4, 2) for _ in range(6)]
    data = ShotDataset.from_operators(ops, rng.integers(1, 5, size=6))
    rhos = []
    for t, rho_bar, state in iterate(data, SolverConfig.for_horizon(4, 300, seed=5)):
        rhos.append(state.rho.copy())
        np.testing.assert_allclose(rho_bar, np.mean(rhos, axis=0), atol=1e-12, rtol=0)
        assert state.t == t and state.shots_used == t - 1
        assert np.linalg.eigvalsh(state.rho)[0] > 1e-14
        assert abs(np.trace(state.rho).real - 1) <= 1e-8
        assert np.max(np.abs(state.rho @ state.rho_inv - np.eye(4))) <= 1e-8
        assert abs(np.trace(rho_bar).real - 1) <= 1e-9


def test_seeded_determinism(rng):
    ops = [random_projector(rng, 3, 1) for _ in range(8)]
    data = ShotDataset.from_operators(ops)

    def trace(seed):
        out = []
        for _, _, st in iterate(data, SolverConfig(0.2, 100, seed=seed)):
            out.append(st.rho.copy())
        return np.stack(out)

    a, b, c = trace(11), trace(11), trace(12)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_binomial_recovery_short(binomial_data):
    T = 10_000
    errs = [nll(binomial_data, run(binomial_data, SolverConfig.for_horizon(2, T, seed=s))) - BINOMIAL_FSTAR
            for s in range(3)]
    assert np.mean(errs) <= theoretical_error_bound(2, T)
    assert min(errs) >= -1e-12
