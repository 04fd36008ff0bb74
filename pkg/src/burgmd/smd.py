r"""Stochastic mirror descent with the Burg entropy.

The mirror map is :math:`h(\rho) = -\log\det\rho`. Each iteration draws one
shot uniformly at random, evaluates its gradient at the running average of
the iterates (anytime online-to-batch), and takes an exact Bregman proximal
step from the current iterate:

.. math::

    \rho_{t+1} = \arg\min_{\rho \in \mathcal{D}}
        \eta \langle g_t, \rho - \rho_t \rangle + D_h(\rho, \rho_t).

The step reduces to one Hermitian eigendecomposition plus a scalar Newton
solve, so the per-iteration cost is O(d^3) regardless of the sample size.
"""

import math
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple, Optional

import numpy as np

from .errors import ConvergenceError, InvalidArgumentError
from .hermitian import eig_hermitian, hermitize
from .model import ShotDataset, maximally_mixed, sample_loss_gradient

__all__ = [
    "DEFAULT_NEWTON_EPS",
    "MAX_HALVINGS",
    "MAX_NEWTON_ITERATIONS",
    "MirrorStep",
    "MirrorStepInternals",
    "SolverConfig",
    "SolverState",
    "bregman_objective",
    "iterate",
    "log_barrier_simplex_root",
    "mirror_step",
    "run",
    "step_size_for_horizon",
    "theoretical_error_bound",
]

DEFAULT_NEWTON_EPS = 1e-9
MAX_NEWTON_ITERATIONS = 200
MAX_HALVINGS = 60
_SCALAR_NEWTON_MAX_DIM = 16


def _check_horizon(d, T):
    if d < 1:
        raise InvalidArgumentError(f"dimension must be >= 1, got {d}")
    if T <= 1:
        raise InvalidArgumentError(f"horizon must be >= 2, got {T}")


def step_size_for_horizon(d, T):
    """Step size ``sqrt(d ln T) / (sqrt(T) + sqrt(d ln T))`` for a fixed horizon ``T``."""
    _check_horizon(d, T)
    a = math.sqrt(d * math.log(T))
    return a / (math.sqrt(T) + a)


def theoretical_error_bound(d, T):
    """Bound ``2 sqrt(d ln T / T) + d ln T / T`` on the expected optimization
    error of the averaged iterate after ``T`` iterations."""
    _check_horizon(d, T)
    r = d * math.log(T) / T
    return 2 * math.sqrt(r) + r


def log_barrier_simplex_root(lambdas, eps=DEFAULT_NEWTON_EPS):
    r"""Find the shift :math:`\theta` with :math:`\sum_i 1/(\theta+\lambda_i) = 1`.

    Minimizes :math:`\phi(\theta) = \theta - \sum_i \log(\theta + \lambda_i)`
    by Newton's method started at ``1 - min(lambdas)`` and stopped once the
    Newton decrement :math:`|\phi'|/\sqrt{\phi''}` drops below ``eps``.
    The weights ``1 / (theta + lambdas)`` are then the log-barrier projection
    of ``-lambdas`` onto the probability simplex.

    Parameters
    ----------
    lambdas : array_like, shape (d,)
    eps : float
        Tolerance on the Newton decrement.

    Returns
    -------
    theta : float
    iterations : int
        Number of Newton steps taken.

    Raises
    ------
    ConvergenceError
        If more than ``MAX_NEWTON_ITERATIONS`` steps are needed, or a step
        cannot be kept inside the domain after ``MAX_HALVINGS`` halvings.
    """
    lam = np.asarray(lambdas, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise InvalidArgumentError("lambdas must be a non-empty vector")
    if not np.all(np.isfinite(lam)):
        raise InvalidArgumentError("lambdas must be finite")
    if not eps > 0:
        raise InvalidArgumentError(f"eps must be positive, got {eps}")
    lam_min = float(lam.min())
    if lam.size <= _SCALAR_NEWTON_MAX_DIM:
        # plain floats beat numpy call overhead at small d
        vals = lam.tolist()

        def derivatives(theta):
            inv = [1.0 / (theta + v) for v in vals]
            return 1.0 - sum(inv), sum(x * x for x in inv)

    else:

        def derivatives(theta):
            inv = 1.0 / (lam + theta)
            return 1.0 - float(inv.sum()), float(inv @ inv)

    theta = 1.0 - lam_min
    for it in range(MAX_NEWTON_ITERATIONS + 1):
        d1, d2 = derivatives(theta)
        if abs(d1) < eps * math.sqrt(d2):
            return theta, it
        if it == MAX_NEWTON_ITERATIONS:
            break
        step = d1 / d2
        new = theta - step
        halvings = 0
        while new + lam_min <= 0:
            if halvings == MAX_HALVINGS:
                raise ConvergenceError("Newton step left the domain of the log barrier")
            step *= 0.5
            new = theta - step
            halvings += 1
        if new == theta:
            # decrement below what float resolution around theta can express
            return theta, it + 1
        theta = new
    raise ConvergenceError(
        f"Newton did not reach decrement {eps:g} in {MAX_NEWTON_ITERATIONS} iterations"
    )


class MirrorStepInternals(NamedTuple):
    theta: float
    newton_iterations: int
    shifted_eigenvalues: np.ndarray


class MirrorStep(NamedTuple):
    rho: np.ndarray
    rho_inv: np.ndarray
    internals: MirrorStepInternals


def mirror_step(g, rho, rho_inv, eta, eps=DEFAULT_NEWTON_EPS):
    r"""Exact Burg-entropy mirror step over density matrices.

    Solves :math:`\min_{\rho\in\mathcal{D}} \eta\langle g, \rho - \rho_t\rangle
    + D_h(\rho, \rho_t)` given the Bregman center ``rho`` and its inverse.
    Optimality reads :math:`\rho_{t+1}^{-1} = \theta I + \eta g + \rho_t^{-1}`,
    so with :math:`\eta g + \rho_t^{-1} = U \operatorname{diag}(\lambda) U^*`
    the solution is :math:`U \operatorname{diag}(1/(\theta+\lambda)) U^*`.

    ``rho`` itself enters only through ``rho_inv``; it is accepted for
    symmetry with the iteration state.

    Returns
    -------
    MirrorStep
        ``(rho_next, rho_next_inv, internals)``. The inverse is formed
        spectrally, never by matrix inversion.
    """
    if eta < 0:
        raise InvalidArgumentError(f"eta must be non-negative, got {eta}")
    lam, U = eig_hermitian(hermitize(eta * g + rho_inv))
    theta, its = log_barrier_simplex_root(lam, eps)
    shifted = theta + lam
    Uh = U.conj().T
    rho_next = hermitize((U / shifted) @ Uh)
    rho_next_inv = hermitize((U * shifted) @ Uh)
    return MirrorStep(rho_next, rho_next_inv, MirrorStepInternals(theta, its, shifted))


def bregman_objective(rho, g, center, eta):
    r"""Value of :math:`\eta\langle g, \rho - c\rangle + D_h(\rho, c)` for the
    Burg entropy, where :math:`D_h(\rho, c) = -\log\det\rho + \log\det c +
    \operatorname{tr}(c^{-1}\rho) - d`.

    ``rho`` may be a stack of matrices with shape ``(..., d, d)``. Returns
    ``inf`` where ``rho`` is not positive definite.
    """
    rho = np.asarray(rho)
    d = center.shape[0]
    lin = np.einsum("ij,...ji->...", g, rho - center).real
    sign_c, logdet_c = np.linalg.slogdet(center)
    sign, logdet = np.linalg.slogdet(rho)
    c_inv = np.linalg.inv(center)
    div = -logdet.real + logdet_c.real + np.einsum("ij,...ji->...", c_inv, rho).real - d
    out = eta * lin + div
    # a density matrix has real positive determinant iff it is positive definite
    eig_min = np.linalg.eigvalsh(rho)[..., 0]
    return np.where(eig_min > 0, out, np.inf)


@dataclass(frozen=True)
class SolverConfig:
    """Parameters for one solver run.

    Use :meth:`for_horizon` to get the step size that comes with the
    convergence guarantee for ``horizon`` iterations.
    """

    eta: float
    horizon: int
    newton_eps: float = DEFAULT_NEWTON_EPS
    seed: int = 0

    def __post_init__(self):
        if not self.eta > 0:
            raise InvalidArgumentError(f"eta must be positive, got {self.eta}")
        if not self.newton_eps > 0:
            raise InvalidArgumentError(f"newton_eps must be positive, got {self.newton_eps}")
        if self.horizon < 1:
            raise InvalidArgumentError(f"horizon must be >= 1, got {self.horizon}")
        if not 0 <= self.seed < 2**64:
            raise InvalidArgumentError("seed must be a 64-bit unsigned integer")

    @classmethod
    def for_horizon(cls, d, horizon, newton_eps=DEFAULT_NEWTON_EPS, seed=0):
        return cls(step_size_for_horizon(d, horizon), horizon, newton_eps, seed)


@dataclass
class SolverState:
    """Mutable iteration state. ``t`` counts iterates, starting at 1."""

    t: int
    rho: np.ndarray
    rho_inv: np.ndarray
    iterate_sum: np.ndarray
    rng: np.random.Generator
    last_step: Optional[MirrorStepInternals] = None
    shots_used: int = 0

    @classmethod
    def initial(cls, d, seed):
        rho = maximally_mixed(d)
        rng = np.random.Generator(np.random.PCG64(seed))
        return cls(1, rho, np.eye(d, dtype=complex) * d, rho.copy(), rng)

    @property
    def rho_bar(self):
        return hermitize(self.iterate_sum / self.t)


def iterate(data: ShotDataset, config: SolverConfig) -> Iterator[tuple]:
    """Yield ``(t, rho_bar_t, state)`` for ``t = 1, ..., config.horizon``.

    Shots are drawn uniformly over all ``n`` shots with a PCG64 generator
    seeded by ``config.seed``. The yielded state is live and must not be
    modified by the consumer. No step is taken after the last yield.
    """
    data.require_nonempty()
    n = data.total_shots
    state = SolverState.initial(data.dim, config.seed)
    while True:
        rho_bar = state.rho_bar
        yield state.t, rho_bar, state
        if state.t >= config.horizon:
            return
        i = data.entry_of_shot(state.rng.integers(n))
        g = sample_loss_gradient(data.operators[i], rho_bar)
        step = mirror_step(g, state.rho, state.rho_inv, config.eta, config.newton_eps)
        state.rho, state.rho_inv, state.last_step = step
        state.iterate_sum = state.iterate_sum + step.rho
        state.t += 1
        state.shots_used += 1


def run(
    data: ShotDataset,
    config: SolverConfig,
    on_iterate: Optional[Callable[[int, np.ndarray], None]] = None,
) -> np.ndarray:
    """Run ``config.horizon`` iterations and return the final averaged iterate.

    ``on_iterate(t, rho_bar_t)`` is called once per iteration before the
    shot for that iteration is drawn.
    """
    rho_bar = None
    for t, rho_bar, _ in iterate(data, config):
        if on_iterate is not None:
            on_iterate(t, rho_bar)
    return rho_bar
