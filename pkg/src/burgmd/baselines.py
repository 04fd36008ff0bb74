"""Full-batch reference solvers.

* R-rho-R: the multiplicative fixed-point iteration
  ``rho <- R rho R / tr(R rho R)`` with ``R = (1/n) sum_i A_i / tr(A_i rho)``
  (Lvovsky 2004; Molina-Terriza et al. 2004). No dilution.
* Batch mirror descent: the Burg-entropy mirror step applied to the full
  gradient with a constant step and no averaging. Used to estimate the
  optimal value.

Neither solver is randomized.
"""

from typing import Iterator

import numpy as np

from .errors import InvalidArgumentError, NumericDegeneracyError
from .hermitian import hermitize
from .model import ShotDataset, maximally_mixed, nll_gradient
from .smd import DEFAULT_NEWTON_EPS, mirror_step

__all__ = [
    "DEFAULT_BATCH_ETA",
    "batch_mirror_descent",
    "iter_batch_mirror_descent",
    "iter_rpr",
    "rpr_step",
]

DEFAULT_BATCH_ETA = 0.5


def rpr_step(data: ShotDataset, rho):
    R = -nll_gradient(data, rho)
    RrR = hermitize(R @ rho @ R)
    tr = np.trace(RrR).real
    if not tr > 0:
        raise NumericDegeneracyError(f"tr(R rho R) = {tr!r}")
    return RrR / tr


def iter_rpr(data: ShotDataset, iterations) -> Iterator[np.ndarray]:
    """Yield ``rho_1 = I/d`` followed by ``iterations`` R-rho-R updates."""
    if iterations < 0:
        raise InvalidArgumentError("iterations must be >= 0")
    data.require_nonempty()
    rho = maximally_mixed(data.dim)
    yield rho
    for _ in range(iterations):
        rho = rpr_step(data, rho)
        yield rho


def iter_batch_mirror_descent(
    data: ShotDataset, eta=DEFAULT_BATCH_ETA, eps=DEFAULT_NEWTON_EPS, iterations=1
) -> Iterator[np.ndarray]:
    """Yield ``rho_1 = I/d`` followed by ``iterations`` full-gradient mirror steps."""
    if not eta > 0:
        raise InvalidArgumentError(f"eta must be positive, got {eta}")
    if iterations < 0:
        raise InvalidArgumentError("iterations must be >= 0")
    data.require_nonempty()
    d = data.dim
    rho = maximally_mixed(d)
    rho_inv = np.eye(d, dtype=complex) * d
    yield rho
    for _ in range(iterations):
        rho, rho_inv, _ = mirror_step(nll_gradient(data, rho), rho, rho_inv, eta, eps)
        yield rho


def batch_mirror_descent(data, eta=DEFAULT_BATCH_ETA, eps=DEFAULT_NEWTON_EPS, iterations=1):
    """List of all ``iterations + 1`` iterates, starting from ``I/d``."""
    return list(iter_batch_mirror_descent(data, eta, eps, iterations))
