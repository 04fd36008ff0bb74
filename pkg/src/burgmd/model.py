"""Negative log-likelihood model for state tomography.

A dataset is a multiset of Hermitian PSD measurement operators ``A_i``; the
loss is ``f(rho) = (1/n) sum_i -log tr(A_i rho)`` over density matrices.
Identical operators are stored once together with their multiplicity.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, SingularLikelihoodError
from .hermitian import hermitize

__all__ = [
    "SINGULAR_THRESHOLD",
    "ShotDataset",
    "check_density_matrix",
    "fidelity_pure",
    "maximally_mixed",
    "nll",
    "nll_gradient",
    "sample_loss",
    "sample_loss_gradient",
]

SINGULAR_THRESHOLD = 1e-300


@dataclass(frozen=True, eq=False)
class ShotDataset:
    """Compressed shot data.

    Parameters
    ----------
    operators : ndarray, shape (k, d, d)
        Distinct measurement operators.
    counts : ndarray of int, shape (k,)
        Number of shots that produced each operator; all >= 1.
    target : ndarray, shape (d,), optional
        Pure reference state (e.g. the state the data was simulated from).
        Used only for fidelity reporting.
    """

    operators: np.ndarray
    counts: np.ndarray
    target: np.ndarray = None
    _cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        ops = np.asarray(self.operators, dtype=complex)
        counts = np.asarray(self.counts)
        if ops.ndim != 3 or ops.shape[1] != ops.shape[2] or ops.shape[1] == 0:
            raise InvalidArgumentError(f"operators must have shape (k, d, d), got {ops.shape}")
        if counts.shape != (ops.shape[0],):
            raise InvalidArgumentError("one count per operator required")
        if counts.size and (not np.issubdtype(counts.dtype, np.integer) or counts.min() < 1):
            raise InvalidArgumentError("counts must be positive integers")
        counts = counts.astype(np.int64)
        target = self.target
        if target is not None:
            target = np.asarray(target, dtype=complex)
            if target.shape != (ops.shape[1],):
                raise InvalidArgumentError("target dimension does not match operators")
        ops.setflags(write=False)
        counts.setflags(write=False)
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "_cumulative", np.cumsum(counts))

    @classmethod
    def from_operators(cls, operators, counts=None, target=None):
        """Build from a list of ``(d, d)`` operators; counts default to 1."""
        operators = [np.asarray(A, dtype=complex) for A in operators]
        if counts is None:
            counts = [1] * len(operators)
        return cls(np.stack(operators), np.asarray(counts, dtype=np.int64), target)

    @classmethod
    def empty(cls, dim):
        return cls(np.zeros((0, dim, dim), dtype=complex), np.zeros(0, dtype=np.int64))

    @property
    def dim(self):
        return self.operators.shape[1]

    @property
    def total_shots(self):
        return int(self._cumulative[-1]) if self.counts.size else 0

    def __len__(self):
        return self.operators.shape[0]

    def entry_of_shot(self, shot):
        """Index of the unique entry holding shot number ``shot`` (0-based)."""
        return int(np.searchsorted(self._cumulative, shot, side="right"))

    def require_nonempty(self):
        if self.total_shots == 0:
            raise InvalidArgumentError("dataset contains no shots")

    def probabilities(self, rho):
        """``tr(A_i rho)`` for every entry, raising on singular entries."""
        if rho.shape != (self.dim, self.dim):
            raise InvalidArgumentError(f"rho has shape {rho.shape}, expected {(self.dim, self.dim)}")
        p = np.einsum("kij,ji->k", self.operators, rho).real
        bad = np.flatnonzero(p <= SINGULAR_THRESHOLD)
        if bad.size:
            i = int(bad[0])
            raise SingularLikelihoodError(f"tr(A_{i} rho) = {p[i]:.3g} is not positive", index=i)
        return p


def maximally_mixed(d):
    return np.eye(d, dtype=complex) / d


def check_density_matrix(rho, tol=1e-10, strict=False):
    """Raise ``InvalidArgumentError`` unless ``rho`` is a density matrix.

    With ``strict=True`` the minimum eigenvalue must be positive (full rank).
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidArgumentError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InvalidArgumentError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1) > tol:
        raise InvalidArgumentError(f"trace is {tr!r}, expected 1")
    lam_min = np.linalg.eigvalsh(rho)[0]
    if lam_min < -tol or (strict and lam_min <= 0):
        raise InvalidArgumentError(f"minimum eigenvalue {lam_min:.3g} violates positivity")


def _probability(A, rho):
    p = np.einsum("ij,ji->", A, rho).real
    if p <= SINGULAR_THRESHOLD:
        raise SingularLikelihoodError(f"tr(A rho) = {p:.3g} is not positive")
    return p


def nll(data, rho):
    """Count-weighted average of ``-log tr(A_i rho)`` (natural log)."""
    data.require_nonempty()
    p = data.probabilities(rho)
    # + 0.0 turns -0.0 into 0.0
    return float(-np.dot(data.counts, np.log(p)) / data.total_shots) + 0.0


def nll_gradient(data, rho):
    """Full-batch gradient ``-(1/n) sum_i count_i A_i / tr(A_i rho)``."""
    data.require_nonempty()
    p = data.probabilities(rho)
    w = data.counts / (data.total_shots * p)
    return hermitize(-np.tensordot(w, data.operators, axes=1))


def sample_loss(A, rho):
    return float(-np.log(_probability(A, rho)))


def sample_loss_gradient(A, rho_bar):
    """Gradient ``-A / tr(A rho_bar)`` of the single-shot loss."""
    return hermitize(A / -_probability(A, rho_bar))


def fidelity_pure(psi, rho):
    """Overlap ``<psi|rho|psi>`` with a pure state, clamped to [0, 1]."""
    psi = np.asarray(psi)
    if psi.shape != (rho.shape[0],):
        raise InvalidArgumentError(f"state of length {psi.shape} does not match rho {rho.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > 1e-10:
        raise InvalidArgumentError(f"state has norm {norm!r}, expected 1")
    val = np.vdot(psi, rho @ psi).real
    return float(min(max(val, 0.0), 1.0))
