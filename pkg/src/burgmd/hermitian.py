"""Dense complex Hermitian matrix primitives.

Matrices are plain ``numpy`` arrays of shape ``(d, d)``. Every function that
produces a Hermitian matrix passes the result through :func:`hermitize`, so
the conjugate-symmetry invariant holds bit-for-bit after construction.
"""

from typing import NamedTuple

import numpy as np

from .errors import DecompositionError, InvalidArgumentError

__all__ = [
    "SpectralDecomposition",
    "eig_hermitian",
    "from_spectrum",
    "hermitize",
    "trace_product",
]


class SpectralDecomposition(NamedTuple):
    """Eigenvalues in ascending order; column ``k`` of ``eigenvectors`` pairs
    with ``eigenvalues[k]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _check_square(M, name="matrix"):
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidArgumentError(f"{name} must be square, got shape {M.shape}")
    if M.shape[0] == 0:
        raise InvalidArgumentError(f"{name} has dimension 0")


def hermitize(M):
    """Return the Hermitian part ``(M + M^*) / 2`` as a complex array.

    The result is exactly conjugate-symmetric: entries ``(j, k)`` and
    ``(k, j)`` are computed from the same two floating-point operands, and the
    diagonal comes out with an exactly zero imaginary part.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        _check_square(M)
    return 0.5 * (M + M.conj().T)


def eig_hermitian(M):
    """Eigendecomposition of a Hermitian matrix (LAPACK ``heevd`` via numpy).

    Parameters
    ----------
    M : ndarray, shape (d, d)
        Hermitian matrix. Only the lower triangle is read.

    Returns
    -------
    SpectralDecomposition
        Real eigenvalues in ascending order and a unitary eigenvector matrix.
    """
    M = np.asarray(M)
    _check_square(M)
    try:
        w, U = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"eigendecomposition failed: {exc}") from exc
    return SpectralDecomposition(w, U)


def from_spectrum(U, values):
    """Build ``U diag(values) U^*``."""
    U = np.asarray(U)
    values = np.asarray(values, dtype=float)
    _check_square(U, "U")
    if values.shape != (U.shape[0],):
        raise InvalidArgumentError(
            f"expected {U.shape[0]} eigenvalues, got shape {values.shape}"
        )
    if not np.all(np.isfinite(values)):
        raise InvalidArgumentError("eigenvalues must be finite")
    return hermitize((U * values) @ U.conj().T)


def trace_product(A, B):
    """Real part of ``tr(A B)``, computed in O(d^2) without forming ``A B``."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape or A.ndim != 2:
        raise InvalidArgumentError(f"shape mismatch: {A.shape} vs {B.shape}")
    val = np.einsum("ij,ji->", A, B)
    assert abs(val.imag) <= 1e-10 * max(1.0, abs(val.real)), "tr(AB) not real"
    return float(val.real)
