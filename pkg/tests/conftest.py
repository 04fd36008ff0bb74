import numpy as np
import pytest


def random_hermitian(rng, d, scale=1.0):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * (G + G.conj().T) / 2


def random_density(rng, d, rank=None, floor=0.0):
    """Ginibre-distributed density matrix, optionally mixed with I/d."""
    rank = d if rank is None else rank
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = G @ G.conj().T
    rho = rho / np.trace(rho).real
    if floor:
        rho = (1 - floor) * rho + floor * np.eye(d) / d
    return (rho + rho.conj().T) / 2


def random_projector(rng, d, rank):
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    Q, _ = np.linalg.qr(G)
    P = Q @ Q.conj().T
    return (P + P.conj().T) / 2


def traceless_hermitian_basis(d):
    """Orthonormal basis of the traceless Hermitian d x d matrices."""
    basis = []
    for j in range(d):
        for k in range(j + 1, d):
            E = np.zeros((d, d), complex)
            E[j, k] = E[k, j] = 1 / np.sqrt(2)
            basis.append(E)
            F = np.zeros((d, d), complex)
            F[j, k], F[k, j] = -1j / np.sqrt(2), 1j / np.sqrt(2)
            basis.append(F)
    for m in range(1, d):
        D = np.zeros((d, d), complex)
        D[np.arange(m), np.arange(m)] = 1
        D[m, m] = -m
        basis.append(D / np.sqrt(m * (m + 1)))
    return basis


@pytest.fixture
def rng():
    return np.random.default_rng(20221016)


@pytest.fixture
def binomial_data():
    from burgmd import ShotDataset

    return ShotDataset.from_operators(
        [np.diag([1, 0]).astype(complex), np.diag([0, 1]).astype(complex)], [3, 1]
    )


BINOMIAL_FSTAR = -(0.75 * np.log(0.75) + 0.25 * np.log(0.25))


ACCEPTANCE_RESULTS = []


def report(name, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'}  {name}: {detail}"
    ACCEPTANCE_RESULTS.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
