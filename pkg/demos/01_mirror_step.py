"""The exact Burg-entropy mirror step, one piece at a time.

Run: python demos/01_mirror_step.py
"""

import numpy as np

from burgmd import (
    bregman_objective,
    eig_hermitian,
    log_barrier_simplex_root,
    maximally_mixed,
    mirror_step,
    sample_loss_gradient,
)

rng = np.random.default_rng(0)
d = 4

# A rank-2 projector plays the role of one observed measurement outcome.
G = rng.standard_normal((d, 2)) + 1j * rng.standard_normal((d, 2))
Q, _ = np.linalg.qr(G)
A = Q @ Q.conj().T

rho = maximally_mixed(d)
rho_inv = np.linalg.inv(rho)
g = sample_loss_gradient(A, rho)
eta = 0.3

# Step 1: diagonalize eta * g + rho^{-1}.
lam, U = eig_hermitian(eta * g + rho_inv)
print("eigenvalues of eta*g + rho^-1:", np.round(lam, 4))

# Step 2: find theta with sum 1/(theta + lam) = 1 by scalar Newton.
theta, its = log_barrier_simplex_root(lam)
weights = 1 / (theta + lam)
print(f"theta = {theta:.12f} after {its} Newton steps; weights sum to {weights.sum():.15f}")

# Step 3: rebuild. mirror_step does all three and also returns the inverse.
rho_next, rho_next_inv, info = mirror_step(g, rho, rho_inv, eta)
np.testing.assert_allclose(rho_next, (U * weights) @ U.conj().T, atol=1e-14)

kkt = info.theta * np.eye(d) + eta * g + rho_inv
print("optimality residual:", np.linalg.norm(rho_next_inv - kkt) / np.linalg.norm(rho_next_inv))
print("trace:", np.trace(rho_next).real, " min eigenvalue:", np.linalg.eigvalsh(rho_next)[0])

# The step is the exact minimizer: random density matrices never do better.
X = rng.standard_normal((20000, d, d)) + 1j * rng.standard_normal((20000, d, d))
cand = X @ X.conj().transpose(0, 2, 1)
cand /= np.trace(cand, axis1=1, axis2=2).real[:, None, None]
print("objective at step:   ", float(bregman_objective(rho_next, g, rho, eta)))
print("best of 20000 random:", float(bregman_objective(cand, g, rho, eta).min()))
