"""A one-qubit problem with a closed-form answer.

Three shots landed on |0> and one on |1>, so the maximum-likelihood state is
diag(3/4, 1/4). Stochastic mirror descent gets there at the guaranteed rate;
plain R-rho-R, started from I/2, oscillates forever between p = 1/2 and
p = 9/10.

Run: python demos/02_binomial_mle.py
"""

import numpy as np

from burgmd import (
    ShotDataset,
    SolverConfig,
    batch_mirror_descent,
    iter_rpr,
    nll,
    run,
    theoretical_error_bound,
)

data = ShotDataset.from_operators([np.diag([1.0, 0]), np.diag([0, 1.0])], [3, 1])
fstar = -(0.75 * np.log(0.75) + 0.25 * np.log(0.25))
print(f"f* = {fstar:.10f}")

for T in (10**2, 10**3, 10**4):
    errs = [nll(data, run(data, SolverConfig.for_horizon(2, T, seed=s))) - fstar for s in range(10)]
    print(f"SMD  T={T:>6}: mean error {np.mean(errs):.2e}   bound {theoretical_error_bound(2, T):.2e}")

its = batch_mirror_descent(data, eta=0.5, iterations=60)
print("batch MD after 60 iterations: p =", its[-1][0, 0].real)

ps = [rho[0, 0].real for rho in iter_rpr(data, 6)]
print("R-rho-R p sequence:", np.round(ps, 6))
