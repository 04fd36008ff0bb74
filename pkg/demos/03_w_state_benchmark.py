"""Convergence on simulated Pauli data for a 3-qubit W state.

A small-scale version of the 6-qubit experiment: all three solvers run on
the same data, f* is estimated as the smallest loss any of them reaches, and
the traces are written to CSV. With matplotlib installed the script also
plots error and fidelity against epochs.

Run: python demos/03_w_state_benchmark.py [out.csv]
"""

import sys

from burgmd.bench import ExperimentConfig, run_experiment, write_results

out = sys.argv[1] if len(sys.argv) > 1 else "w3_benchmark.csv"
config = ExperimentConfig(
    qubits=3,
    shots_per_setting=50,  # n = 4**3 * 50 = 3200
    solvers=["smd-burg", "rpr", "batch-md"],
    epochs=20,
    seeds=[0],
)
result = run_experiment(config)
write_results(result.rows, out)
print(f"f_hat* = {result.fstar:.8f}; {len(result.rows)} rows written to {out}")

for solver in config.solvers:
    last = [r for r in result.rows if r.solver == solver][-1]
    print(f"{solver:>9}: error {last.approx_opt_error:.3e}  fidelity {last.fidelity:.4f}  "
          f"time {last.elapsed_seconds:.2f}s")

try:
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit(0)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
for solver in config.solvers:
    rows = [r for r in result.rows if r.solver == solver and r.epoch > 0]
    ax1.loglog([r.epoch for r in rows], [max(r.approx_opt_error, 1e-12) for r in rows], label=solver)
    ax2.semilogx([r.epoch for r in rows], [r.fidelity for r in rows], label=solver)
ax1.set_xlabel("epochs")
ax1.set_ylabel("f - f_hat*")
ax2.set_xlabel("epochs")
ax2.set_ylabel("fidelity with W")
ax1.legend()
fig.tight_layout()
fig.savefig(out.rsplit(".", 1)[0] + ".png", dpi=120)
