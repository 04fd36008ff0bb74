"""Convergence benchmarks on synthetic or stored Pauli data.

Each (solver, seed) run is traced at a sparse schedule: iterate indices
crossing powers of 1.25, every whole epoch, and the final iterate. At each
logged point the full-data loss and the fidelity with the true state are
evaluated with the wall clock paused, so ``elapsed_seconds`` measures only
solver work.

An epoch is one pass over the ``n`` shots: ``n`` stochastic iterations or one
full-batch iteration. The stochastic averaged iterate ``rho_bar_t`` has
consumed ``t - 1`` shots and is reported at epoch ``(t - 1) / n``; batch
iterate ``rho_k`` is reported at epoch ``k - 1``.
"""

import csv
import json
import logging
import math
import time
from dataclasses import dataclass, field, fields
from typing import List, Optional, Sequence


from .baselines import DEFAULT_BATCH_ETA, iter_batch_mirror_descent, iter_rpr
from .errors import BurgMDError, InvalidArgumentError
from .model import ShotDataset, fidelity_pure, nll
from .smd import DEFAULT_NEWTON_EPS, SolverConfig, iterate, step_size_for_horizon
from .synthetic import generate_w_dataset, read_dataset

__all__ = [
    "CSV_HEADER",
    "SOLVERS",
    "ExperimentConfig",
    "ExperimentResult",
    "MetricsRow",
    "estimate_fstar",
    "log_schedule",
    "run_experiment",
    "smd_horizon",
    "trace_solver",
    "write_results",
]

log = logging.getLogger(__name__)

SOLVERS = ("smd-burg", "rpr", "batch-md")
CSV_HEADER = ["solver", "seed", "epoch", "f_value", "approx_opt_error", "fidelity", "elapsed_seconds"]
GEOMETRIC_RATIO = 1.25


@dataclass
class MetricsRow:
    solver: str
    seed: int
    epoch: float
    f_value: float
    approx_opt_error: float
    fidelity: Optional[float]
    elapsed_seconds: float


def _check_solver(name):
    if name not in SOLVERS:
        raise InvalidArgumentError(f"unknown solver {name!r}; choose from {', '.join(SOLVERS)}")


def log_schedule(last, per_epoch, ratio=GEOMETRIC_RATIO):
    """Sorted iterate indices in ``[1, last]`` to be logged.

    Includes ``ceil(ratio**j)`` for all ``j``, every index ``1 + e * per_epoch``
    (whole epochs), and ``last``.
    """
    idx = {last}
    x = 1.0
    while x <= last:
        idx.add(math.ceil(x))
        x *= ratio
    idx.update(range(1, last + 1, per_epoch))
    return sorted(i for i in idx if 1 <= i <= last)


def smd_horizon(n, epochs):
    """Iterations needed so the last averaged iterate has consumed ``epochs * n`` shots."""
    return epochs * n + 1


def _iterates(data, solver, epochs, seed, eta, newton_eps, batch_eta):
    """Yield ``(index, shots_consumed, rho)`` for the iterates that the solver reports."""
    n = data.total_shots
    if solver == "smd-burg":
        T = smd_horizon(n, epochs)
        if eta is None:
            eta = step_size_for_horizon(data.dim, T)
        for t, rho_bar, state in iterate(data, SolverConfig(eta, T, newton_eps, seed)):
            yield t, state.shots_used, rho_bar
    elif solver == "rpr":
        for k, rho in enumerate(iter_rpr(data, epochs), start=1):
            yield k, (k - 1) * n, rho
    else:
        it = iter_batch_mirror_descent(data, batch_eta, newton_eps, epochs)
        for k, rho in enumerate(it, start=1):
            yield k, (k - 1) * n, rho


def trace_solver(
    data: ShotDataset,
    solver: str,
    epochs: int,
    seed: int = 0,
    eta: Optional[float] = None,
    newton_eps: float = DEFAULT_NEWTON_EPS,
    batch_eta: float = DEFAULT_BATCH_ETA,
    timing: bool = True,
    errors: Optional[list] = None,
) -> List[MetricsRow]:
    """Run one solver for ``epochs`` epochs and return its logged metrics.

    ``approx_opt_error`` is left as ``nan``; see :func:`finalize_errors`.
    With ``timing=False`` all ``elapsed_seconds`` are 0, which makes the
    output reproducible byte-for-byte. If ``errors`` is a list, a solver
    failure is appended to it as ``(solver, seed, message)`` and the rows
    logged so far are returned; otherwise the exception propagates.
    """
    _check_solver(solver)
    if epochs < 1:
        raise InvalidArgumentError("epochs must be >= 1")
    data.require_nonempty()
    n = data.total_shots
    per_epoch = n if solver == "smd-burg" else 1
    last = smd_horizon(n, epochs) if solver == "smd-burg" else epochs + 1
    schedule = set(log_schedule(last, per_epoch))
    rows = []
    elapsed = 0.0
    gen = _iterates(data, solver, epochs, seed, eta, newton_eps, batch_eta)
    try:
        start = time.perf_counter()
        for idx, used, rho in gen:
            elapsed += time.perf_counter() - start
            if idx in schedule:
                fid = None if data.target is None else fidelity_pure(data.target, rho)
                rows.append(
                    MetricsRow(solver, seed, used / n, nll(data, rho), math.nan, fid,
                               elapsed if timing else 0.0)
                )
            start = time.perf_counter()
    except BurgMDError as exc:
        if errors is None:
            raise
        log.warning("%s (seed %d) failed: %s", solver, seed, exc)
        errors.append((solver, seed, str(exc)))
    return rows


def finalize_errors(rows, fstar):
    """Fill ``approx_opt_error`` against ``min(fstar, observed values)``.

    Returns the lower envelope actually used.
    """
    observed = [r.f_value for r in rows]
    if fstar is not None:
        observed.append(fstar)
    floor = min(observed) if observed else math.nan
    for r in rows:
        r.approx_opt_error = r.f_value - floor
    return floor


def estimate_fstar(data: ShotDataset, budget_epochs: int, seed=0, newton_eps=DEFAULT_NEWTON_EPS,
                   batch_eta=DEFAULT_BATCH_ETA):
    """Smallest loss seen by any solver within ``budget_epochs`` epochs.

    Batch solvers are evaluated at every iterate, the stochastic solver at
    its logging schedule (a full loss evaluation at every stochastic
    iterate would cost more than the solver itself).
    """
    if budget_epochs < 1:
        raise InvalidArgumentError("budget_epochs must be >= 1")
    best = math.inf
    for solver in SOLVERS:
        rows = trace_solver(data, solver, budget_epochs, seed, newton_eps=newton_eps,
                            batch_eta=batch_eta, timing=False, errors=[])
        best = min([best] + [r.f_value for r in rows])
    return best


@dataclass
class ExperimentConfig:
    """Benchmark description; the JSON config file mirrors these fields.

    The dataset is either loaded from ``data`` or generated from the W state
    on ``qubits`` qubits with ``shots`` total shots (or
    ``shots_per_setting * 4**qubits``) using ``data_seed``. ``seeds`` are
    solver seeds. ``fstar_epochs`` defaults to ``epochs``.
    """

    qubits: int = 3
    shots: Optional[int] = None
    shots_per_setting: Optional[int] = None
    solvers: Sequence[str] = ("smd-burg",)
    epochs: int = 10
    seeds: Sequence[int] = (0,)
    eta: Optional[float] = None
    newton_eps: float = DEFAULT_NEWTON_EPS
    batch_eta: float = DEFAULT_BATCH_ETA
    fstar_epochs: Optional[int] = None
    data: Optional[str] = None
    data_seed: int = 0
    exhaustive: bool = False
    output: Optional[str] = None

    def __post_init__(self):
        self.solvers = list(self.solvers)
        self.seeds = list(self.seeds)
        if self.epochs < 1:
            raise InvalidArgumentError("epochs must be >= 1")
        if not self.seeds:
            raise InvalidArgumentError("seeds must be non-empty")
        if not self.solvers:
            raise InvalidArgumentError("solvers must be non-empty")
        for s in self.solvers:
            _check_solver(s)
        if self.data is None:
            if self.qubits < 1:
                raise InvalidArgumentError("qubits must be >= 1")
            if (self.shots is None) == (self.shots_per_setting is None):
                raise InvalidArgumentError("give exactly one of shots, shots_per_setting")
        if self.eta is not None and not self.eta > 0:
            raise InvalidArgumentError("eta must be positive")

    @property
    def total_shots(self):
        return self.shots if self.shots is not None else self.shots_per_setting * 4**self.qubits

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise InvalidArgumentError(f"unknown config fields: {', '.join(sorted(unknown))}")
        return cls(**d)

    @classmethod
    def from_json(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def load_data(self):
        if self.data is not None:
            return read_dataset(self.data)
        return generate_w_dataset(self.qubits, self.total_shots, self.data_seed, self.exhaustive).to_dataset()


@dataclass
class ExperimentResult:
    rows: List[MetricsRow]
    fstar: float
    failures: list = field(default_factory=list)


def run_experiment(config: ExperimentConfig, data: Optional[ShotDataset] = None, timing=True):
    """Run every (solver, seed) pair on one dataset.

    ``fstar`` is the lower envelope of the f-hat-star estimate and every
    logged loss, so ``approx_opt_error`` is never negative.
    """
    if data is None:
        data = config.load_data()
    fstar_epochs = config.fstar_epochs or config.epochs
    fstar = estimate_fstar(data, fstar_epochs, config.seeds[0], config.newton_eps, config.batch_eta)
    rows, failures = [], []
    for solver in config.solvers:
        for seed in config.seeds:
            rows += trace_solver(data, solver, config.epochs, seed, config.eta, config.newton_eps,
                                 config.batch_eta, timing=timing, errors=failures)
    fstar = finalize_errors(rows, fstar)
    return ExperimentResult(rows, fstar, failures)


def _fmt(x):
    if x is None:
        return ""
    return format(x, ".12g")


def write_results(rows, path):
    """Write metrics rows as CSV (12 significant digits, empty fidelity when unknown)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([r.solver, r.seed, _fmt(r.epoch), _fmt(r.f_value), _fmt(r.approx_opt_error),
                        _fmt(r.fidelity), _fmt(r.elapsed_seconds)])
