"""Stochastic mirror descent with the Burg entropy for maximum-likelihood
quantum state tomography."""

__version__ = "0.1.0"

from .baselines import batch_mirror_descent, iter_batch_mirror_descent, iter_rpr, rpr_step
from .errors import (
    BurgMDError,
    ConvergenceError,
    DatasetFormatError,
    DecompositionError,
    InvalidArgumentError,
    ModelViolationError,
    NumericDegeneracyError,
    SingularLikelihoodError,
    UnsupportedVersionError,
)
from .hermitian import SpectralDecomposition, eig_hermitian, from_spectrum, hermitize, trace_product
from .model import (
    ShotDataset,
    fidelity_pure,
    maximally_mixed,
    nll,
    nll_gradient,
    sample_loss,
    sample_loss_gradient,
)
from .smd import (
    SolverConfig,
    SolverState,
    bregman_objective,
    iterate,
    log_barrier_simplex_root,
    mirror_step,
    run,
    step_size_for_horizon,
    theoretical_error_bound,
)
from .synthetic import (
    PauliShots,
    ShotRecord,
    born_probability,
    generate_w_dataset,
    outcome_operators,
    pauli_matrix,
    read_dataset,
    read_shots,
    sample_shots,
    w_state,
    write_dataset,
)
