"""Synthetic Pauli-measurement data.

Conventions
-----------
* Computational basis indices are little-endian: qubit ``k`` is bit ``k`` of
  the index.
* A Pauli string ``"P_0 P_1 ... P_{q-1}"`` is the Kronecker product of its
  letters in reading order, so the first letter acts on the most significant
  qubit (``q - 1``) and the last letter on qubit 0.
* Measuring Pauli ``P`` yields outcome ``+1`` or ``-1``; the corresponding
  measurement operators are the projectors ``(I +/- P) / 2``.

Random stream
-------------
Shots are drawn from ``numpy.random.Generator(PCG64(seed))``. One call to
``random((num_shots, 2))`` produces, for each shot in order, a uniform ``u``
selecting the Pauli (``1 + floor(u * (4**q - 1))``, i.e. uniform over the
non-identity strings) followed by a uniform ``v`` deciding the outcome
(``+1`` iff ``v < tr(A_+ rho)``). In exhaustive mode the Pauli of shot ``s``
is instead ``1 + s mod (4**q - 1)`` and ``u`` is drawn but unused, so the
outcome stream is the same in both modes.
"""

import json
from dataclasses import dataclass, field
from functools import reduce
from typing import List, Optional

import numpy as np

from .errors import (
    DatasetFormatError,
    InvalidArgumentError,
    ModelViolationError,
    UnsupportedVersionError,
)
from .hermitian import hermitize
from .model import ShotDataset

__all__ = [
    "FORMAT_VERSION",
    "PauliShots",
    "ShotRecord",
    "born_probability",
    "generate_w_dataset",
    "outcome_operators",
    "pauli_index",
    "pauli_matrix",
    "pauli_string",
    "read_dataset",
    "read_shots",
    "sample_shots",
    "w_state",
    "write_dataset",
]

FORMAT_VERSION = 1

LETTERS = "IXYZ"
_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_STATES = ("W", None)


def _check_pauli(p):
    if not isinstance(p, str) or not p or any(c not in LETTERS for c in p):
        raise InvalidArgumentError(f"invalid Pauli string {p!r}")


def pauli_string(index, q):
    """Pauli string with base-4 digits ``index`` (I=0, X=1, Y=2, Z=3), most
    significant digit first."""
    if not 0 <= index < 4**q:
        raise InvalidArgumentError(f"Pauli index {index} out of range for {q} qubits")
    letters = []
    for _ in range(q):
        index, r = divmod(index, 4)
        letters.append(LETTERS[r])
    return "".join(reversed(letters))


def pauli_index(p):
    _check_pauli(p)
    idx = 0
    for c in p:
        idx = 4 * idx + LETTERS.index(c)
    return idx


def pauli_matrix(p):
    _check_pauli(p)
    return reduce(np.kron, (_SINGLE[c] for c in p))


def outcome_operators(p):
    """Projectors ``((I + P)/2, (I - P)/2)`` onto the two outcomes of ``p``."""
    _check_pauli(p)
    if set(p) == {"I"}:
        raise InvalidArgumentError("the identity string has a deterministic outcome")
    P = pauli_matrix(p)
    eye = np.eye(P.shape[0], dtype=complex)
    return hermitize((eye + P) / 2), hermitize((eye - P) / 2)


def w_state(q):
    """Amplitudes of the ``q``-qubit W state: ``1/sqrt(q)`` on every basis
    state with exactly one qubit excited."""
    if q < 1:
        raise InvalidArgumentError(f"need at least one qubit, got {q}")
    psi = np.zeros(2**q, dtype=complex)
    psi[[1 << k for k in range(q)]] = 1 / np.sqrt(q)
    return psi


def born_probability(A, rho):
    p = np.einsum("ij,ji->", A, rho).real
    if not -1e-9 <= p <= 1 + 1e-9:
        raise ModelViolationError(f"tr(A rho) = {p!r} is not a probability")
    return float(min(max(p, 0.0), 1.0))


@dataclass(frozen=True)
class ShotRecord:
    pauli: str
    outcome: int
    count: int

    def __post_init__(self):
        _check_pauli(self.pauli)
        if self.outcome not in (1, -1):
            raise InvalidArgumentError(f"outcome must be +1 or -1, got {self.outcome!r}")
        if self.count < 1:
            raise InvalidArgumentError(f"count must be positive, got {self.count}")


@dataclass
class PauliShots:
    """Raw shot records plus the metadata needed to reproduce them.

    ``state`` names the true state (``"W"``) or is ``None`` when unknown.
    """

    qubits: int
    seed: int
    state: Optional[str]
    records: List[ShotRecord] = field(default_factory=list)

    @property
    def total_shots(self):
        return sum(r.count for r in self.records)

    def target(self):
        return w_state(self.qubits) if self.state == "W" else None

    def to_dataset(self):
        """Measurement operators in record order, with the true state attached
        as the fidelity target when known."""
        d = 2**self.qubits
        target = self.target()
        if not self.records:
            return ShotDataset(np.zeros((0, d, d), dtype=complex), np.zeros(0, dtype=np.int64), target)
        cache = {}
        ops = np.empty((len(self.records), d, d), dtype=complex)
        for k, r in enumerate(self.records):
            if r.pauli not in cache:
                cache[r.pauli] = outcome_operators(r.pauli)
            ops[k] = cache[r.pauli][0 if r.outcome == 1 else 1]
        counts = np.array([r.count for r in self.records], dtype=np.int64)
        return ShotDataset(ops, counts, target)


def sample_shots(rho_true, num_shots, seed, exhaustive=False, state=None):
    """Simulate ``num_shots`` Pauli measurements of ``rho_true``.

    Identical ``(pauli, outcome)`` pairs are merged; records are sorted by
    Pauli index and then outcome (``+1`` first).
    """
    rho_true = np.asarray(rho_true, dtype=complex)
    d = rho_true.shape[0]
    q = d.bit_length() - 1
    if d != 2**q or q < 1:
        raise InvalidArgumentError(f"dimension {d} is not a power of two >= 2")
    if num_shots < 1:
        raise InvalidArgumentError("num_shots must be >= 1")
    m = 4**q - 1
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random((num_shots, 2))
    if exhaustive:
        which = 1 + np.arange(num_shots, dtype=np.int64) % m
    else:
        which = 1 + np.minimum((u[:, 0] * m).astype(np.int64), m - 1)
    used = np.unique(which)
    p_plus = np.empty(4**q)
    for idx in used:
        A_plus, _ = outcome_operators(pauli_string(int(idx), q))
        p_plus[idx] = born_probability(A_plus, rho_true)
    minus = u[:, 1] >= p_plus[which]
    codes, counts = np.unique(2 * which + minus, return_counts=True)
    records = [
        ShotRecord(pauli_string(int(c) // 2, q), -1 if c % 2 else 1, int(n))
        for c, n in zip(codes, counts)
    ]
    return PauliShots(q, int(seed), state, records)


def generate_w_dataset(qubits, num_shots, seed, exhaustive=False):
    psi = w_state(qubits)
    return sample_shots(np.outer(psi, psi.conj()), num_shots, seed, exhaustive, state="W")


def write_dataset(shots: PauliShots, path):
    """Write shot records as version-1 JSON, one record per line."""
    head = json.dumps(
        {"version": FORMAT_VERSION, "q": shots.qubits, "seed": shots.seed, "state": shots.state}
    )
    lines = [head[:-1] + ', "shots": [']
    body = [
        json.dumps({"pauli": r.pauli, "outcome": r.outcome, "count": r.count})
        for r in shots.records
    ]
    lines.append(",\n".join(body))
    lines.append("]}\n")
    text = "\n".join(lines) if body else lines[0] + "]}\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _parse(obj):
    if not isinstance(obj, dict):
        raise DatasetFormatError("top level must be a JSON object")
    if "version" not in obj:
        raise DatasetFormatError("missing field 'version'")
    if obj["version"] != FORMAT_VERSION:
        raise UnsupportedVersionError(f"unsupported dataset version {obj['version']!r}")
    for key in ("q", "seed", "state", "shots"):
        if key not in obj:
            raise DatasetFormatError(f"missing field {key!r}")
    q, seed, state, shots = obj["q"], obj["seed"], obj["state"], obj["shots"]
    if not _is_int(q) or q < 1:
        raise DatasetFormatError(f"'q' must be a positive integer, got {q!r}")
    if not _is_int(seed) or not 0 <= seed < 2**64:
        raise DatasetFormatError(f"'seed' must be a 64-bit unsigned integer, got {seed!r}")
    if state not in _STATES:
        raise DatasetFormatError(f"unknown state descriptor {state!r}")
    if not isinstance(shots, list):
        raise DatasetFormatError("'shots' must be a list")
    records = []
    for k, s in enumerate(shots):
        if not isinstance(s, dict) or set(s) != {"pauli", "outcome", "count"}:
            raise DatasetFormatError(f"shots[{k}] must have exactly pauli, outcome, count")
        p, o, c = s["pauli"], s["outcome"], s["count"]
        if not isinstance(p, str) or len(p) != q or any(ch not in LETTERS for ch in p) or set(p) == {"I"}:
            raise DatasetFormatError(f"shots[{k}]: invalid Pauli string {p!r}")
        if not _is_int(o) or o not in (1, -1):
            raise DatasetFormatError(f"shots[{k}]: outcome must be 1 or -1, got {o!r}")
        if not _is_int(c) or c < 1:
            raise DatasetFormatError(f"shots[{k}]: count must be a positive integer, got {c!r}")
        records.append(ShotRecord(p, o, c))
    return PauliShots(q, seed, state, records)


def read_shots(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    return _parse(obj)


def read_dataset(path):
    return read_shots(path).to_dataset()
