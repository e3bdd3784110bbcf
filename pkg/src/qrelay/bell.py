"""Bell-basis construction, Bell-pair projective measurement, and the Pauli
label algebra used for outcome-driven corrections."""

from __future__ import annotations

from collections.abc import Iterable
from enum import Enum

import numpy as np

from .statevec import StateVector, _check_qubit

NULL_PROB_EPS = 1e-14


class BellOutcome(Enum):
    """The four Bell-pair measurement outcomes, in a fixed total order."""

    PHI_PLUS = "phi+"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"
    PHI_MINUS = "phi-"

    @property
    def index(self) -> int:
        return _BELL_INDEX[self]


BELL_OUTCOMES = tuple(BellOutcome)
_BELL_INDEX = {o: i for i, o in enumerate(BELL_OUTCOMES)}

# Rows follow BELL_OUTCOMES; columns are the pair basis |00>,|01>,|10>,|11>.
_BELL_ROWS = (1.0 / np.sqrt(2.0)) * np.array(
    [
        [1.0, 0.0, 0.0, 1.0],
        [0.0, 1.0, 1.0, 0.0],
        [0.0, 1.0, -1.0, 0.0],
        [1.0, 0.0, 0.0, -1.0],
    ],
    dtype=complex,
)
_BELL_ROWS.setflags(write=False)


class PauliLabel(Enum):
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"


PAULI_MATRICES = {
    PauliLabel.I: np.array([[1.0, 0.0], [0.0, 1.0]], dtype=complex),
    PauliLabel.X: np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    PauliLabel.Y: np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    PauliLabel.Z: np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}
for _mat in PAULI_MATRICES.values():
    _mat.setflags(write=False)

# Phase-forgetting symplectic encoding: label ~ X^x Z^z up to a phase.
_TO_XZ = {
    PauliLabel.I: (0, 0),
    PauliLabel.X: (1, 0),
    PauliLabel.Y: (1, 1),
    PauliLabel.Z: (0, 1),
}
_FROM_XZ = {xz: label for label, xz in _TO_XZ.items()}

# Byproduct correction undoing each Bell outcome in the teleportation step.
CORRECTION_FOR_OUTCOME = {
    BellOutcome.PHI_PLUS: PauliLabel.I,
    BellOutcome.PSI_PLUS: PauliLabel.X,
    BellOutcome.PSI_MINUS: PauliLabel.Y,
    BellOutcome.PHI_MINUS: PauliLabel.Z,
}


def bell_vector(outcome: BellOutcome) -> StateVector:
    """The normalized 2-qubit vector for one Bell outcome."""
    return StateVector(2, _BELL_ROWS[outcome.index])


def as_rng(rng) -> np.random.Generator:
    """Accept a seed or a Generator; Generators pass through for sequential
    draws, anything else seeds a fresh one."""
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def _pair_rows(amps: np.ndarray, num_qubits: int, q1: int, q2: int) -> np.ndarray:
    """Unnormalized <Bell_k| components on qubits (q1, q2).

    Returns a (4, 2**(n-2)) array; row k is the branch amplitude vector over
    the surviving qubits, which keep their original relative order.
    """
    psi = amps.reshape([2] * num_qubits)
    psi = np.moveaxis(psi, (q1 - 1, q2 - 1), (0, 1))
    return _BELL_ROWS.conj() @ psi.reshape(4, -1)


def _check_pair(state: StateVector, q1: int, q2: int) -> None:
    if q1 == q2:
        raise ValueError("measurement qubits must differ")
    _check_qubit(q1, state.num_qubits)
    _check_qubit(q2, state.num_qubits)
    if state.num_qubits < 2:
        raise ValueError("need at least two qubits to measure a pair")


def project_bell(
    state: StateVector, q1: int, q2: int, outcome: BellOutcome
) -> tuple[StateVector | None, float]:
    """Project qubits (q1, q2) onto one Bell outcome.

    Returns (post state, probability); the post state drops the measured
    pair and is None when the branch probability is below ``NULL_PROB_EPS``.
    """
    _check_pair(state, q1, q2)
    row = _pair_rows(state.amps, state.num_qubits, q1, q2)[outcome.index]
    prob = float(np.vdot(row, row).real)
    if prob < NULL_PROB_EPS:
        return None, prob
    return StateVector(state.num_qubits - 2, row / np.sqrt(prob)), prob


def measure_bell_sampled(
    state: StateVector, q1: int, q2: int, rng
) -> tuple[BellOutcome, StateVector]:
    """Sample a Bell measurement on (q1, q2) under the Born rule.

    Deterministic for a fixed seed; zero-probability branches are never
    drawn. ``rng`` may be a seed or a Generator shared across draws.
    """
    _check_pair(state, q1, q2)
    gen = as_rng(rng)
    rows = _pair_rows(state.amps, state.num_qubits, q1, q2)
    probs = np.einsum("kr,kr->k", rows.conj(), rows).real
    probs[probs < NULL_PROB_EPS] = 0.0
    k = int(gen.choice(4, p=probs / probs.sum()))
    row = rows[k]
    post = StateVector(state.num_qubits - 2, row / np.linalg.norm(row))
    return BELL_OUTCOMES[k], post


def pauli_product(ops: Iterable[PauliLabel]) -> PauliLabel:
    """Label of the ordered matrix product, global phase discarded.

    An empty product is the identity.
    """
    x = z = 0
    for op in ops:
        ox, oz = _TO_XZ[op]
        x ^= ox
        z ^= oz
    return _FROM_XZ[(x, z)]
