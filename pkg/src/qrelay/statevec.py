"""Dense pure-state and density-matrix numerics for small qubit registers.

Conventions shared by the whole package: qubit 1 is the leftmost bit of a
basis label and the most significant bit of an amplitude index, and public
qubit arguments are 1-based. Constructed values are immutable; their arrays
are marked read-only.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

DEFAULT_QUBIT_CAP = 20
NORM_ATOL = 1e-10
HERMITIAN_ATOL = 1e-10
EIGVAL_FLOOR = -1e-10


class CapacityError(ValueError):
    """An operation would exceed the configured qubit budget."""


def _frozen_array(values, shape: tuple[int, ...]) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.shape != shape:
        raise ValueError(f"expected array of shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state of ``num_qubits`` qubits as ``2**num_qubits`` amplitudes.

    ``num_qubits == 0`` is allowed: it is the scalar left over after
    measuring away an entire register, and its single amplitude carries the
    branch phase.
    """

    num_qubits: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        if self.num_qubits < 0:
            raise ValueError("num_qubits must be non-negative")
        amps = _frozen_array(self.amps, (1 << self.num_qubits,))
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > NORM_ATOL:
            raise ValueError(f"state not normalized: sum |amp|^2 = {norm_sq}")
        object.__setattr__(self, "amps", amps)


def make_basis_state(bits: str | Sequence[int]) -> StateVector:
    """Computational basis state for a bit pattern ("0110" or [0,1,1,0])."""
    bit_list = [int(b) for b in bits]
    if not bit_list:
        raise ValueError("bits must be nonempty")
    if any(b not in (0, 1) for b in bit_list):
        raise ValueError(f"bits must be 0 or 1, got {bits!r}")
    index = 0
    for b in bit_list:
        index = (index << 1) | b
    amps = np.zeros(1 << len(bit_list), dtype=complex)
    amps[index] = 1.0
    return StateVector(len(bit_list), amps)


def tensor(a: StateVector, b: StateVector, cap: int = DEFAULT_QUBIT_CAP) -> StateVector:
    """Kronecker product; ``a``'s qubits come first (most significant)."""
    total = a.num_qubits + b.num_qubits
    if total > cap:
        raise CapacityError(f"tensor product would need {total} qubits, cap is {cap}")
    return StateVector(total, np.kron(a.amps, b.amps))


def _check_qubit(qubit: int, num_qubits: int) -> None:
    if not 1 <= qubit <= num_qubits:
        raise ValueError(f"qubit {qubit} out of range 1..{num_qubits}")


def _apply_1q(amps: np.ndarray, num_qubits: int, qubit: int, mat: np.ndarray) -> np.ndarray:
    psi = amps.reshape([2] * num_qubits)
    psi = np.moveaxis(psi, qubit - 1, 0)
    psi = np.tensordot(mat, psi, axes=1)
    return np.moveaxis(psi, 0, qubit - 1).reshape(-1)


def apply_single_qubit(state: StateVector, qubit: int, op) -> StateVector:
    """Apply a 2x2 operator to one qubit (1-based, qubit 1 leftmost)."""
    _check_qubit(qubit, state.num_qubits)
    mat = np.asarray(op, dtype=complex)
    if mat.shape != (2, 2):
        raise ValueError(f"op must be 2x2, got shape {mat.shape}")
    return StateVector(state.num_qubits, _apply_1q(state.amps, state.num_qubits, qubit, mat))


def fidelity_pure(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2 — insensitive to global phase on either side."""
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"qubit counts differ: {a.num_qubits} vs {b.num_qubits}")
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Mixed state over ``num_qubits`` qubits; validated on construction
    (Hermitian, unit trace, eigenvalues above round-off of zero)."""

    num_qubits: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be >= 1")
        dim = 1 << self.num_qubits
        entries = _frozen_array(self.entries, (dim, dim))
        if not np.allclose(entries, entries.conj().T, rtol=0.0, atol=HERMITIAN_ATOL):
            raise ValueError("density matrix is not Hermitian")
        trace = complex(np.trace(entries))
        if abs(trace - 1.0) > NORM_ATOL:
            raise ValueError(f"density matrix trace is {trace}, expected 1")
        if float(np.linalg.eigvalsh(entries).min()) < EIGVAL_FLOOR:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_pure(cls, state: StateVector) -> DensityMatrix:
        return cls(state.num_qubits, np.outer(state.amps, state.amps.conj()))

    @classmethod
    def from_weighted_states(cls, pairs: Iterable[tuple[float, StateVector]]) -> DensityMatrix:
        """Weighted projector sum over (weight, pure state) pairs."""
        entries = None
        num_qubits = None
        for weight, state in pairs:
            term = weight * np.outer(state.amps, state.amps.conj())
            if entries is None:
                entries, num_qubits = term, state.num_qubits
            else:
                if state.num_qubits != num_qubits:
                    raise ValueError("mixture states must share a qubit count")
                entries = entries + term
        if entries is None:
            raise ValueError("mixture must be nonempty")
        return cls(num_qubits, entries)

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)


def reduced_density(state: StateVector, keep: Iterable[int]) -> DensityMatrix:
    """Partial trace keeping the given qubits (ascending order)."""
    keep_list = sorted(set(keep))
    if not keep_list:
        raise ValueError("keep set must be nonempty")
    for q in keep_list:
        _check_qubit(q, state.num_qubits)
    n = state.num_qubits
    keep_axes = [q - 1 for q in keep_list]
    drop_axes = [ax for ax in range(n) if ax not in keep_axes]
    psi = state.amps.reshape([2] * n).transpose(keep_axes + drop_axes)
    mat = psi.reshape(1 << len(keep_axes), -1)
    return DensityMatrix(len(keep_axes), mat @ mat.conj().T)


def trace_distance(r: DensityMatrix, s: DensityMatrix) -> float:
    """Half the trace norm of r - s."""
    if r.num_qubits != s.num_qubits:
        raise ValueError(f"qubit counts differ: {r.num_qubits} vs {s.num_qubits}")
    eigs = np.linalg.eigvalsh(r.entries - s.entries)
    return float(0.5 * np.abs(eigs).sum())
