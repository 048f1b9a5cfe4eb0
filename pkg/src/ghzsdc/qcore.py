"""Dense multi-qubit linear algebra: states, density operators, gates,
channels, tensor composition, partial trace, measurement, fidelity, entropy.

Conventions
-----------
Qubit 0 is the most significant (leftmost) position of a basis label, so
|q0 q1 ... q(m-1)> maps to the integer index with q0 as the high bit.
All entropies are in bits (log base 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

ATOL = 1e-10

MAX_STATE_QUBITS = 12
MAX_DENSITY_QUBITS = 10

# Single-qubit gates and CNOT (control on the high qubit).
I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
CNOT = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]],
    dtype=complex,
)


def _qubit_count_of(dim: int, what: str) -> int:
    m = int(dim).bit_length() - 1
    if dim <= 0 or 2 ** m != dim:
        raise ValueError(f"{what} dimension {dim} is not a power of two")
    return m


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state on ``qubit_count`` qubits."""

    amplitudes: np.ndarray
    qubit_count: int = field(init=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        m = _qubit_count_of(amps.size, "state vector")
        if m > MAX_STATE_QUBITS:
            raise ValueError(f"state vectors support at most {MAX_STATE_QUBITS} qubits, got {m}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"state vector norm {norm} is not 1")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "qubit_count", m)

    def density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, unit-trace, positive-semidefinite matrix on ``qubit_count`` qubits."""

    matrix: np.ndarray
    qubit_count: int = field(init=False)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("density operator must be a square matrix")
        m = _qubit_count_of(mat.shape[0], "density operator")
        if m > MAX_DENSITY_QUBITS:
            raise ValueError(f"density operators support at most {MAX_DENSITY_QUBITS} qubits, got {m}")
        if np.max(np.abs(mat - mat.conj().T)) > ATOL:
            raise ValueError("density operator is not Hermitian")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > ATOL:
            raise ValueError(f"density operator trace {tr} is not 1")
        if np.linalg.eigvalsh(mat).min() < -ATOL:
            raise ValueError("density operator has a negative eigenvalue")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "qubit_count", m)


@dataclass(frozen=True)
class Unitary:
    """Unitary operator on ``qubit_count`` qubits."""

    matrix: np.ndarray
    qubit_count: int = field(init=False)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("unitary must be a square matrix")
        k = _qubit_count_of(mat.shape[0], "unitary")
        if np.max(np.abs(mat @ mat.conj().T - np.eye(mat.shape[0]))) > ATOL:
            raise ValueError("matrix is not unitary")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "qubit_count", k)


@dataclass(frozen=True)
class QuantumChannel:
    """Completely positive trace-preserving map given by Kraus operators."""

    kraus_ops: tuple
    qubit_count: int = field(init=False)

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus_ops)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        k = _qubit_count_of(dim, "channel")
        for op in ops:
            if op.shape != (dim, dim):
                raise ValueError("Kraus operators must share one square shape")
        total = sum(op.conj().T @ op for op in ops)
        if np.max(np.abs(total - np.eye(dim))) > ATOL:
            raise ValueError("Kraus operators do not satisfy completeness")
        for op in ops:
            op.flags.writeable = False
        object.__setattr__(self, "kraus_ops", ops)
        object.__setattr__(self, "qubit_count", k)


@dataclass(frozen=True)
class MeasurementOutcome:
    outcome_index: int
    probability: float
    post_state: DensityOperator | None


def basis_state(qubit_count: int, index: int) -> StateVector:
    """Computational basis state |index> on the given number of qubits."""
    amps = np.zeros(2 ** qubit_count, dtype=complex)
    amps[index] = 1.0
    return StateVector(amps)


def tensor_product(a, b):
    """Kronecker composition of two objects of the same kind.

    Qubit order is `a` (high/left qubits) followed by `b` (low/right qubits).
    """
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityOperator) and isinstance(b, DensityOperator):
        return DensityOperator(np.kron(a.matrix, b.matrix))
    if isinstance(a, Unitary) and isinstance(b, Unitary):
        return Unitary(np.kron(a.matrix, b.matrix))
    raise TypeError(f"cannot tensor {type(a).__name__} with {type(b).__name__}")


def _check_targets(targets: Sequence[int], k: int, m: int) -> list:
    targets = list(targets)
    if len(targets) != k:
        raise ValueError(f"operator acts on {k} qubits but {len(targets)} targets given")
    if len(set(targets)) != len(targets):
        raise ValueError("repeated target index")
    if any(t < 0 or t >= m for t in targets):
        raise ValueError(f"target out of range for {m} qubits")
    return targets


def _apply_matrix_to_vector(mat: np.ndarray, vec: np.ndarray, targets, m: int) -> np.ndarray:
    k = len(targets)
    t = vec.reshape((2,) * m)
    op = mat.reshape((2,) * (2 * k))
    t = np.tensordot(op, t, axes=(list(range(k, 2 * k)), list(targets)))
    t = np.moveaxis(t, list(range(k)), list(targets))
    return t.reshape(-1)


def _conjugate_matrix(mat: np.ndarray, rho: np.ndarray, targets, m: int) -> np.ndarray:
    # rho as a (2,)*2m tensor: row axes 0..m-1, column axes m..2m-1.
    k = len(targets)
    t = rho.reshape((2,) * (2 * m))
    op = mat.reshape((2,) * (2 * k))
    t = np.tensordot(op, t, axes=(list(range(k, 2 * k)), list(targets)))
    t = np.moveaxis(t, list(range(k)), list(targets))
    col = [m + q for q in targets]
    t = np.tensordot(op.conj(), t, axes=(list(range(k, 2 * k)), col))
    t = np.moveaxis(t, list(range(k)), col)
    return t.reshape(2 ** m, 2 ** m)


def embedded_matrix(mat: np.ndarray, targets: Sequence[int], m: int) -> np.ndarray:
    """Expand an operator on `targets` (ordered) to the full 2^m space."""
    targets = _check_targets(targets, _qubit_count_of(mat.shape[0], "operator"), m)
    dim = 2 ** m
    out = np.empty((dim, dim), dtype=complex)
    eye = np.eye(dim, dtype=complex)
    for j in range(dim):
        out[:, j] = _apply_matrix_to_vector(mat, eye[:, j], targets, m)
    return out


def apply_unitary(rho: DensityOperator, u: Unitary, targets: Sequence[int]) -> DensityOperator:
    """Conjugate rho by u embedded on the given (ordered) target qubits."""
    targets = _check_targets(targets, u.qubit_count, rho.qubit_count)
    return DensityOperator(_conjugate_matrix(u.matrix, rho.matrix, targets, rho.qubit_count))


def apply_unitary_to_state(psi: StateVector, u: Unitary, targets: Sequence[int]) -> StateVector:
    targets = _check_targets(targets, u.qubit_count, psi.qubit_count)
    return StateVector(_apply_matrix_to_vector(u.matrix, psi.amplitudes, targets, psi.qubit_count))


def apply_channel(rho: DensityOperator, ch: QuantumChannel, targets: Sequence[int]) -> DensityOperator:
    """Sum of Kraus conjugations of rho on the given target qubits."""
    targets = _check_targets(targets, ch.qubit_count, rho.qubit_count)
    m = rho.qubit_count
    out = np.zeros_like(rho.matrix)
    for op in ch.kraus_ops:
        out = out + _conjugate_matrix(op, rho.matrix, targets, m)
    return DensityOperator(out)


def partial_trace(rho: DensityOperator, keep: Sequence[int]) -> DensityOperator:
    """Trace out all qubits not in `keep`; kept qubits retain their order."""
    m = rho.qubit_count
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    if keep[0] < 0 or keep[-1] >= m:
        raise ValueError(f"keep index out of range for {m} qubits")
    t = rho.matrix.reshape((2,) * (2 * m))
    keep_set = set(keep)
    row = list(range(m))
    col = [q if q not in keep_set else m + q for q in range(m)]
    out_axes = keep + [m + q for q in keep]
    reduced = np.einsum(t, row + col, out_axes)
    d = 2 ** len(keep)
    return DensityOperator(reduced.reshape(d, d))


def measure_computational(rho: DensityOperator, targets: Sequence[int]) -> list:
    """Projective measurement of `targets` in the computational basis.

    Returns one outcome per bit string over `targets` (targets[0] is the high
    bit of the outcome index). The post state lives on the remaining qubits;
    when every qubit is measured it is the projected full state. Outcomes with
    probability below 1e-12 carry post_state=None.
    """
    m = rho.qubit_count
    targets = _check_targets(targets, len(targets), m)
    if not targets:
        raise ValueError("targets must be nonempty")
    tensor = rho.matrix.reshape((2,) * (2 * m))
    remaining = [q for q in range(m) if q not in targets]
    outcomes = []
    for idx in range(2 ** len(targets)):
        bits = [(idx >> (len(targets) - 1 - i)) & 1 for i in range(len(targets))]
        sl = [slice(None)] * (2 * m)
        for q, b in zip(targets, bits):
            sl[q] = b
            sl[m + q] = b
        block = tensor[tuple(sl)]
        if remaining:
            d = 2 ** len(remaining)
            block = block.reshape(d, d)
            prob = float(np.trace(block).real)
            post = DensityOperator(block / prob) if prob >= 1e-12 else None
        else:
            prob = float(block.real)
            post = basis_state(m, idx).density() if prob >= 1e-12 else None
        outcomes.append(MeasurementOutcome(idx, max(prob, 0.0), post))
    return outcomes


def fidelity(psi: StateVector, rho: DensityOperator) -> float:
    """sqrt(<psi|rho|psi>), clamped to [0, 1]."""
    if psi.qubit_count != rho.qubit_count:
        raise ValueError("state and operator dimensions differ")
    overlap = float(np.real(psi.amplitudes.conj() @ rho.matrix @ psi.amplitudes))
    if overlap < -1e-12 or overlap > 1.0 + 1e-12:
        raise ValueError(f"overlap {overlap} outside [0, 1]")
    return float(np.sqrt(min(max(overlap, 0.0), 1.0)))


def von_neumann_entropy(rho: DensityOperator) -> float:
    """-sum(lambda log2 lambda) over eigenvalues, in bits."""
    evals = np.linalg.eigvalsh(rho.matrix)
    evals = evals[evals > 1e-12]
    return float(-np.sum(evals * np.log2(evals)))
