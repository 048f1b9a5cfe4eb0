"""Single-qubit noise channels, Hadamard conjugation, and pure-state
trajectory sampling used to build QNN training sets."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qcore import HADAMARD, I2, SIGMA_X, SIGMA_Y, SIGMA_Z, QuantumChannel, StateVector, _apply_matrix_to_vector, _check_targets


class NoiseKind(enum.Enum):
    AMPLITUDE_DAMPING = "amplitude-damping"
    DEPOLARIZING = "depolarizing"
    BIT_FLIP = "bit-flip"
    PHASE_FLIP = "phase-flip"


class NoiseStage(enum.Enum):
    # dist: noise only on the qubit sent during entanglement distribution.
    # both: additionally on the encoded qubits during the return transmission.
    DISTRIBUTION_ONLY = "dist"
    DISTRIBUTION_AND_RETURN = "both"


@dataclass(frozen=True)
class NoiseSpec:
    kind: NoiseKind
    p: float
    stage: NoiseStage = NoiseStage.DISTRIBUTION_ONLY

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"noise probability {self.p} outside [0, 1]")


def make_channel(kind: NoiseKind, p: float) -> QuantumChannel:
    """Kraus set of the named single-qubit channel with error weight p.

    Depolarizing splits p equally across the three Paulis, so p=0 is
    noiseless and p=3/4 maps every state to I/2.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"noise probability {p} outside [0, 1]")
    if kind is NoiseKind.BIT_FLIP:
        ops = [np.sqrt(1 - p) * I2, np.sqrt(p) * SIGMA_X]
    elif kind is NoiseKind.PHASE_FLIP:
        ops = [np.sqrt(1 - p) * I2, np.sqrt(p) * SIGMA_Z]
    elif kind is NoiseKind.DEPOLARIZING:
        ops = [np.sqrt(1 - p) * I2,
               np.sqrt(p / 3) * SIGMA_X,
               np.sqrt(p / 3) * SIGMA_Y,
               np.sqrt(p / 3) * SIGMA_Z]
    elif kind is NoiseKind.AMPLITUDE_DAMPING:
        ops = [np.array([[1, 0], [0, np.sqrt(1 - p)]], dtype=complex),
               np.array([[0, np.sqrt(p)], [0, 0]], dtype=complex)]
    else:
        raise ValueError(f"unknown noise kind {kind}")
    return QuantumChannel(tuple(op for op in ops if np.any(op)))


def conjugate_by_hadamard(ch: QuantumChannel) -> QuantumChannel:
    """Replace every Kraus operator K by H K H (phase-flip <-> bit-flip)."""
    if ch.qubit_count != 1:
        raise ValueError("Hadamard conjugation is defined for single-qubit channels")
    return QuantumChannel(tuple(HADAMARD @ k @ HADAMARD for k in ch.kraus_ops))


def sample_trajectory(psi: StateVector, ch: QuantumChannel, targets: Sequence[int], rng_seed: int) -> StateVector:
    """Sample one Kraus branch with its Born probability and renormalize.

    Deterministic for a fixed seed; averaging trajectory outer products over
    seeds converges to the channel output.
    """
    targets = _check_targets(targets, ch.qubit_count, psi.qubit_count)
    branches = [_apply_matrix_to_vector(k, psi.amplitudes, targets, psi.qubit_count)
                for k in ch.kraus_ops]
    weights = np.array([np.linalg.norm(b) ** 2 for b in branches])
    weights = weights / weights.sum()
    rng = np.random.default_rng(rng_seed)
    i = rng.choice(len(branches), p=weights)
    return StateVector(branches[i] / np.linalg.norm(branches[i]))
