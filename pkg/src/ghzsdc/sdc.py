"""n-GHZ basis construction, the bitwise superdense-coding encoder, GHZ-basis
decoding, and end-to-end protocol runs.

Qubit 0 of the shared state is Bob's (distributed through the noisy channel);
qubits 1..n-1 are Alice's and carry the encoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import qcore
from .noise import NoiseSpec, NoiseStage, make_channel
from .qcore import DensityOperator, I2, SIGMA_X, SIGMA_Y, SIGMA_Z, StateVector, Unitary


@dataclass(frozen=True)
class GhzBasis:
    """The 2^n orthonormal GHZ states on n qubits, in conventional order:
    states 2k and 2k+1 are (|b> +/- |~b>)/sqrt(2) for the k-th pattern b."""

    n: int
    states: tuple


@dataclass(frozen=True)
class Codeword:
    """n classical bits X = x_{n-1}...x_0 driving the encoder."""

    n: int
    value: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("codeword needs at least 2 bits")
        if not 0 <= self.value < 2 ** self.n:
            raise ValueError(f"codeword value {self.value} out of range for {self.n} bits")

    def x(self, i: int) -> int:
        """Bit x_i of X = x_{n-1}...x_0."""
        return (self.value >> i) & 1

    def y(self, k: int) -> int:
        """Bit y_k of floor(X/2) = y_{n-2}...y_0; equals x_{k+1}."""
        return ((self.value >> 1) >> k) & 1


@dataclass(frozen=True)
class CorrectionPipeline:
    """Optional corrections applied to the shared state after distribution,
    before encoding: purification rounds first, then a trained QNN model."""

    purify_rounds: int = 0
    model: Optional[object] = None  # qnn.QnnModel


@dataclass(frozen=True)
class SdcRunResult:
    codeword: Codeword
    received_state: DensityOperator
    decode_distribution: np.ndarray
    post_fidelity: float


@lru_cache(maxsize=None)
def ghz_basis(n: int) -> GhzBasis:
    """Orthonormal basis of 2^n GHZ states on n qubits."""
    if not 2 <= n <= 12:
        raise ValueError(f"GHZ basis supports 2..12 qubits, got {n}")
    dim = 2 ** n
    states = []
    for k in range(dim // 2):
        # k-th bit pattern with a leading 0, paired with its complement
        b = k
        b_comp = (dim - 1) ^ b
        for sign in (1.0, -1.0):
            amps = np.zeros(dim, dtype=complex)
            amps[b] = 1 / np.sqrt(2)
            amps[b_comp] = sign / np.sqrt(2)
            states.append(StateVector(amps))
    return GhzBasis(n, tuple(states))


def encode_usdc(code: Codeword) -> Unitary:
    """The (n-1)-qubit encoding operator for codeword X.

    The first factor (Alice's first qubit) is I, sigma_x, sigma_z or
    -i*sigma_y selected by (x_0, x_{n-1}); the remaining n-2 factors are
    I or sigma_x selected by the shifted bits y, left to right.
    """
    n = code.n
    if n < 3:
        raise ValueError("the bitwise encoder requires n >= 3")
    first_by_bits = {
        (0, 0): I2,
        (0, 1): SIGMA_X,
        (1, 0): SIGMA_Z,
        (1, 1): -1j * SIGMA_Y,
    }
    mat = first_by_bits[(code.x(0), code.x(n - 1))]
    for m in range(1, n - 1):
        factor = SIGMA_X if code.y(n - 2 - m) else I2
        mat = np.kron(mat, factor)
    return Unitary(mat)


def decode_ghz(rho: DensityOperator, n: int) -> np.ndarray:
    """Probability of each GHZ-basis outcome: entry i is <Psi_{i+1}|rho|Psi_{i+1}>."""
    if rho.qubit_count != n:
        raise ValueError(f"state has {rho.qubit_count} qubits, expected {n}")
    basis = ghz_basis(n)
    probs = np.array([
        float(np.real(s.amplitudes.conj() @ rho.matrix @ s.amplitudes))
        for s in basis.states
    ])
    return np.clip(probs, 0.0, None)


def shared_state(n: int) -> StateVector:
    """The pre-shared n-qubit GHZ state (|0...0> + |1...1>)/sqrt(2)."""
    return ghz_basis(n).states[0]


def ideal_received_state(n: int, code: Codeword) -> StateVector:
    """Noise-free image of the shared state under the encoder."""
    u = encode_usdc(code)
    return qcore.apply_unitary_to_state(shared_state(n), u, list(range(1, n)))


def run_protocol(
    n: int,
    code: Codeword,
    noise: NoiseSpec,
    corrector: Optional[CorrectionPipeline] = None,
) -> SdcRunResult:
    """One end-to-end superdense-coding run.

    Distribution noise hits qubit 0; the optional corrector acts on the shared
    state before encoding; encoding acts on qubits 1..n-1; with stage `both`
    the channel additionally hits each encoded qubit in transit.
    """
    if code.n != n:
        raise ValueError(f"codeword width {code.n} differs from n={n}")
    from . import purify as purify_mod  # local import to avoid a cycle
    from . import qnn as qnn_mod

    ch = make_channel(noise.kind, noise.p)
    rho = shared_state(n).density()
    rho = qcore.apply_channel(rho, ch, [0])

    if corrector is not None:
        if corrector.purify_rounds > 0:
            rho = purify_mod.purify_iterated(rho, n, corrector.purify_rounds).kept_state
        if corrector.model is not None:
            rho = qnn_mod.correct_state(corrector.model, rho)

    u = encode_usdc(code)
    rho = qcore.apply_unitary(rho, u, list(range(1, n)))
    if noise.stage is NoiseStage.DISTRIBUTION_AND_RETURN:
        for q in range(1, n):
            rho = qcore.apply_channel(rho, ch, [q])

    distribution = decode_ghz(rho, n)
    target = ideal_received_state(n, code)
    return SdcRunResult(code, rho, distribution, qcore.fidelity(target, rho))
