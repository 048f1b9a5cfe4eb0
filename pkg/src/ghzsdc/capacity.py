"""Entropic channel quantities: Holevo quantity, classical capacity, entropy
exchange, coherent information, quantum capacity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qcore import DensityOperator, QuantumChannel, von_neumann_entropy

_LN2 = np.log(2.0)


@dataclass(frozen=True)
class EnsembleSpec:
    """States rho_i emitted with probabilities pi_i."""

    priors: np.ndarray
    states: tuple

    def __post_init__(self):
        priors = np.asarray(self.priors, dtype=float)
        states = tuple(self.states)
        if priors.ndim != 1 or len(states) != priors.size:
            raise ValueError("one prior per state required")
        if np.any(priors < 0) or abs(priors.sum() - 1.0) > 1e-10:
            raise ValueError("priors must be nonnegative and sum to 1")
        dims = {s.matrix.shape[0] for s in states}
        if len(dims) != 1:
            raise ValueError("ensemble states must share one dimension")
        priors.flags.writeable = False
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "states", states)

    @classmethod
    def uniform(cls, states: Sequence[DensityOperator]) -> "EnsembleSpec":
        states = tuple(states)
        return cls(np.full(len(states), 1.0 / len(states)), states)


@dataclass(frozen=True)
class CapacityReport:
    holevo: float
    classical_capacity: float
    entropy_exchange: float
    coherent_information: float
    quantum_capacity: float


def average_state(ens: EnsembleSpec) -> DensityOperator:
    mix = sum(p * s.matrix for p, s in zip(ens.priors, ens.states))
    return DensityOperator(mix)


def _entropy_of_matrix(mat: np.ndarray) -> float:
    evals = np.linalg.eigvalsh(mat)
    if evals.min() < -1e-12:
        raise ValueError(f"matrix eigenvalue {evals.min()} below the clamp floor")
    evals = evals[evals > 1e-12]
    return float(-np.sum(evals * np.log2(evals)))


def holevo(ens: EnsembleSpec) -> float:
    """S(sum pi_i rho_i) - sum pi_i S(rho_i), in bits."""
    mixed = von_neumann_entropy(average_state(ens))
    conditional = sum(p * von_neumann_entropy(s) for p, s in zip(ens.priors, ens.states))
    return max(mixed - conditional, 0.0)


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    rho_idx = np.nonzero(u - css / (np.arange(v.size) + 1) > 0)[0][-1]
    theta = css[rho_idx] / (rho_idx + 1)
    return np.clip(v - theta, 0.0, None)


def classical_capacity(states: Sequence[DensityOperator], optimize: bool = False,
                       tol: float = 1e-7, max_iters: int = 2000) -> float:
    """Holevo quantity of the state family at uniform priors, optionally
    maximized over priors with projected gradient ascent. The optimized
    value never falls below the uniform-prior value."""
    states = tuple(states)
    uniform = holevo(EnsembleSpec.uniform(states))
    if not optimize or len(states) == 1:
        return uniform
    entropies = np.array([von_neumann_entropy(s) for s in states])
    mats = [s.matrix for s in states]
    pi = np.full(len(states), 1.0 / len(states))
    best = uniform

    def value_and_grad(pi):
        mix = sum(p * m for p, m in zip(pi, mats))
        evals, vecs = np.linalg.eigh(mix)
        safe = np.clip(evals, 1e-15, None)
        log_mix = (vecs * np.log2(safe)) @ vecs.conj().T
        val = float(-np.sum(safe[evals > 1e-12] * np.log2(safe[evals > 1e-12]))) \
            - float(pi @ entropies)
        grad = np.array([-np.real(np.trace(m @ log_mix)) - 1.0 / _LN2 for m in mats]) - entropies
        return val, grad

    step = 0.5
    val, grad = value_and_grad(pi)
    for _ in range(max_iters):
        new_pi = _project_simplex(pi + step * grad)
        new_val, new_grad = value_and_grad(new_pi)
        if new_val <= val:
            step /= 2
            if step < 1e-12:
                break
            continue
        if abs(new_val - val) < tol:
            pi, val, grad = new_pi, new_val, new_grad
            break
        pi, val, grad = new_pi, new_val, new_grad
    best = max(best, val)
    return best


def _pure_vectors(ens: EnsembleSpec) -> list:
    vectors = []
    for s in ens.states:
        purity = float(np.real(np.trace(s.matrix @ s.matrix)))
        if abs(purity - 1.0) > 1e-9:
            raise ValueError("entropy exchange requires pure ensemble members")
        evals, vecs = np.linalg.eigh(s.matrix)
        vectors.append(vecs[:, -1])
    return vectors


def entropy_exchange(input_ens: EnsembleSpec, ch: QuantumChannel) -> float:
    """Entropy generated in the environment, in bits.

    The ensemble average is diagonalized into eigenpairs (lambda_i, |psi_i>);
    the channel acts on one half of the purification
    sum_i sqrt(lambda_i) |psi_i> (x) |conj(psi_i)> and the entropy of the
    joint output is returned.
    """
    _pure_vectors(input_ens)  # contract: only pure-state ensembles accepted
    dim = input_ens.states[0].matrix.shape[0]
    if ch.kraus_ops[0].shape[0] != dim:
        raise ValueError("channel dimension does not match the ensemble states")
    mix = sum(p * s.matrix for p, s in zip(input_ens.priors, input_ens.states))
    evals, vecs = np.linalg.eigh(mix)
    joint = np.zeros((dim * dim, dim * dim), dtype=complex)
    for li, i in [(l, i) for i, l in enumerate(evals) if l > 1e-14]:
        for lj, j in [(l, j) for j, l in enumerate(evals) if l > 1e-14]:
            psi_i, psi_j = vecs[:, i], vecs[:, j]
            cross = np.outer(psi_i, psi_j.conj())
            sys_part = sum(k @ cross @ k.conj().T for k in ch.kraus_ops)
            ref_part = np.outer(psi_i.conj(), psi_j)
            joint += np.sqrt(li * lj) * np.kron(sys_part, ref_part)
    return _entropy_of_matrix(joint)


def _channel_output(ens: EnsembleSpec, ch: QuantumChannel) -> DensityOperator:
    mix = sum(p * s.matrix for p, s in zip(ens.priors, ens.states))
    out = sum(k @ mix @ k.conj().T for k in ch.kraus_ops)
    return DensityOperator(out)


def coherent_information(input_ens: EnsembleSpec, ch: QuantumChannel) -> float:
    """S(channel output mixture) - entropy exchange; may be negative."""
    return von_neumann_entropy(_channel_output(input_ens, ch)) - entropy_exchange(input_ens, ch)


def quantum_capacity(input_ens: EnsembleSpec, ch: QuantumChannel,
                     optimize: bool = False, tol: float = 1e-6,
                     max_iters: int = 200) -> float:
    """Coherent information of the ensemble floored at 0; optionally
    maximized over priors by projected finite-difference ascent."""
    base = coherent_information(input_ens, ch)
    if not optimize:
        return max(base, 0.0)
    pi = np.array(input_ens.priors, dtype=float)
    states = input_ens.states

    def evaluate(p):
        return coherent_information(EnsembleSpec(p, states), ch)

    val = base
    step = 0.2
    h = 1e-5
    for _ in range(max_iters):
        grad = np.zeros_like(pi)
        for i in range(pi.size):
            bumped = _project_simplex(pi + h * np.eye(pi.size)[i])
            grad[i] = (evaluate(bumped) - val) / h
        new_pi = _project_simplex(pi + step * grad)
        new_val = evaluate(new_pi)
        if new_val < val + tol:
            step /= 2
            if step < 1e-6:
                break
            continue
        pi, val = new_pi, new_val
    return max(val, base, 0.0)


def report(output_ens: EnsembleSpec, channel_input_ens: EnsembleSpec,
           ch: QuantumChannel) -> CapacityReport:
    """Bundle every quantity for one protocol configuration. The Holevo side
    uses the actual output ensemble; the coherent-information side uses the
    ideal pure inputs and the noise channel itself."""
    se = entropy_exchange(channel_input_ens, ch)
    icoh = von_neumann_entropy(_channel_output(channel_input_ens, ch)) - se
    return CapacityReport(
        holevo=holevo(output_ens),
        classical_capacity=classical_capacity(output_ens.states),
        entropy_exchange=se,
        coherent_information=icoh,
        quantum_capacity=max(icoh, 0.0),
    )
