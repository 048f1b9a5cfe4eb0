"""CNOT-and-compare entanglement purification of pairs of noisy n-qubit GHZ
states, single-round and iterated."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import qcore
from .qcore import CNOT, DensityOperator, Unitary
from .sdc import shared_state


class PurificationUnderflow(RuntimeError):
    """Compound success probability fell below the representable floor."""


def accept_all_equal(outcome_bits: Sequence[int]) -> bool:
    """Default acceptance rule: all target-register outcomes identical."""
    return len(set(outcome_bits)) == 1


@dataclass(frozen=True)
class PurificationResult:
    kept_state: DensityOperator
    success_probability: float
    fidelity_before: float
    fidelity_after: float
    rounds: int


_CNOT_GATE = Unitary(CNOT)


def purify_round(
    pair_state: DensityOperator,
    n: int,
    accept: Callable[[Sequence[int]], bool] = accept_all_equal,
) -> PurificationResult:
    """One purification round on a 2n-qubit pair state.

    Qubits 0..n-1 are the control copy (kept on success), qubits n..2n-1 the
    target copy. CNOTs run from control qubit i to target qubit i; the target
    register is measured and the round succeeds when `accept` holds on the
    outcome bits (default: all equal).
    """
    if pair_state.qubit_count != 2 * n:
        raise ValueError(f"pair state has {pair_state.qubit_count} qubits, expected {2 * n}")
    ideal = shared_state(n)
    fidelity_before = qcore.fidelity(ideal, qcore.partial_trace(pair_state, range(n)))

    rho = pair_state
    for i in range(n):
        rho = qcore.apply_unitary(rho, _CNOT_GATE, [i, n + i])

    outcomes = qcore.measure_computational(rho, list(range(n, 2 * n)))
    success = 0.0
    kept = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for out in outcomes:
        bits = [(out.outcome_index >> (n - 1 - i)) & 1 for i in range(n)]
        if accept(bits) and out.post_state is not None:
            success += out.probability
            kept = kept + out.probability * out.post_state.matrix
    if success < 1e-12:
        raise PurificationUnderflow("acceptance probability below 1e-12")
    kept_state = DensityOperator(kept / success)
    return PurificationResult(
        kept_state=kept_state,
        success_probability=min(success, 1.0),
        fidelity_before=fidelity_before,
        fidelity_after=qcore.fidelity(ideal, kept_state),
        rounds=1,
    )


def purify_iterated(
    source_state: DensityOperator,
    n: int,
    rounds: int,
    accept: Callable[[Sequence[int]], bool] = accept_all_equal,
) -> PurificationResult:
    """Iterate purification, each round consuming two i.i.d. copies of the
    previous round's output; reports the compound acceptance probability."""
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    ideal = shared_state(n)
    fidelity_before = qcore.fidelity(ideal, source_state)
    state = source_state
    compound = 1.0
    for _ in range(rounds):
        result = purify_round(qcore.tensor_product(state, state), n, accept)
        state = result.kept_state
        compound *= result.success_probability
        if compound < 1e-12:
            raise PurificationUnderflow("compound success probability below 1e-12")
    return PurificationResult(
        kept_state=state,
        success_probability=compound,
        fidelity_before=fidelity_before,
        fidelity_after=qcore.fidelity(ideal, state),
        rounds=rounds,
    )
