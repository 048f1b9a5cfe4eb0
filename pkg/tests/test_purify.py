import numpy as np
import pytest

from ghzsdc import qcore
from ghzsdc.noise import NoiseKind, make_channel
from ghzsdc.purify import (
    PurificationUnderflow,
    accept_all_equal,
    purify_iterated,
    purify_round,
)
from ghzsdc.qcore import CNOT, DensityOperator
from ghzsdc.sdc import shared_state


def noisy_ghz(n, q, kind=NoiseKind.BIT_FLIP):
    rho = shared_state(n).density()
    return qcore.apply_channel(rho, make_channel(kind, q), [0])


def brute_force_round(pair_matrix, n):
    """Independent oracle: one explicit 4^(2n)-entry conjugation by the CNOT
    layer, then projector post-selection over all accepting B outcomes."""
    m = 2 * n
    dim = 2 ** m
    layer = np.eye(dim, dtype=complex)
    for i in range(n):
        layer = qcore.embedded_matrix(CNOT, [i, n + i], m) @ layer
    rho = layer @ pair_matrix @ layer.conj().T
    kept = np.zeros((2 ** n, 2 ** n), dtype=complex)
    success = 0.0
    for outcome in range(2 ** n):
        bits = [(outcome >> (n - 1 - i)) & 1 for i in range(n)]
        if len(set(bits)) != 1:
            continue
        ket = np.zeros(2 ** n, dtype=complex)
        ket[outcome] = 1.0
        proj = np.kron(np.eye(2 ** n, dtype=complex), np.outer(ket, ket.conj()))
        projected = proj @ rho @ proj
        success += float(np.trace(projected).real)
        # B register is pure |outcome>, so the A block is the outcome slice
        t = projected.reshape(2 ** n, 2 ** n, 2 ** n, 2 ** n)
        kept += t[:, outcome, :, outcome]
    return success, kept / success


class TestPurifyRound:
    def test_perfect_pair_is_fixed(self):
        n = 3
        pair = qcore.tensor_product(shared_state(n).density(), shared_state(n).density())
        result = purify_round(pair, n)
        assert abs(result.success_probability - 1) < 1e-9
        assert abs(result.fidelity_after - 1) < 1e-9
        assert qcore.fidelity(shared_state(n), result.kept_state) > 1 - 1e-9

    def test_bell_case_gain(self):
        copy = noisy_ghz(2, 0.25)
        result = purify_round(qcore.tensor_product(copy, copy), 2)
        assert result.fidelity_after > result.fidelity_before
        # 16x16 brute-force oracle
        success, kept = brute_force_round(qcore.tensor_product(copy, copy).matrix, 2)
        assert abs(result.success_probability - success) < 1e-9
        assert np.max(np.abs(result.kept_state.matrix - kept)) < 1e-9

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("q", [0.05, 0.15, 0.25, 0.35, 0.45])
    def test_gain_against_oracle(self, n, q):
        copy = noisy_ghz(n, q)
        pair = qcore.tensor_product(copy, copy)
        result = purify_round(pair, n)
        assert result.fidelity_after > result.fidelity_before
        success, kept = brute_force_round(pair.matrix, n)
        assert abs(result.success_probability - success) < 1e-9
        assert np.max(np.abs(result.kept_state.matrix - kept)) < 1e-9

    def test_asymmetric_flip_pattern_pair(self):
        # A copy clean, B copy mostly bit-flipped: accepting outcomes are
        # reweighted; verified against full enumeration over B outcomes
        n = 2
        clean = shared_state(n).density()
        mostly_flipped = noisy_ghz(n, 0.7)
        pair = qcore.tensor_product(clean, mostly_flipped)
        result = purify_round(pair, n)
        success, kept = brute_force_round(pair.matrix, n)
        assert abs(result.success_probability - success) < 1e-9
        assert np.max(np.abs(result.kept_state.matrix - kept)) < 1e-9

    def test_fully_orthogonal_pair_underflows(self):
        # clean control against a fully flipped target never passes the
        # all-equal check, which must surface as the distinct underflow signal
        pair = qcore.tensor_product(shared_state(2).density(), noisy_ghz(2, 1.0))
        with pytest.raises(PurificationUnderflow):
            purify_round(pair, 2)

    def test_success_and_rejection_sum_to_one(self):
        n = 2
        copy = noisy_ghz(n, 0.3)
        pair = qcore.tensor_product(copy, copy)
        accepted = purify_round(pair, n).success_probability
        rejected = purify_round(pair, n, accept=lambda bits: len(set(bits)) != 1).success_probability
        assert abs(accepted + rejected - 1) < 1e-9

    def test_odd_qubit_count_rejected(self):
        with pytest.raises(ValueError):
            purify_round(shared_state(3).density(), 3)


class TestPurifyIterated:
    def test_single_round_reduces_to_purify_round(self):
        n = 2
        copy = noisy_ghz(n, 0.2)
        iterated = purify_iterated(copy, n, 1)
        direct = purify_round(qcore.tensor_product(copy, copy), n)
        assert np.max(np.abs(iterated.kept_state.matrix - direct.kept_state.matrix)) < 1e-12
        assert abs(iterated.success_probability - direct.success_probability) < 1e-12

    def test_perfect_input_any_rounds(self):
        result = purify_iterated(shared_state(2).density(), 2, 3)
        assert abs(result.fidelity_after - 1) < 1e-9
        assert abs(result.success_probability - 1) < 1e-9

    def test_second_round_does_not_hurt(self):
        copy = noisy_ghz(3, 0.2)
        one = purify_iterated(copy, 3, 1)
        two = purify_iterated(copy, 3, 2)
        assert two.fidelity_after >= one.fidelity_after
        assert two.success_probability <= one.success_probability

    def test_rounds_must_be_positive(self):
        with pytest.raises(ValueError):
            purify_iterated(shared_state(2).density(), 2, 0)

    def test_all_equal_predicate(self):
        assert accept_all_equal([0, 0, 0])
        assert accept_all_equal([1, 1])
        assert not accept_all_equal([0, 1, 0])
