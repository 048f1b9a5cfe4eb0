import numpy as np
import pytest

from ghzsdc import capacity, qcore
from ghzsdc.capacity import (
    EnsembleSpec,
    average_state,
    classical_capacity,
    coherent_information,
    entropy_exchange,
    holevo,
    quantum_capacity,
)
from ghzsdc.noise import NoiseKind, make_channel
from ghzsdc.qcore import DensityOperator, QuantumChannel, StateVector, basis_state
from ghzsdc.sdc import Codeword, ghz_basis, ideal_received_state


def binary_entropy(x):
    terms = [q * np.log2(q) for q in (x, 1 - x) if q > 0]
    return -sum(terms)


def random_pure_ensemble(rng, m, members):
    states = []
    for _ in range(members):
        amps = rng.normal(size=2 ** m) + 1j * rng.normal(size=2 ** m)
        states.append(StateVector(amps / np.linalg.norm(amps)).density())
    priors = rng.dirichlet(np.ones(members))
    return EnsembleSpec(priors, tuple(states))


def environment_gram(ens, ch):
    """Independent entropy-exchange oracle: the environment state in the
    Kraus basis has entries rho_env[k, l] = tr(K_k rho K_l^dag)."""
    mix = sum(p * s.matrix for p, s in zip(ens.priors, ens.states))
    ops = ch.kraus_ops
    gram = np.array([[np.trace(k @ mix @ l.conj().T) for l in ops] for k in ops])
    evals = np.linalg.eigvalsh(gram)
    evals = evals[evals > 1e-12]
    return float(-np.sum(evals * np.log2(evals)))


class TestEnsembleSpec:
    def test_priors_must_sum_to_one(self):
        with pytest.raises(ValueError):
            EnsembleSpec(np.array([0.5, 0.6]),
                         (basis_state(1, 0).density(), basis_state(1, 1).density()))

    def test_count_mismatch(self):
        with pytest.raises(ValueError):
            EnsembleSpec(np.array([1.0]), (basis_state(1, 0).density(),
                                           basis_state(1, 1).density()))

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(ValueError):
            EnsembleSpec.uniform((basis_state(1, 0).density(),
                                  basis_state(2, 0).density()))

    def test_average_state(self):
        ens = EnsembleSpec(np.array([0.75, 0.25]),
                           (basis_state(1, 0).density(), basis_state(1, 1).density()))
        assert np.allclose(average_state(ens).matrix, np.diag([0.75, 0.25]))


class TestHolevo:
    def test_single_state_is_zero(self):
        ens = EnsembleSpec(np.array([1.0]), (DensityOperator(np.eye(2) / 2),))
        assert holevo(ens) == 0.0

    def test_orthogonal_pure_qubit_pair_is_one(self):
        ens = EnsembleSpec.uniform((basis_state(1, 0).density(),
                                    basis_state(1, 1).density()))
        assert abs(holevo(ens) - 1.0) < 1e-12

    def test_noiseless_protocol_outputs_reach_n_bits(self):
        for n in (3, 4):
            states = tuple(ideal_received_state(n, Codeword(n, v)).density()
                           for v in range(2 ** n))
            assert abs(holevo(EnsembleSpec.uniform(states)) - n) < 1e-9

    def test_depolarized_bell_ensemble_closed_form(self):
        # each Pauli error permutes the Bell basis, so every output has
        # eigenvalues {1 - p, p/3, p/3, p/3} while the average stays I/4
        p = 0.3
        ch = make_channel(NoiseKind.DEPOLARIZING, p)
        states = tuple(
            qcore.apply_channel(bell.density(), ch, [0])
            for bell in ghz_basis(2).states)
        member_entropy = -( (1 - p) * np.log2(1 - p) + p * np.log2(p / 3) )
        expected = 2.0 - member_entropy
        assert abs(holevo(EnsembleSpec.uniform(states)) - expected) < 1e-10

    def test_never_negative(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            assert holevo(random_pure_ensemble(rng, 1, 3)) >= 0


class TestClassicalCapacity:
    def test_uniform_value_without_optimization(self):
        states = (basis_state(1, 0).density(), basis_state(1, 1).density())
        assert abs(classical_capacity(states) - 1.0) < 1e-12

    def test_optimizer_never_below_uniform(self):
        rng = np.random.default_rng(37)
        for _ in range(10):
            ens = random_pure_ensemble(rng, 1, 3)
            uniform = classical_capacity(ens.states)
            assert classical_capacity(ens.states, optimize=True) >= uniform - 1e-12

    def test_optimizer_fixes_skewed_duplicates(self):
        # |0>, |0>, |1> at uniform priors scores H(1/3); the optimum
        # rebalances the duplicates and reaches one full bit
        states = (basis_state(1, 0).density(), basis_state(1, 0).density(),
                  basis_state(1, 1).density())
        uniform = classical_capacity(states)
        assert abs(uniform - binary_entropy(1 / 3)) < 1e-12
        assert classical_capacity(states, optimize=True) > 1.0 - 1e-4

    def test_symmetric_ensemble_already_optimal(self):
        states = tuple(bell.density() for bell in ghz_basis(2).states)
        assert abs(classical_capacity(states, optimize=True)
                   - classical_capacity(states)) < 1e-6


class TestEntropyExchange:
    def test_identity_channel_is_zero(self):
        rng = np.random.default_rng(41)
        ch = QuantumChannel((np.eye(2),))
        for _ in range(200):
            assert abs(entropy_exchange(random_pure_ensemble(rng, 1, 2), ch)) < 1e-9

    @pytest.mark.parametrize("kind", list(NoiseKind))
    @pytest.mark.parametrize("p", [0.0, 0.3, 0.7, 1.0])
    def test_matches_environment_gram_oracle(self, kind, p):
        ch = make_channel(kind, p)
        rng = np.random.default_rng(43)
        for _ in range(5):
            ens = random_pure_ensemble(rng, 1, 3)
            assert abs(entropy_exchange(ens, ch) - environment_gram(ens, ch)) < 1e-9

    def test_multi_qubit_oracle_agreement(self):
        # depolarizing noise embedded on qubit 0 of two-qubit ensembles
        base = make_channel(NoiseKind.DEPOLARIZING, 0.4)
        ops = tuple(np.kron(k, np.eye(2)) for k in base.kraus_ops)
        ch = QuantumChannel(ops)
        rng = np.random.default_rng(47)
        for _ in range(20):
            ens = random_pure_ensemble(rng, 2, 3)
            assert abs(entropy_exchange(ens, ch) - environment_gram(ens, ch)) < 1e-9

    def test_fully_depolarizing_on_mixed_average(self):
        ch = make_channel(NoiseKind.DEPOLARIZING, 0.75)
        ens = EnsembleSpec.uniform((basis_state(1, 0).density(),
                                    basis_state(1, 1).density()))
        assert abs(entropy_exchange(ens, ch) - 2.0) < 1e-9

    def test_mixed_member_rejected(self):
        ens = EnsembleSpec(np.array([1.0]), (DensityOperator(np.eye(2) / 2),))
        with pytest.raises(ValueError, match="pure"):
            entropy_exchange(ens, make_channel(NoiseKind.BIT_FLIP, 0.1))

    def test_dimension_mismatch_rejected(self):
        ens = EnsembleSpec.uniform((basis_state(2, 0).density(),))
        with pytest.raises(ValueError, match="dimension"):
            entropy_exchange(ens, make_channel(NoiseKind.BIT_FLIP, 0.1))


class TestCoherentInformation:
    def test_identity_channel_gives_input_entropy(self):
        ch = QuantumChannel((np.eye(2),))
        ens = EnsembleSpec.uniform((basis_state(1, 0).density(),
                                    basis_state(1, 1).density()))
        assert abs(coherent_information(ens, ch) - 1.0) < 1e-9

    def test_fully_depolarizing_is_minus_one(self):
        ch = make_channel(NoiseKind.DEPOLARIZING, 0.75)
        ens = EnsembleSpec.uniform((basis_state(1, 0).density(),
                                    basis_state(1, 1).density()))
        assert abs(coherent_information(ens, ch) - (-1.0)) < 1e-9

    @pytest.mark.parametrize("gamma", [0.1, 0.3, 0.5, 0.8])
    def test_amplitude_damping_closed_form(self, gamma):
        # for the uniform {|0>, |1>} ensemble the output entropy is
        # H((1-gamma)/2) and the environment entropy is H(gamma/2)
        ch = make_channel(NoiseKind.AMPLITUDE_DAMPING, gamma)
        ens = EnsembleSpec.uniform((basis_state(1, 0).density(),
                                    basis_state(1, 1).density()))
        expected = binary_entropy((1 - gamma) / 2) - binary_entropy(gamma / 2)
        assert abs(coherent_information(ens, ch) - expected) < 1e-10

    def test_damping_crossover_at_half(self):
        ch = make_channel(NoiseKind.AMPLITUDE_DAMPING, 0.5)
        ens = EnsembleSpec.uniform((basis_state(1, 0).density(),
                                    basis_state(1, 1).density()))
        assert abs(coherent_information(ens, ch)) < 1e-10


class TestQuantumCapacity:
    def test_floored_at_zero(self):
        ch = make_channel(NoiseKind.DEPOLARIZING, 0.75)
        ens = EnsembleSpec.uniform((basis_state(1, 0).density(),
                                    basis_state(1, 1).density()))
        assert quantum_capacity(ens, ch) == 0.0

    def test_identity_channel_full_bit(self):
        ch = QuantumChannel((np.eye(2),))
        ens = EnsembleSpec.uniform((basis_state(1, 0).density(),
                                    basis_state(1, 1).density()))
        assert abs(quantum_capacity(ens, ch) - 1.0) < 1e-9

    def test_optimizer_never_below_base(self):
        ch = make_channel(NoiseKind.AMPLITUDE_DAMPING, 0.2)
        rng = np.random.default_rng(53)
        for _ in range(5):
            ens = random_pure_ensemble(rng, 1, 2)
            base = quantum_capacity(ens, ch)
            assert quantum_capacity(ens, ch, optimize=True) >= base - 1e-9

    def test_optimizer_improves_skewed_prior(self):
        ch = make_channel(NoiseKind.PHASE_FLIP, 0.05)
        ens = EnsembleSpec(np.array([0.95, 0.05]),
                           (basis_state(1, 0).density(), basis_state(1, 1).density()))
        base = quantum_capacity(ens, ch)
        tuned = quantum_capacity(ens, ch, optimize=True)
        assert tuned > base + 0.1


class TestReport:
    def test_fields_consistent_with_components(self):
        ch = make_channel(NoiseKind.AMPLITUDE_DAMPING, 0.3)
        output_states = tuple(
            qcore.apply_channel(bell.density(), ch, [0])
            for bell in ghz_basis(2).states)
        output_ens = EnsembleSpec.uniform(output_states)
        input_ens = EnsembleSpec.uniform(tuple(
            bell.density() for bell in ghz_basis(2).states))
        embedded = QuantumChannel(tuple(np.kron(k, np.eye(2)) for k in ch.kraus_ops))
        rep = capacity.report(output_ens, input_ens, embedded)
        assert abs(rep.holevo - holevo(output_ens)) < 1e-12
        assert abs(rep.entropy_exchange - entropy_exchange(input_ens, embedded)) < 1e-12
        assert abs(rep.coherent_information
                   - coherent_information(input_ens, embedded)) < 1e-12
        assert rep.quantum_capacity == max(rep.coherent_information, 0.0)
        assert rep.classical_capacity >= rep.holevo - 1e-12
