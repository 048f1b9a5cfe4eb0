"""Dissipative feed-forward quantum neural network.

Each layer transition maps an n-qubit register onto n fresh qubits through a
product of n quantum perceptrons; perceptron j acts on the n previous-layer
qubits plus its own fresh qubit. The input register (and any intermediate
registers) are traced out, so the trained network is a channel that can be
dropped into the protocol as a noise corrector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from . import qcore
from .qcore import DensityOperator, StateVector, Unitary

# Training refuses wider inputs: beyond this the loss fails to converge
# (runaway gradients), so the cap is explicit rather than silent.
MAX_TRAINABLE_WIDTH = 6


@dataclass(frozen=True)
class NetworkArchitecture:
    """All layers share the input width; hidden_layers counts the layer
    transitions (1 means the input register feeds the output directly)."""

    input_width: int
    hidden_layers: int = 1

    def __post_init__(self):
        if self.input_width < 1:
            raise ValueError("input width must be >= 1")
        if self.hidden_layers < 1:
            raise ValueError("at least one layer transition is required")


@dataclass(frozen=True)
class QnnModel:
    architecture: NetworkArchitecture
    perceptrons: tuple  # per transition, a tuple of n Unitary values

    def __post_init__(self):
        n = self.architecture.input_width
        dim = 2 ** (n + 1)
        layers = tuple(tuple(layer) for layer in self.perceptrons)
        if len(layers) != self.architecture.hidden_layers:
            raise ValueError("perceptron layers do not match the architecture depth")
        for layer in layers:
            if len(layer) != n:
                raise ValueError(f"each layer needs {n} perceptrons")
            for u in layer:
                if not isinstance(u, Unitary) or u.matrix.shape[0] != dim:
                    raise ValueError(f"perceptrons must be {n + 1}-qubit unitaries")
        object.__setattr__(self, "perceptrons", layers)


@dataclass(frozen=True)
class TrainingPair:
    input: StateVector
    target: StateVector


@dataclass(frozen=True)
class TrainingReport:
    cost_history: List[float]
    final_cost: float
    iterations: int
    converged: bool


def identity_model(architecture: NetworkArchitecture) -> QnnModel:
    n = architecture.input_width
    eye = Unitary(np.eye(2 ** (n + 1), dtype=complex))
    layers = tuple(tuple(eye for _ in range(n)) for _ in range(architecture.hidden_layers))
    return QnnModel(architecture, layers)


def feedforward(model: QnnModel, rho_in: DensityOperator) -> DensityOperator:
    """Propagate a (possibly mixed) state through the network.

    Per transition: adjoin |0...0> on n fresh qubits, apply the perceptron
    product, trace out the previous register.
    """
    n = model.architecture.input_width
    if rho_in.qubit_count != n:
        raise ValueError(f"input has {rho_in.qubit_count} qubits, model width is {n}")
    zeros = qcore.basis_state(n, 0).density()
    rho = rho_in
    for layer in model.perceptrons:
        joint = qcore.tensor_product(rho, zeros)
        for j, u in enumerate(layer):
            joint = qcore.apply_unitary(joint, u, list(range(n)) + [n + j])
        rho = qcore.partial_trace(joint, range(n, 2 * n))
    return rho


def correct_state(model: QnnModel, rho: DensityOperator) -> DensityOperator:
    """Pipeline alias: run the trained corrector on a shared state."""
    return feedforward(model, rho)


# ---------------------------------------------------------------------------
# Pure-state fast path used by cost evaluation and training. The full
# register (input + all layer registers) is kept as one state vector; the
# trace of Eq-style layer maps is deferred to the final overlap.

def _op_schedule(model: QnnModel) -> List[Tuple[int, int, np.ndarray, List[int]]]:
    n = model.architecture.input_width
    sched = []
    for t, layer in enumerate(model.perceptrons):
        prev = list(range(t * n, (t + 1) * n))
        for j, u in enumerate(layer):
            sched.append((t, j, u.matrix, prev + [(t + 1) * n + j]))
    return sched


def _zero_vec(m: int) -> np.ndarray:
    v = np.zeros(2 ** m, dtype=complex)
    v[0] = 1.0
    return v


def _full_register(model: QnnModel, psi: StateVector) -> np.ndarray:
    # |psi> on the input register (high qubits), |0...0> on every layer register
    extra = model.architecture.hidden_layers * model.architecture.input_width
    return np.kron(psi.amplitudes, _zero_vec(extra))


def _pair_cost(model: QnnModel, pair: TrainingPair) -> float:
    n = model.architecture.input_width
    total_qubits = (model.architecture.hidden_layers + 1) * n
    vec = _full_register(model, pair.input)
    for _, _, mat, axes in _op_schedule(model):
        vec = qcore._apply_matrix_to_vector(mat, vec, axes, total_qubits)
    rest = vec.reshape(-1, 2 ** n) @ pair.target.amplitudes.conj()
    return float(np.linalg.norm(rest) ** 2)


def cost(model: QnnModel, training_set: Sequence[TrainingPair]) -> float:
    """Mean target overlap (1/N) sum_x <target_x| rho_x^out |target_x>."""
    if not training_set:
        raise ValueError("training set must be nonempty")
    n = model.architecture.input_width
    for pair in training_set:
        if pair.input.qubit_count != n or pair.target.qubit_count != n:
            raise ValueError("training pair width differs from the model width")
    return sum(_pair_cost(model, p) for p in training_set) / len(training_set)


def _dedupe(training_set: Sequence[TrainingPair]):
    """Collapse repeated pairs into (pair, weight); trajectory-sampled sets
    typically contain only a handful of distinct states."""
    unique: List[TrainingPair] = []
    weights: List[float] = []
    for pair in training_set:
        for i, seen in enumerate(unique):
            if (np.array_equal(pair.input.amplitudes, seen.input.amplitudes)
                    and np.array_equal(pair.target.amplitudes, seen.target.amplitudes)):
                weights[i] += 1.0
                break
        else:
            unique.append(pair)
            weights.append(1.0)
    w = np.array(weights) / len(training_set)
    return unique, w


def _weighted_cost(model: QnnModel, pairs, weights) -> float:
    return float(sum(w * _pair_cost(model, p) for p, w in zip(pairs, weights)))


def _group_axes(vec: np.ndarray, axes: List[int], m: int) -> np.ndarray:
    """Reshape a 2^m vector to (2^k, 2^(m-k)) with `axes` first, in order."""
    t = vec.reshape((2,) * m)
    t = np.moveaxis(t, axes, range(len(axes)))
    return t.reshape(2 ** len(axes), -1)


def _gradients(model: QnnModel, training_set: Sequence[TrainingPair], weights=None):
    """Ascent directions K for every perceptron: the partial trace of
    i[A, B] over non-target qubits, accumulated across training pairs."""
    n = model.architecture.input_width
    m = (model.architecture.hidden_layers + 1) * n
    sched = _op_schedule(model)
    if weights is None:
        weights = np.full(len(training_set), 1.0 / len(training_set))
    grads = [np.zeros((2 ** (n + 1), 2 ** (n + 1)), dtype=complex) for _ in sched]
    for weight, pair in zip(weights, training_set):
        full = _full_register(model, pair.input)
        for _, _, mat, axes in sched:
            full = qcore._apply_matrix_to_vector(mat, full, axes, m)
        # project the output register onto the target
        overlap = full.reshape(-1, 2 ** n) @ pair.target.amplitudes.conj()
        chi = np.kron(overlap, pair.target.amplitudes)
        a, c = full, chi
        for idx in range(len(sched) - 1, -1, -1):
            _, _, mat, axes = sched[idx]
            amat = _group_axes(a, axes, m)
            cmat = _group_axes(c, axes, m)
            t_ac = amat @ cmat.conj().T
            grads[idx] = grads[idx] + weight * 1j * (t_ac - t_ac.conj().T)
            a = qcore._apply_matrix_to_vector(mat.conj().T, a, axes, m)
            c = qcore._apply_matrix_to_vector(mat.conj().T, c, axes, m)
    return grads


def _expm_i(h: np.ndarray, eps: float) -> np.ndarray:
    """exp(i * eps * h) for Hermitian h."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * eps * w)) @ v.conj().T


def _stepped(model: QnnModel, grads, eps: float) -> QnnModel:
    n = model.architecture.input_width
    layers = []
    idx = 0
    for layer in model.perceptrons:
        new_layer = []
        for u in layer:
            new_layer.append(Unitary(_expm_i(grads[idx], eps) @ u.matrix))
            idx += 1
        layers.append(tuple(new_layer))
    return QnnModel(model.architecture, tuple(layers))


def random_model(architecture: NetworkArchitecture, rng: np.random.Generator,
                 spread: float = 0.1) -> QnnModel:
    """Perceptrons exp(iH) with H Hermitian, entries uniform in +/- spread."""
    n = architecture.input_width
    dim = 2 ** (n + 1)
    layers = []
    for _ in range(architecture.hidden_layers):
        layer = []
        for _ in range(n):
            raw = rng.uniform(-spread, spread, (dim, dim)) + 1j * rng.uniform(-spread, spread, (dim, dim))
            h = (raw + raw.conj().T) / 2
            layer.append(Unitary(_expm_i(h, 1.0)))
        layers.append(tuple(layer))
    return QnnModel(architecture, tuple(layers))


def train(
    architecture: NetworkArchitecture,
    training_set: Sequence[TrainingPair],
    step_size: float = 0.1,
    max_iters: int = 200,
    tol: float = 1e-6,
    rng_seed: int = 0,
    init_identity: bool = False,
) -> Tuple[QnnModel, TrainingReport]:
    """Gradient-ascent training of the perceptron unitaries.

    Each perceptron is updated as U <- exp(i*eps*K) U along the analytic
    ascent direction K of the mean target overlap, jointly rescaled by the
    largest per-perceptron gradient norm so plateaus are crossed at full
    step length. eps halves whenever a step would decrease the cost and
    recovers multiplicatively after accepted steps, so the history is
    non-decreasing.
    """
    if step_size <= 0:
        raise ValueError("step size must be positive")
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    n = architecture.input_width
    if n > MAX_TRAINABLE_WIDTH:
        raise ValueError(
            f"training is limited to {MAX_TRAINABLE_WIDTH} input qubits; "
            f"wider networks fail to converge (runaway gradients)")
    if init_identity:
        model = identity_model(architecture)
    else:
        model = random_model(architecture, np.random.default_rng(rng_seed))
    pairs, weights = _dedupe(training_set)
    eps = step_size
    current = _weighted_cost(model, pairs, weights)
    history = [current]
    converged = False
    iterations = 0
    for _ in range(max_iters):
        grads = _gradients(model, pairs, weights)
        largest = max(np.linalg.norm(g) for g in grads)
        if largest > 1e-12:
            grads = [g / largest for g in grads]
        stepped = None
        while eps > 1e-8:
            candidate = _stepped(model, grads, eps)
            new_cost = _weighted_cost(candidate, pairs, weights)
            if new_cost >= current - 1e-9:
                stepped = (candidate, new_cost)
                break
            eps /= 2
        if stepped is None:
            converged = True
            break
        model, new_cost = stepped
        eps = min(eps * 1.05, step_size)
        iterations += 1
        history.append(new_cost)
        current = new_cost
        # windowed stop: a single sub-tol step can sit mid-plateau, so
        # require the whole recent stretch to be flat
        window = 25
        if len(history) > window and history[-1] - history[-1 - window] < tol:
            converged = True
            break
    report = TrainingReport(
        cost_history=history,
        final_cost=history[-1],
        iterations=iterations,
        converged=converged,
    )
    return model, report


# ---------------------------------------------------------------------------
# Model file format: line-oriented text, bit-exact round trips.
#   qnnmodel 1
#   n L
#   dim d            (per perceptron, layer-major)
#   re im            (d*d lines, row-major, >=17 significant digits)

def save_model(model: QnnModel, path) -> None:
    n = model.architecture.input_width
    lines = ["qnnmodel 1", f"{n} {model.architecture.hidden_layers}"]
    for layer in model.perceptrons:
        for u in layer:
            d = u.matrix.shape[0]
            lines.append(f"dim {d}")
            for row in u.matrix:
                for z in row:
                    lines.append(f"{z.real:.17e} {z.imag:.17e}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


class ModelFormatError(ValueError):
    def __init__(self, path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")


def load_model(path) -> QnnModel:
    with open(path) as fh:
        lines = fh.read().splitlines()
    pos = 0

    def next_line(expect: str):
        nonlocal pos
        if pos >= len(lines):
            raise ModelFormatError(path, pos + 1, f"unexpected end of file, wanted {expect}")
        line = lines[pos]
        pos += 1
        return line

    header = next_line("header")
    if header.strip() != "qnnmodel 1":
        raise ModelFormatError(path, 1, f"bad header {header!r}")
    shape = next_line("architecture line").split()
    try:
        n, depth = int(shape[0]), int(shape[1])
    except (IndexError, ValueError):
        raise ModelFormatError(path, 2, "architecture line must be two integers 'n L'")
    arch = NetworkArchitecture(n, depth)
    layers = []
    for _ in range(depth):
        layer = []
        for _ in range(n):
            dim_line = next_line("'dim d'").split()
            if len(dim_line) != 2 or dim_line[0] != "dim":
                raise ModelFormatError(path, pos, f"expected 'dim d', got {lines[pos - 1]!r}")
            d = int(dim_line[1])
            if d != 2 ** (n + 1):
                raise ModelFormatError(path, pos, f"perceptron dim {d} inconsistent with width {n}")
            mat = np.empty((d, d), dtype=complex)
            for r in range(d):
                for col in range(d):
                    parts = next_line("'re im'").split()
                    if len(parts) != 2:
                        raise ModelFormatError(path, pos, f"expected 're im', got {lines[pos - 1]!r}")
                    try:
                        mat[r, col] = complex(float(parts[0]), float(parts[1]))
                    except ValueError:
                        raise ModelFormatError(path, pos, f"non-numeric entry {lines[pos - 1]!r}")
            try:
                layer.append(Unitary(mat))
            except ValueError as exc:
                raise ModelFormatError(path, pos, str(exc))
        layers.append(tuple(layer))
    if pos != len(lines) and any(line.strip() for line in lines[pos:]):
        raise ModelFormatError(path, pos + 1, "trailing content after model data")
    return QnnModel(arch, tuple(layers))
