"""Train a dissipative network corrector on noisy trajectories.

The training set is built from pure-state trajectories of the shared
state under amplitude damping; the target is always the ideal state. The
trained network is then applied as a channel corrector and compared
against the uncorrected fidelity.

Run: python3 demos/qnn_training_demo.py
"""

import numpy as np

from ghzsdc import (
    NetworkArchitecture,
    NoiseKind,
    TrainingPair,
    apply_channel,
    correct_state,
    fidelity,
    make_channel,
    sample_trajectory,
    shared_state,
    train,
)


def build_training_set(n, p, count, seed):
    psi = shared_state(n)
    ch = make_channel(NoiseKind.AMPLITUDE_DAMPING, p)
    seeds = np.random.default_rng(seed).integers(0, 2 ** 31, size=count)
    return [TrainingPair(sample_trajectory(psi, ch, [0], int(s)), psi) for s in seeds]

def main():
    n = 2
    p = 0.3
    pairs = build_training_set(n, p, count=100, seed=0)
    distinct = {tuple(np.round(t.input.amplitudes, 12)) for t in pairs}
    print(f"training set: 100 trajectories, {len(distinct)} distinct states")

    model, report = train(NetworkArchitecture(n, 1), pairs,
                          max_iters=400, rng_seed=0)
    history = report.cost_history
    print(f"trained for {report.iterations} iterations, converged={report.converged}")
    print("cost trace: " + " -> ".join(
        f"{history[i]:.4f}" for i in np.linspace(0, len(history) - 1, 6, dtype=int)))

    psi = shared_state(n)
    noisy = apply_channel(psi.density(), make_channel(NoiseKind.AMPLITUDE_DAMPING, p), [0])
    corrected = correct_state(model, noisy)
    print()
    print(f"fidelity without corrector: {fidelity(psi, noisy):.6f}")
    print(f"fidelity with corrector:    {fidelity(psi, corrected):.6f}")
    print(f"clean state passthrough:    {fidelity(psi, correct_state(model, psi.density())):.6f}")


if __name__ == "__main__":
    main()
