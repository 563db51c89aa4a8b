import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import oracle_probs
from qgenbench.circuits import Gate, GateSequence, build_copula, build_standard
from qgenbench.simulator import (NoiseSpec, SimulationError, eval_population, exact_probs,
                                 sample, simulate_batch)


def _marginals(probs, n):
    grid = probs.reshape(2 ** (n // 2), 2 ** (n // 2))
    return grid.sum(axis=1), grid.sum(axis=0)


def test_standard_zero_params_is_delta():
    pmf = exact_probs(build_standard(5, 4), np.zeros(build_standard(5, 4).param_count))
    expected = np.zeros(32)
    expected[0] = 1
    np.testing.assert_array_equal(pmf.probs, expected)


def test_single_hadamard():
    seq = GateSequence(1, 1, (Gate("H", (0,)),), "standard")
    np.testing.assert_allclose(exact_probs(seq, []).probs, [0.5, 0.5], atol=1e-15)


def test_big_endian_layout():
    # flipping qubit 0 of 3 lands in index 0b100
    seq = GateSequence(3, 1, (Gate("RX", (0,), 0),), "standard")
    assert exact_probs(seq, [np.pi]).probs[4] == pytest.approx(1.0)


@pytest.mark.parametrize("kind", ["CNOT", "RZZ", "CP"])
@pytest.mark.parametrize("wires", [(0, 2), (2, 0), (1, 3)])
def test_two_qubit_gates_against_oracle(kind, wires):
    rng = np.random.default_rng(1)
    gates = [Gate("RY", (q,), q) for q in range(4)] + [Gate("RX", (q,), 4 + q) for q in range(4)]
    pidx = 8 if kind != "CNOT" else None
    gates.append(Gate(kind, wires, pidx))
    gates += [Gate("RY", (q,), 8 + (kind != "CNOT") + q) for q in range(4)]
    seq = GateSequence(4, 1, tuple(gates), "standard")
    p = rng.uniform(-np.pi, np.pi, seq.param_count)
    np.testing.assert_allclose(exact_probs(seq, p).probs, oracle_probs(seq, p), atol=1e-12)


def test_copula_marginals_n4_against_oracle():
    seq = build_copula(4, 2, 2)
    p = np.random.default_rng(5).normal(size=seq.param_count) * 2
    probs = exact_probs(seq, p).probs
    np.testing.assert_allclose(probs, oracle_probs(seq, p), atol=1e-12)
    for marg in _marginals(probs, 4):
        np.testing.assert_allclose(marg, 0.25, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 4, 6]), st.integers(1, 3))
def test_norm_preserved_after_every_gate(seed, n, d):
    seq = build_copula(n, 2, d)
    p = np.random.default_rng(seed).normal(size=seq.param_count) * 3
    for cut in range(1, len(seq.gates) + 1):
        prefix = seq.gates[:cut]
        idx = sorted({g.param_index for g in prefix if g.param_index is not None})
        remap = {old: new for new, old in enumerate(idx)}
        sub = GateSequence(n, d, tuple(
            Gate(g.kind, g.wires, remap.get(g.param_index)) for g in prefix), "copula")
        psi = simulate_batch(sub, p[idx][None, :])[0]
        assert abs(np.vdot(psi, psi).real - 1) < 1e-10


def test_param_length_mismatch():
    with pytest.raises(SimulationError):
        exact_probs(build_standard(3, 2), np.zeros(3))


def test_qubit_budget(monkeypatch):
    import qgenbench.simulator as sim
    monkeypatch.setattr(sim, "MAX_QUBITS", 4)
    with pytest.raises(SimulationError, match="budget"):
        exact_probs(build_standard(5, 2), np.zeros(14))


def test_sample_hadamard_frequency():
    seq = GateSequence(1, 1, (Gate("H", (0,)),), "standard")
    q = sample(seq, [], 100_000, seed=11)
    freq = q.counts.get("1", 0) / q.total
    assert 0.495 <= freq <= 0.505


def test_sample_full_readout_noise_is_uniform():
    seq = build_standard(2, 2)
    q = sample(seq, np.zeros(seq.param_count), 100_000, seed=2, noise=NoiseSpec(0.5))
    tv = 0.5 * np.abs(q.empirical_pmf().probs - 0.25).sum()
    assert tv < 0.02


def test_sample_one_shot_and_determinism():
    seq = build_copula(4, 2, 1)
    p = np.random.default_rng(0).normal(size=seq.param_count)
    assert sample(seq, p, 1, seed=3).total == 1
    assert sample(seq, p, 500, seed=3) == sample(seq, p, 500, seed=3)


def test_sampling_converges_chi2():
    from scipy.stats import chisquare
    seq = build_copula(4, 2, 1)
    p = np.random.default_rng(8).normal(size=seq.param_count)
    exact = exact_probs(seq, p).probs
    q = sample(seq, p, 100_000, seed=4)
    observed = q.empirical_pmf().probs * q.total
    mask = exact > 1e-6
    res = chisquare(observed[mask], exact[mask] / exact[mask].sum() * q.total)
    assert res.pvalue > 1e-3


def test_noise_spec_bounds():
    with pytest.raises(ValueError):
        NoiseSpec(0.6)


def test_population_single_member_equals_direct():
    seq = build_standard(4, 4)
    p = np.random.default_rng(0).normal(size=seq.param_count)
    assert eval_population(seq, [p])[0] == exact_probs(seq, p)


@pytest.mark.parametrize("shots", [None, 200])
def test_population_thread_invariance(shots):
    seq = build_copula(6, 2, 1)
    pop = np.random.default_rng(1).normal(size=(200, seq.param_count))
    one = eval_population(seq, pop, shots=shots, seed=9, threads=1, as_array=True)
    eight = eval_population(seq, pop, shots=shots, seed=9, threads=8, as_array=True)
    np.testing.assert_array_equal(one, eight)


def test_population_order_matches_input():
    seq = build_copula(4, 2, 1)
    pop = np.random.default_rng(2).normal(size=(5, seq.param_count))
    out = eval_population(seq, pop)
    for row, p in zip(out, pop):
        assert row == exact_probs(seq, p)


def test_population_failure_names_members():
    seq = build_copula(4, 2, 1)
    with pytest.raises(SimulationError):
        eval_population(seq, np.zeros((3, 5)))
