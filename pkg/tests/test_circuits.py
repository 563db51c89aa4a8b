from math import comb

import numpy as np
import pytest

from qgenbench import circuits
from qgenbench.circuits import CircuitError, build_copula, build_standard, warm_start
from qgenbench.simulator import exact_probs


def test_copula_counts_examples():
    assert build_copula(6, 2, 1).param_count == 24
    assert build_copula(2, 2, 1).param_count == 6
    assert build_copula(6, 2, 3).param_count == 72


def test_copula_tiny_entangler():
    seq = build_copula(2, 2, 1)
    assert seq.gates[0] == circuits.Gate("H", (0,))
    assert seq.gates[1] == circuits.Gate("CNOT", (0, 1))


def test_standard_counts_examples():
    assert build_standard(12, 2).param_count == 35
    assert build_standard(12, 4).param_count == 82
    assert build_standard(1, 2).param_count == 2


@pytest.mark.parametrize("n", range(2, 13, 2))
@pytest.mark.parametrize("d", [1, 2, 3])
def test_copula_closed_form(n, d):
    assert build_copula(n, 2, d).param_count == d * (3 * n + 2 * comb(n // 2, 2))


@pytest.mark.parametrize("n", range(2, 13))
@pytest.mark.parametrize("d", [2, 4, 6, 8])
def test_standard_closed_form(n, d):
    expected = 3 * n - 1 if d == 2 else (3 * d // 2 + 1) * n - d // 2
    assert build_standard(n, d).param_count == expected


@pytest.mark.parametrize("seq", [build_copula(6, 2, 2), build_standard(5, 6)])
def test_param_index_bijection(seq):
    idx = [g.param_index for g in seq.gates if g.param_index is not None]
    assert sorted(idx) == list(range(seq.param_count))


def test_build_errors():
    with pytest.raises(CircuitError):
        build_copula(5, 2, 1)
    with pytest.raises(CircuitError):
        build_copula(6, 3, 1)
    with pytest.raises(CircuitError):
        build_standard(4, 3)


def test_gate_validation():
    with pytest.raises(CircuitError):
        circuits.Gate("CNOT", (1, 1))
    with pytest.raises(CircuitError):
        circuits.Gate("RX", (0,))
    with pytest.raises(CircuitError):
        circuits.GateSequence(2, 1, (circuits.Gate("H", (2,)),), "standard")


def test_dump_round_trip():
    seq = build_copula(4, 2, 2)
    text = seq.dump()
    assert text.splitlines()[0] == "H 0"
    assert "RZZ 0 1 [" in text
    assert circuits.parse_dump(text, 4, 2, "copula", 2) == seq


def test_warm_start_contract():
    shallow, deep = build_copula(2, 2, 1), build_copula(2, 2, 2)
    p = np.arange(6, dtype=float)
    out = warm_start(p, shallow, deep, seed=0)
    assert out.shape == (12,)
    np.testing.assert_array_equal(out[:6], p)
    assert np.all(np.abs(out[6:]) < 1e-2)


@pytest.mark.parametrize("pair", [
    (build_copula(6, 2, 1), build_copula(6, 2, 2)),
    (build_standard(4, 2), build_standard(4, 4)),
    (build_standard(4, 4), build_standard(4, 6)),
])
def test_warm_start_eps0_preserves_distribution(pair):
    shallow, deep = pair
    p = np.random.default_rng(3).uniform(-np.pi, np.pi, shallow.param_count)
    q = warm_start(p, shallow, deep, eps=0.0)
    assert np.all(q[shallow.param_count:] == 0)
    tv = 0.5 * np.abs(exact_probs(shallow, p).probs - exact_probs(deep, q).probs).sum()
    assert tv <= 1e-9


def test_warm_start_mismatch():
    with pytest.raises(CircuitError):
        warm_start(np.zeros(24), build_copula(6, 2, 1), build_copula(4, 2, 2))
    with pytest.raises(CircuitError):
        warm_start(np.zeros(24), build_copula(6, 2, 1), build_standard(6, 4))
