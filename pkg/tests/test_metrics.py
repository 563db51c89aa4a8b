import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import all_bitstrings, brute_force_report
from qgenbench.datasets import make_discrete
from qgenbench.datatypes import BitstringSet, Pmf, SampleMultiset
from qgenbench.metrics import MetricsError, classify, generalization_report, kl_train_vs_sol
from qgenbench.training import KL_EPS


def _ds():
    return make_discrete(8, 4, 0.5, seed=0)


def test_memorizer():
    ds = _ds()
    q = SampleMultiset.from_bitstrings(8, sorted(ds.train_set.members) * 10)
    rep = generalization_report(q, ds.train_set, ds.solution_set)
    assert (rep.exploration, rep.fidelity, rep.rate, rep.coverage) == (0, 0, 0, 0)
    assert rep.precision == 1


def test_perfect_generalizer():
    ds = _ds()
    unseen = sorted(ds.solution_set.members - ds.train_set.members)
    rep = generalization_report(SampleMultiset.from_bitstrings(8, unseen), ds.train_set, ds.solution_set)
    assert rep.fidelity == 1 and rep.coverage == 1 and rep.normalized_rate == pytest.approx(2.0)


def test_uniform_sampler_fidelity():
    ds = _ds()
    rng = np.random.default_rng(1)
    q = SampleMultiset.from_indices(8, rng.integers(0, 256, 200_000))
    rep = generalization_report(q, ds.train_set, ds.solution_set)
    # 35 unseen solutions among the 221 strings outside T
    assert rep.fidelity == pytest.approx(35 / 221, abs=0.005)


train_sets = st.sets(st.sampled_from(all_bitstrings(4)), min_size=1)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_against_brute_force(data):
    sol = data.draw(st.sets(st.sampled_from(all_bitstrings(4)), min_size=2))
    train = data.draw(st.sets(st.sampled_from(sorted(sol)), min_size=1, max_size=len(sol) - 1))
    q_list = data.draw(st.lists(st.sampled_from(all_bitstrings(4)), min_size=1, max_size=80))
    rep = generalization_report(SampleMultiset.from_bitstrings(4, q_list),
                                BitstringSet(4, frozenset(train)), BitstringSet(4, frozenset(sol)))
    ref = brute_force_report(q_list, train, sol)
    for key in ("g_train", "g_new", "g_sol", "g_sol_unique"):
        assert getattr(rep, key) == ref[key]
    for key in ("exploration", "precision", "fidelity", "rate", "normalized_rate",
                "coverage", "expected_coverage", "normalized_coverage"):
        assert getattr(rep, key) == pytest.approx(ref[key], rel=1e-12, abs=1e-15)


def test_classify_partition():
    ds = _ds()
    q = SampleMultiset.from_indices(8, np.arange(256))
    g_train, g_new, g_sol, uniq = classify(q, ds.train_set, ds.solution_set)
    assert (g_train, g_new, g_sol, uniq) == (35, 221, 35, 35)


def test_errors():
    ds = _ds()
    with pytest.raises(MetricsError, match="bit lengths"):
        generalization_report(SampleMultiset.from_bitstrings(4, ["0000"]), ds.train_set, ds.solution_set)
    with pytest.raises(MetricsError, match="subset"):
        generalization_report(SampleMultiset.from_bitstrings(8, ["00000000"]),
                              BitstringSet(8, frozenset({"00000000"})), ds.solution_set)
    with pytest.raises(MetricsError, match="alpha = 1"):
        generalization_report(SampleMultiset.from_bitstrings(8, ["00001111"]),
                              ds.solution_set, ds.solution_set)


def test_kl_uniform_over_solution_set():
    ds = _ds()
    probs = np.zeros(256)
    probs[ds.solution_set.indices()] = 1 / 70
    kl_tr, kl_sol = kl_train_vs_sol(Pmf(probs), ds.train_set, ds.solution_set)
    assert kl_tr == pytest.approx(np.log(70 / 35), abs=1e-12)
    assert kl_sol == pytest.approx(0.0, abs=1e-12)


def test_kl_delta_on_training_string():
    ds = _ds()
    t = len(ds.train_set)
    probs = np.zeros(256)
    probs[ds.train_set.indices()[0]] = 1.0
    kl_tr, _ = kl_train_vs_sol(Pmf(probs), ds.train_set, ds.solution_set)
    # the other |T|-1 training strings are clipped at eps
    expected = np.log(1 / t) / t + (t - 1) / t * np.log(1 / (t * KL_EPS))
    assert kl_tr == pytest.approx(expected, abs=1e-9)
