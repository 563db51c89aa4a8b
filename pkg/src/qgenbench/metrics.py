"""Sample-based generalization metrics for discrete generative models.

Given generated samples ``Q``, a training set ``T`` and a solution set ``S``:

* ``G_train``: samples in ``T``
* ``G_new``: samples not in ``T``
* ``G_sol``: samples in ``S`` but not in ``T``
* ``g_sol``: the distinct strings of ``G_sol``

All numerators and denominators are exact integers; each ratio is formed by a
single final division.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

from .datatypes import BitstringSet, Pmf, SampleMultiset
from .training import kl_divergence
from .transforms import pmf_from_bitstring_set


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class GeneralizationReport:
    q_size: int
    g_train: int
    g_new: int
    g_sol: int
    g_sol_unique: int
    alpha: float
    exploration: float
    precision: float
    fidelity: float
    rate: float
    normalized_rate: float
    coverage: float
    normalized_coverage: float
    expected_coverage: float

    def to_dict(self) -> dict:
        return asdict(self)


def _check(q: SampleMultiset, train: BitstringSet, solution: BitstringSet):
    if not (q.n_bits == train.n_bits == solution.n_bits):
        raise MetricsError(
            f"bit lengths differ: Q={q.n_bits}, T={train.n_bits}, S={solution.n_bits}")
    if not train.members <= solution.members:
        raise MetricsError("training set is not a subset of the solution set")


def classify(q: SampleMultiset, train: BitstringSet, solution: BitstringSet) -> tuple[int, int, int, int]:
    """Return ``(|G_train|, |G_new|, |G_sol|, |g_sol|)``."""
    _check(q, train, solution)
    g_train = g_sol = g_sol_unique = 0
    for s, c in q.counts.items():
        if s in train.members:
            g_train += c
        elif s in solution.members:
            g_sol += c
            g_sol_unique += 1
    return g_train, q.total - g_train, g_sol, g_sol_unique


def generalization_report(q: SampleMultiset, train: BitstringSet,
                          solution: BitstringSet) -> GeneralizationReport:
    g_train, g_new, g_sol, g_uniq = classify(q, train, solution)
    total, s_size, t_size = q.total, len(solution), len(train)
    if total == 0:
        raise MetricsError("sample multiset is empty")
    unseen = s_size - t_size  # |S| (1 - alpha)
    if unseen == 0:
        raise MetricsError("alpha = 1: normalized rate and coverage are undefined")
    alpha = t_size / s_size
    expected_cov = 1.0 - (1.0 - 1.0 / unseen) ** (total * unseen / s_size)
    coverage = g_uniq / unseen
    return GeneralizationReport(
        q_size=total, g_train=g_train, g_new=g_new, g_sol=g_sol, g_sol_unique=g_uniq,
        alpha=alpha,
        exploration=g_new / total,
        precision=(g_train + g_sol) / total,
        # a memorizer produces nothing new and gets no fidelity credit
        fidelity=g_sol / g_new if g_new else 0.0,
        rate=g_sol / total,
        normalized_rate=(g_sol * s_size) / (total * unseen),
        coverage=coverage,
        normalized_coverage=coverage / expected_cov,
        expected_coverage=expected_cov,
    )


def kl_train_vs_sol(model: Pmf, train: BitstringSet, solution: BitstringSet,
                    eps: float = 1e-8) -> tuple[float, float]:
    """KL from the uniform PMFs over ``T`` and over ``S`` to the model."""
    n = model.n
    return (kl_divergence(pmf_from_bitstring_set(train, n), model, eps),
            kl_divergence(pmf_from_bitstring_set(solution, n), model, eps))
