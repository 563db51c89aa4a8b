"""QCBM training: CMA-ES on the KL divergence between target and model PMFs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .circuits import GateSequence
from .cmaes import TrainReport, cmaes_minimize
from .datatypes import Pmf, PointCloud, SampleMultiset
from .simulator import NoiseSpec, eval_population, exact_probs, sample
from .transforms import Transform, cell_centers, inverse

KL_EPS = 1e-8
NORM_TOL = 1e-9
INIT_RANGE = np.pi / 8
INIT_SIGMA = 0.25


def _as_probs(p) -> np.ndarray:
    return p.probs if isinstance(p, Pmf) else np.asarray(p, dtype=float)


def _validate(t, m):
    if t.shape != m.shape:
        raise ValueError(f"PMF length mismatch: {t.shape[0]} vs {m.shape[0]}")
    for name, p in (("target", t), ("model", m)):
        if abs(p.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"{name} PMF is not normalized (sum={p.sum()!r})")


def kl_divergence(target, model, eps: float = KL_EPS) -> float:
    """KL(target || model) with model probabilities clipped below at ``eps``.

    Only bins where either distribution is non-zero are visited; bins with
    zero target mass contribute nothing.
    """
    t, m = _as_probs(target), _as_probs(model)
    _validate(t, m)
    nz = np.flatnonzero((t > 0) | (m > 0))
    tn, mn = t[nz], m[nz]
    keep = tn > 0
    tn, mn = tn[keep], mn[keep]
    return float(np.sum(tn * np.log(tn / np.maximum(mn, eps))))


def kl_divergence_dense(target, model, eps: float = KL_EPS) -> float:
    t, m = _as_probs(target), _as_probs(model)
    _validate(t, m)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(t > 0, t * np.log(t / np.maximum(m, eps)), 0.0)
    return float(np.sum(terms))


class _KLObjective:
    """Batched KL over the fixed target support, no per-call validation."""

    def __init__(self, target: np.ndarray, eps: float):
        self.support = np.flatnonzero(target > 0)
        self.t = target[self.support]
        self.log_t = np.log(self.t)
        self.eps = eps

    def __call__(self, model_rows: np.ndarray) -> np.ndarray:
        m = np.maximum(model_rows[:, self.support], self.eps)
        return (self.t * (self.log_t - np.log(m))).sum(axis=1)


@dataclass
class QcbmConfig:
    popsize: int = 200
    max_evals: int = 20000
    exact: bool = True
    shots: int = 10000
    seed: int = 0
    init_sigma: float = INIT_SIGMA
    init_params: Optional[np.ndarray] = None
    threads: Optional[int] = None
    kl_eps: float = KL_EPS
    noise: Optional[NoiseSpec] = None


def initial_params(param_count: int, seed) -> np.ndarray:
    return np.random.default_rng(seed).uniform(-INIT_RANGE, INIT_RANGE, param_count)


def train_qcbm(seq: GateSequence, target, cfg: Optional[QcbmConfig] = None, **overrides) -> TrainReport:
    """Fit the circuit's Born distribution to ``target`` with CMA-ES.

    The model PMF is either the exact statevector probabilities or, with
    ``exact=False``, a histogram of ``shots`` samples seeded per
    (run seed, generation, member).
    """
    cfg = cfg or QcbmConfig()
    for key, val in overrides.items():
        setattr(cfg, key, val)
    t = _as_probs(target)
    if t.shape[0] != 1 << seq.n:
        raise ValueError(f"target has {t.shape[0]} bins, circuit has 2**{seq.n}")
    root = np.random.SeedSequence(cfg.seed)
    init_seed, cma_seed, shot_seed = root.spawn(3)
    if cfg.init_params is not None:
        x0 = np.asarray(cfg.init_params, dtype=float)
        if x0.shape != (seq.param_count,):
            raise ValueError(f"init_params has shape {x0.shape}, circuit needs {seq.param_count}")
    else:
        x0 = initial_params(seq.param_count, init_seed)
    loss = _KLObjective(t, cfg.kl_eps)
    generation = [0]

    def model_rows(thetas):
        if cfg.exact:
            return eval_population(seq, thetas, threads=cfg.threads, as_array=True)
        gen_seed = [int(shot_seed.generate_state(1)[0]), generation[0]]
        generation[0] += 1
        return eval_population(seq, thetas, shots=cfg.shots, seed=gen_seed,
                               threads=cfg.threads, noise=cfg.noise, as_array=True)

    def objective(thetas):
        return loss(model_rows(thetas))

    # in sampled mode the initial evaluation consumes shot-seed slot 0
    initial = float(objective(x0[None, :])[0])
    if cfg.max_evals == 0:
        return TrainReport(best_params=x0, initial_kl=initial)
    report = cmaes_minimize(objective, x0, cfg.init_sigma, cfg.popsize, cfg.max_evals,
                            seed=cma_seed, batch=True)
    report.initial_kl = initial
    return report


def model_pmf(seq: GateSequence, params) -> Pmf:
    return exact_probs(seq, params)


def infer(seq: GateSequence, best_params, n_samples: int, seed=None,
          transform: Optional[Transform] = None, noise: Optional[NoiseSpec] = None):
    """Draw samples from a trained model.

    Without a transform the raw bitstring multiset is returned. With one, each
    sample is decoded to its grid-cell center and mapped back to data space.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    q = sample(seq, best_params, n_samples, seed, noise)
    if transform is None:
        return q
    m = transform.dims
    if seq.n % m:
        raise ValueError(f"{seq.n} qubits cannot be split over {m} dimensions")
    return inverse(transform, cell_centers(q.to_indices(), seq.n, m))


def sampled_kl(target, q: SampleMultiset, eps: float = KL_EPS) -> float:
    return kl_divergence(target, q.empirical_pmf(), eps)
