"""(mu/mu_w, lambda)-CMA-ES with cumulative step-size adaptation.

Strategy parameters follow the usual published defaults as functions of the
dimension and the population size. Only complete generations are evaluated,
so ``max_evals // popsize`` generations run at most.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

SIGMA_FLOOR = 1e-12


class OptimizerError(RuntimeError):
    pass


@dataclass
class TrainReport:
    best_params: np.ndarray
    loss_history: list = field(default_factory=list)  # (evaluations, best-so-far)
    final_kl: float = float("nan")
    evaluations_used: int = 0
    initial_kl: float = float("nan")

    def to_dict(self) -> dict:
        return {
            "best_params": [float(v) for v in self.best_params],
            "loss_history": [[int(e), float(v)] for e, v in self.loss_history],
            "final_kl": float(self.final_kl),
            "initial_kl": float(self.initial_kl),
            "evaluations_used": int(self.evaluations_used),
        }

    def history_csv(self) -> str:
        return "evaluations,kl\n" + "".join(f"{e},{v!r}\n" for e, v in self.loss_history)


@dataclass
class CmaesState:
    mean: np.ndarray
    sigma: float
    covariance: np.ndarray
    p_sigma: np.ndarray
    p_c: np.ndarray
    popsize: int
    generation: int = 0


class CMAES:
    """Ask/tell interface; ``minimize`` drives it against an objective."""

    def __init__(self, x0, sigma0: float, popsize: Optional[int] = None, seed=None):
        x0 = np.asarray(x0, dtype=float)
        if x0.ndim != 1 or x0.size == 0:
            raise ValueError("x0 must be a non-empty vector")
        if not sigma0 > 0:
            raise ValueError(f"sigma0 must be positive, got {sigma0}")
        dim = x0.size
        lam = popsize if popsize is not None else 4 + int(3 * np.log(dim))
        if lam < 4:
            raise ValueError(f"popsize must be >= 4, got {lam}")
        self.dim, self.lam = dim, lam
        self.mu = lam // 2
        w = np.log(self.mu + 0.5) - np.log(np.arange(1, self.mu + 1))
        self.weights = w / w.sum()
        self.mueff = 1.0 / np.sum(self.weights ** 2)
        self.cs = (self.mueff + 2) / (dim + self.mueff + 5)
        self.ds = 1 + 2 * max(0.0, np.sqrt((self.mueff - 1) / (dim + 1)) - 1) + self.cs
        self.cc = (4 + self.mueff / dim) / (dim + 4 + 2 * self.mueff / dim)
        self.c1 = 2 / ((dim + 1.3) ** 2 + self.mueff)
        self.cmu = min(1 - self.c1,
                       2 * (self.mueff - 2 + 1 / self.mueff) / ((dim + 2) ** 2 + self.mueff))
        self.chi_n = np.sqrt(dim) * (1 - 1 / (4 * dim) + 1 / (21 * dim ** 2))
        self.rng = np.random.default_rng(seed)
        self.state = CmaesState(x0.copy(), float(sigma0), np.eye(dim),
                                np.zeros(dim), np.zeros(dim), lam)
        self._eig()

    def _eig(self):
        c = self.state.covariance
        vals, vecs = np.linalg.eigh(c)
        vals = np.maximum(vals, 1e-300)
        self._b, self._d = vecs, np.sqrt(vals)
        self._invsqrt = (vecs / self._d) @ vecs.T

    def ask(self) -> np.ndarray:
        z = self.rng.standard_normal((self.lam, self.dim))
        y = (z * self._d) @ self._b.T
        return self.state.mean + self.state.sigma * y

    def tell(self, candidates: np.ndarray, fitness: np.ndarray):
        st = self.state
        order = np.argsort(fitness, kind="stable")[: self.mu]
        y = (candidates[order] - st.mean) / st.sigma
        y_w = self.weights @ y
        st.mean = st.mean + st.sigma * y_w
        st.generation += 1

        st.p_sigma = ((1 - self.cs) * st.p_sigma
                      + np.sqrt(self.cs * (2 - self.cs) * self.mueff) * (self._invsqrt @ y_w))
        ps_norm = np.linalg.norm(st.p_sigma)
        h_sigma = (ps_norm / np.sqrt(1 - (1 - self.cs) ** (2 * st.generation))
                   < (1.4 + 2 / (self.dim + 1)) * self.chi_n)
        st.p_c = (1 - self.cc) * st.p_c + h_sigma * np.sqrt(self.cc * (2 - self.cc) * self.mueff) * y_w

        delta = (1 - h_sigma) * self.cc * (2 - self.cc)
        rank_mu = (y.T * self.weights) @ y
        c = ((1 - self.c1 - self.cmu + self.c1 * delta) * st.covariance
             + self.c1 * np.outer(st.p_c, st.p_c) + self.cmu * rank_mu)
        st.covariance = (c + c.T) / 2
        st.sigma *= np.exp((self.cs / self.ds) * (ps_norm / self.chi_n - 1))
        self._eig()


def _finite(values) -> np.ndarray:
    f = np.asarray(values, dtype=float).reshape(-1)
    return np.where(np.isfinite(f), f, np.inf)


def cmaes_minimize(objective: Callable, x0, sigma0: float, popsize: Optional[int] = None,
                   max_evals: int = 1000, seed=None, batch: bool = False,
                   callback: Optional[Callable] = None) -> TrainReport:
    """Minimize ``objective`` and return the best candidate ever evaluated.

    With ``batch=True`` the objective receives the whole ``(popsize, dim)``
    generation and must return one value per row. Non-finite values rank last;
    a generation with no finite value aborts the run.
    """
    es = CMAES(x0, sigma0, popsize, seed)
    if max_evals < es.lam:
        raise ValueError(f"max_evals={max_evals} is smaller than popsize={es.lam}")
    best_x, best_f = es.state.mean.copy(), np.inf
    report = TrainReport(best_params=best_x)
    evals = 0
    while evals + es.lam <= max_evals and es.state.sigma >= SIGMA_FLOOR:
        cand = es.ask()
        if batch:
            fit = _finite(objective(cand))
        else:
            fit = _finite([objective(x) for x in cand])
        if fit.shape != (es.lam,):
            raise OptimizerError(f"objective returned {fit.shape[0]} values for {es.lam} candidates")
        if not np.isfinite(fit).any():
            raise OptimizerError(f"generation {es.state.generation}: every candidate is non-finite")
        evals += es.lam
        i = int(np.argmin(fit))
        if fit[i] < best_f:
            best_f, best_x = float(fit[i]), cand[i].copy()
        report.loss_history.append((evals, best_f))
        es.tell(cand, fit)
        if callback is not None:
            callback(es)
    report.best_params = best_x
    report.final_kl = best_f
    report.evaluations_used = evals
    return report
