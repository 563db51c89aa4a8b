"""Dense statevector execution of gate sequences.

States are held as ``(K, 2**n)`` complex arrays so a whole population of
parameter vectors runs through each gate at once. All kernels are elementwise
numpy operations, so a given member's amplitudes do not depend on how many
other members share its batch, which keeps outputs identical for any thread
count or chunking.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .circuits import GateSequence
from .datatypes import Pmf, SampleMultiset

MAX_QUBITS = int(os.environ.get("QGENBENCH_MAX_QUBITS", 26))
# Amplitudes per batch chunk; bounds working memory at ~32 MiB of complex128.
_CHUNK_AMPLITUDES = 1 << 21
_INV_SQRT2 = 1 / np.sqrt(2.0)


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class NoiseSpec:
    readout_flip_prob: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.readout_flip_prob <= 0.5:
            raise ValueError(f"readout_flip_prob must be in [0, 0.5], got {self.readout_flip_prob}")


def default_threads() -> int:
    return max(1, int(os.environ.get("QGENBENCH_THREADS", 1)))


def _split(psi, n, q):
    v = psi.reshape(psi.shape[0], 1 << q, 2, 1 << (n - q - 1))
    return v[:, :, 0, :], v[:, :, 1, :]


def _split2(psi, n, a, b):
    """View with the two qubit axes exposed, lower index first."""
    lo, hi = min(a, b), max(a, b)
    v = psi.reshape(psi.shape[0], 1 << lo, 2, 1 << (hi - lo - 1), 2, 1 << (n - hi - 1))
    return v, lo == a


def _col(x):
    return x[:, None, None]


def _apply_1q(psi, n, q, m00, m01, m10, m11):
    s0, s1 = _split(psi, n, q)
    t0 = _col(m00) * s0 + _col(m01) * s1
    s1[...] = _col(m10) * s0 + _col(m11) * s1
    s0[...] = t0


def _apply_gate(psi, n, gate, theta):
    kind = gate.kind
    if kind == "H":
        s0, s1 = _split(psi, n, gate.wires[0])
        t0 = (s0 + s1) * _INV_SQRT2
        s1[...] = (s0 - s1) * _INV_SQRT2
        s0[...] = t0
    elif kind == "CNOT":
        c, t = gate.wires
        v, c_first = _split2(psi, n, c, t)
        if c_first:
            a, b = v[:, :, 1, :, 0, :], v[:, :, 1, :, 1, :]
        else:
            a, b = v[:, :, 0, :, 1, :], v[:, :, 1, :, 1, :]
        tmp = a.copy()
        a[...] = b
        b[...] = tmp
    elif kind == "RZ":
        s0, s1 = _split(psi, n, gate.wires[0])
        ph = np.exp(-0.5j * theta)
        s0 *= _col(ph)
        s1 *= _col(ph.conj())
    elif kind == "RX":
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        _apply_1q(psi, n, gate.wires[0], c, -1j * s, -1j * s, c)
    elif kind == "RY":
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        _apply_1q(psi, n, gate.wires[0], c, -s, s, c)
    elif kind == "RZZ":
        v, _ = _split2(psi, n, *gate.wires)
        ph = np.exp(-0.5j * theta)[:, None, None, None]
        v[:, :, 0, :, 0, :] *= ph
        v[:, :, 1, :, 1, :] *= ph
        v[:, :, 0, :, 1, :] *= ph.conj()
        v[:, :, 1, :, 0, :] *= ph.conj()
    elif kind == "CP":
        v, _ = _split2(psi, n, *gate.wires)
        v[:, :, 1, :, 1, :] *= np.exp(1j * theta)[:, None, None, None]
    else:
        raise SimulationError(f"unsupported gate {kind}")


def _check(seq: GateSequence, thetas: np.ndarray):
    if seq.n > MAX_QUBITS:
        raise SimulationError(f"{seq.n} qubits exceeds the budget of {MAX_QUBITS}")
    if thetas.ndim != 2 or thetas.shape[1] != seq.param_count:
        raise SimulationError(
            f"expected {seq.param_count} parameters per member, got shape {thetas.shape}")


def simulate_batch(seq: GateSequence, thetas) -> np.ndarray:
    """Final statevectors, one row per parameter vector in ``thetas``."""
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    _check(seq, thetas)
    n = seq.n
    psi = np.zeros((thetas.shape[0], 1 << n), dtype=np.complex128)
    psi[:, 0] = 1.0
    for gate in seq.gates:
        theta = thetas[:, gate.param_index] if gate.param_index is not None else None
        _apply_gate(psi, n, gate, theta)
    return psi


def probs_batch(seq: GateSequence, thetas) -> np.ndarray:
    psi = simulate_batch(seq, thetas)
    return psi.real ** 2 + psi.imag ** 2


def exact_probs(seq: GateSequence, params) -> Pmf:
    return Pmf(probs_batch(seq, np.asarray(params, dtype=float)[None, :])[0])


def _sample_indices(probs: np.ndarray, n: int, shots: int, rng, noise: Optional[NoiseSpec]):
    cdf = np.cumsum(probs)
    u = rng.random(shots) * cdf[-1]
    idx = np.minimum(np.searchsorted(cdf, u, side="right"), probs.shape[0] - 1)
    if noise is not None and noise.readout_flip_prob > 0:
        for q in range(n):
            flips = rng.random(shots) < noise.readout_flip_prob
            idx = idx ^ (flips.astype(np.int64) << (n - 1 - q))
    return idx.astype(np.int64)


def sample_from_probs(probs, shots: int, seed=None, noise: Optional[NoiseSpec] = None) -> SampleMultiset:
    probs = probs.probs if isinstance(probs, Pmf) else np.asarray(probs, dtype=float)
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    n = probs.shape[0].bit_length() - 1
    rng = np.random.default_rng(seed)
    return SampleMultiset.from_indices(n, _sample_indices(probs, n, shots, rng, noise))


def sample(seq: GateSequence, params, shots: int, seed=None,
           noise: Optional[NoiseSpec] = None) -> SampleMultiset:
    """Draw ``shots`` measurement outcomes i.i.d. from the exact output PMF."""
    return sample_from_probs(exact_probs(seq, params), shots, seed, noise)


def _empirical(probs, n, shots, seed, noise):
    rng = np.random.default_rng(seed)
    idx = _sample_indices(probs, n, shots, rng, noise)
    return np.bincount(idx, minlength=1 << n) / shots


def eval_population(seq: GateSequence, population: Sequence, shots: Optional[int] = None,
                    seed=None, threads: Optional[int] = None,
                    noise: Optional[NoiseSpec] = None, as_array: bool = False):
    """Evaluate K parameter vectors, returning one PMF per member in input order.

    With ``shots=None`` the exact probabilities are returned; otherwise each
    member's PMF is the empirical histogram of ``shots`` samples drawn with a
    seed derived from ``(seed, member index)``.
    """
    thetas = np.asarray(population, dtype=float)
    if thetas.ndim == 1:
        thetas = thetas[None, :]
    _check(seq, thetas)
    threads = default_threads() if threads is None else threads
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    k, n = thetas.shape[0], seq.n
    member_seeds = np.random.SeedSequence(seed).spawn(k) if shots is not None else None
    out = np.empty((k, 1 << n))
    chunk = max(1, _CHUNK_AMPLITUDES >> n)
    if threads > 1:
        chunk = min(chunk, -(-k // threads))
    bounds = [(i, min(i + chunk, k)) for i in range(0, k, chunk)]

    def work(lo, hi):
        try:
            probs = probs_batch(seq, thetas[lo:hi])
        except Exception as exc:
            raise SimulationError(f"population members {lo}..{hi - 1} failed: {exc}") from exc
        if shots is None:
            out[lo:hi] = probs
        else:
            for j in range(hi - lo):
                out[lo + j] = _empirical(probs[j], n, shots, member_seeds[lo + j], noise)

    if threads == 1 or len(bounds) == 1:
        for lo, hi in bounds:
            work(lo, hi)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for f in [pool.submit(work, lo, hi) for lo, hi in bounds]:
                f.result()
    if as_array:
        return out
    return [Pmf(row) for row in out]
