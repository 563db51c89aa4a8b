"""MinMax and probability-integral transforms, and grid discretization to PMFs.

Bit layout: with ``m`` dimensions on ``n`` qubits each dimension gets an
``n/m``-bit group, dimension 0 owning the most significant group.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import rankdata

from .datatypes import BitstringSet, PointCloud, Pmf, bits_to_index

KINDS = ("minmax", "pit")


class TransformError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Transform:
    kind: str
    lo: Optional[np.ndarray] = None
    hi: Optional[np.ndarray] = None
    # pit: one sorted column per dimension
    sorted_values: Optional[np.ndarray] = None

    @property
    def dims(self) -> int:
        return len(self.lo) if self.kind == "minmax" else self.sorted_values.shape[1]


def fit_forward(kind: str, cloud: PointCloud) -> tuple[Transform, PointCloud]:
    x = cloud.points
    if kind == "minmax":
        lo, hi = x.min(axis=0), x.max(axis=0)
        for d in range(x.shape[1]):
            if hi[d] <= lo[d]:
                raise TransformError(f"dimension {d} is degenerate (min == max == {lo[d]})")
        return Transform("minmax", lo=lo, hi=hi), PointCloud((x - lo) / (hi - lo))
    if kind == "pit":
        n_pts = x.shape[0]
        if n_pts < 2:
            raise TransformError("pit needs at least 2 points per dimension")
        for d in range(x.shape[1]):
            if np.ptp(x[:, d]) == 0:
                raise TransformError(f"dimension {d} is degenerate (all values equal)")
        # mid-rank empirical CDF keeps outputs strictly inside (0, 1)
        u = (rankdata(x, method="average", axis=0) - 0.5) / n_pts
        return Transform("pit", sorted_values=np.sort(x, axis=0)), PointCloud(u)
    raise TransformError(f"unknown transform {kind!r}")


def inverse(transform: Transform, cloud: PointCloud) -> PointCloud:
    u = cloud.points
    if u.shape[1] != transform.dims:
        raise TransformError(f"expected {transform.dims} dimensions, got {u.shape[1]}")
    if (u < 0).any() or (u > 1).any():
        raise TransformError("inverse transform needs inputs within [0, 1]")
    if transform.kind == "minmax":
        return PointCloud(transform.lo + u * (transform.hi - transform.lo))
    sv = transform.sorted_values
    knots = (np.arange(sv.shape[0]) + 0.5) / sv.shape[0]
    cols = [np.interp(u[:, d], knots, sv[:, d]) for d in range(sv.shape[1])]
    return PointCloud(np.column_stack(cols))


def _bits_per_dim(n: int, m: int) -> int:
    if n < 1 or n % m:
        raise TransformError(f"n={n} is not divisible by the {m} dimensions")
    return n // m


def grid_indices(cloud: PointCloud, n: int) -> np.ndarray:
    u = cloud.points
    m = u.shape[1]
    b = _bits_per_dim(n, m)
    cells = 1 << b
    bins = np.clip(np.floor(u * cells).astype(np.int64), 0, cells - 1)
    idx = np.zeros(u.shape[0], dtype=np.int64)
    for d in range(m):
        idx = (idx << b) | bins[:, d]
    return idx


def discretize(cloud: PointCloud, n: int) -> Pmf:
    counts = np.bincount(grid_indices(cloud, n), minlength=1 << n)
    return Pmf(counts / counts.sum())


def cell_centers(indices, n: int, m: int) -> PointCloud:
    """Map basis-state indices back to grid-cell centers in [0, 1]^m."""
    b = _bits_per_dim(n, m)
    idx = np.asarray(indices, dtype=np.int64)
    mask = (1 << b) - 1
    cols = [((idx >> (b * (m - 1 - d))) & mask) for d in range(m)]
    return PointCloud((np.column_stack(cols) + 0.5) / (1 << b))


def pmf_from_bitstring_set(bitset: BitstringSet, n: int) -> Pmf:
    if len(bitset) == 0:
        raise TransformError("bitstring set is empty")
    if bitset.n_bits != n:
        raise TransformError(f"bitstrings have {bitset.n_bits} bits, expected {n}")
    probs = np.zeros(1 << n)
    probs[[bits_to_index(s) for s in bitset.members]] = 1.0 / len(bitset)
    return Pmf(probs)
