"""Dataset generators: cardinality-constrained bitstrings and 2-D point clouds."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from itertools import combinations
from math import comb, floor
from pathlib import Path

import numpy as np

from .datatypes import BitstringSet, PointCloud

X_NOISE = 0.05
O_RADIUS = 0.7
O_NOISE = 0.05
GAUSS_SIGMA = 0.1
GAUSS_RING = 0.6


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class DiscreteDataset:
    n: int
    k: int
    alpha: float
    solution_set: BitstringSet
    train_set: BitstringSet


def hamming_weight_strings(n: int, k: int) -> list[str]:
    """All n-bit strings with exactly k ones, in increasing index order."""
    out = []
    for ones in combinations(range(n), k):
        bits = ["0"] * n
        for i in ones:
            bits[i] = "1"
        out.append("".join(bits))
    return sorted(out)


def train_size(alpha: float, solution_size: int) -> int:
    # round half up, never below one
    return max(1, floor(alpha * solution_size + 0.5))


def make_discrete(n: int, k: int, alpha: float, seed=None) -> DiscreteDataset:
    if n < 1 or n % 2:
        raise DatasetError(f"n must be a positive even integer, got {n}")
    if not 0 <= k <= n:
        raise DatasetError(f"k must be in [0, {n}], got {k}")
    if not 0 < alpha <= 1:
        raise DatasetError(f"alpha must be in (0, 1], got {alpha}")
    solution = hamming_weight_strings(n, k)
    assert len(solution) == comb(n, k)
    size = train_size(alpha, len(solution))
    if size < 1 or size > len(solution):
        raise DatasetError("training set is empty after rounding")
    rng = np.random.default_rng(seed)
    picked = rng.choice(len(solution), size=size, replace=False)
    train = [solution[i] for i in picked]
    return DiscreteDataset(n, k, alpha, BitstringSet(n, solution), BitstringSet(n, train))


def _check_count(num_points):
    if num_points < 1:
        raise DatasetError(f"num_points must be >= 1, got {num_points}")


def make_x(num_points: int, seed=None) -> PointCloud:
    """Points along both diagonals of [-1, 1]^2 with Gaussian jitter."""
    _check_count(num_points)
    rng = np.random.default_rng(seed)
    t = rng.uniform(-1.0, 1.0, num_points)
    sign = np.where(rng.random(num_points) < 0.5, 1.0, -1.0)
    pts = np.column_stack([t, sign * t])
    pts += rng.normal(0.0, X_NOISE, pts.shape)
    return PointCloud(pts)


def make_o(num_points: int, seed=None) -> PointCloud:
    _check_count(num_points)
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2 * np.pi, num_points)
    r = O_RADIUS + rng.normal(0.0, O_NOISE, num_points)
    return PointCloud(np.column_stack([r * np.cos(theta), r * np.sin(theta)]))


def make_mixed_gaussians(num_points: int, n_modes: int = 4, seed=None) -> PointCloud:
    _check_count(num_points)
    if n_modes < 1:
        raise DatasetError(f"n_modes must be >= 1, got {n_modes}")
    rng = np.random.default_rng(seed)
    angles = 2 * np.pi * np.arange(n_modes) / n_modes
    centers = GAUSS_RING * np.column_stack([np.cos(angles), np.sin(angles)])
    which = rng.integers(0, n_modes, num_points)
    return PointCloud(centers[which] + rng.normal(0.0, GAUSS_SIGMA, (num_points, 2)))


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_csv(path, dims: int) -> PointCloud:
    """Read a comma-separated point cloud; a non-numeric first row is a header."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = [(i, r) for i, r in enumerate(csv.reader(fh), start=1) if any(c.strip() for c in r)]
    if rows and not all(_is_number(c) for c in rows[0][1]):
        rows = rows[1:]
    if not rows:
        raise DatasetError(f"{path}: empty dataset")
    points = []
    for lineno, row in rows:
        if len(row) != dims:
            raise DatasetError(f"{path}: row {lineno} has {len(row)} columns, expected {dims}")
        try:
            points.append([float(c) for c in row])
        except ValueError:
            raise DatasetError(f"{path}: row {lineno} is not numeric: {row}") from None
    return PointCloud(np.array(points))
