"""Value types shared between modules."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

PMF_ATOL = 1e-10


def bits_to_index(bits: str) -> int:
    return int(bits, 2)


def index_to_bits(index: int, n: int) -> str:
    return format(index, f"0{n}b")


@dataclass(frozen=True)
class BitstringSet:
    n_bits: int
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        for s in self.members:
            if len(s) != self.n_bits or set(s) - {"0", "1"}:
                raise ValueError(f"{s!r} is not a {self.n_bits}-bit string")

    def __len__(self):
        return len(self.members)

    def __contains__(self, item):
        return item in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def indices(self) -> np.ndarray:
        return np.array(sorted(bits_to_index(s) for s in self.members), dtype=np.int64)


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probability mass function over the ``2**n`` basis states."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        size = p.shape[0] if p.ndim == 1 else 0
        if size == 0 or size & (size - 1):
            raise ValueError(f"PMF length must be a power of two, got shape {p.shape}")
        if (p < 0).any():
            raise ValueError("PMF has negative entries")
        if abs(p.sum() - 1.0) > PMF_ATOL:
            raise ValueError(f"PMF sums to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def n(self) -> int:
        return self.probs.shape[0].bit_length() - 1

    def __len__(self):
        return self.probs.shape[0]

    def __eq__(self, other):
        return isinstance(other, Pmf) and np.array_equal(self.probs, other.probs)

    __hash__ = None


@dataclass(frozen=True)
class SampleMultiset:
    """Multiset ``Q`` of generated bitstrings, stored as counts."""

    n_bits: int
    counts: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        counts = dict(self.counts)
        for s, c in counts.items():
            if len(s) != self.n_bits:
                raise ValueError(f"{s!r} is not a {self.n_bits}-bit string")
            if c <= 0:
                raise ValueError(f"count for {s!r} must be positive, got {c}")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __len__(self):
        return self.total

    @classmethod
    def from_bitstrings(cls, n_bits: int, samples: Iterable[str]) -> "SampleMultiset":
        return cls(n_bits, Counter(samples))

    @classmethod
    def from_indices(cls, n_bits: int, indices) -> "SampleMultiset":
        values, counts = np.unique(np.asarray(indices, dtype=np.int64), return_counts=True)
        return cls(n_bits, {index_to_bits(int(v), n_bits): int(c) for v, c in zip(values, counts)})

    def to_indices(self) -> np.ndarray:
        """Sample indices in sorted order, each repeated by its count."""
        keys = sorted(self.counts)
        return np.repeat([bits_to_index(k) for k in keys],
                         [self.counts[k] for k in keys]).astype(np.int64)

    def empirical_pmf(self) -> Pmf:
        probs = np.zeros(2 ** self.n_bits)
        for s, c in self.counts.items():
            probs[bits_to_index(s)] += c
        return Pmf(probs / self.total)


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise ValueError(f"point cloud must be a non-empty (N, m) array, got {pts.shape}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dims(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def __eq__(self, other):
        return isinstance(other, PointCloud) and np.array_equal(self.points, other.points)

    __hash__ = None
