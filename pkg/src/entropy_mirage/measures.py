"""Entropy, entropy-rate, compression and graph-theoretic measures.

All entropies are in bits. Graph entropies always name the feature they
were computed over; there is no feature-free "entropy of a graph".
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Hashable, NamedTuple, Sequence

import numpy as np

from .graph import Graph, adjacency_matrix, degree_sequence, upper_triangle_bits

__all__ = [
    "Distribution",
    "EntropyReport",
    "LZResult",
    "RateProfile",
    "FEATURES",
    "shannon_entropy",
    "sequence_entropy",
    "binary_entropy",
    "block_entropy",
    "entropy_rate_profile",
    "adjacency_entropy",
    "degree_sequence_entropy",
    "lz_complexity",
    "clustering_coefficient",
    "transitivity",
    "degree_histogram",
    "graph_entropy",
]

FEATURES = ("adjacency", "degree-sequence", "block", "compression", "clustering")


@dataclass(frozen=True)
class Distribution:
    outcomes: tuple[tuple[Hashable, float], ...]

    def __post_init__(self):
        probs = [p for _, p in self.outcomes]
        if any(p < 0 for p in probs):
            raise ValueError("negative probability")
        if abs(math.fsum(probs) - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {math.fsum(probs)}, not 1")

    @classmethod
    def from_counts(cls, counts: dict[Hashable, int]) -> "Distribution":
        total = sum(counts.values())
        if total <= 0:
            raise ValueError("counts must have a positive total")
        return cls(tuple((k, c / total) for k, c in sorted(counts.items(), key=lambda kv: repr(kv[0]))))

    @classmethod
    def uniform(cls, k: int) -> "Distribution":
        return cls(tuple((i, 1.0 / k) for i in range(k)))

    @property
    def probabilities(self) -> list[float]:
        return [p for _, p in self.outcomes]


def shannon_entropy(d: Distribution) -> float:
    """``-sum p log2 p`` with ``0 log 0 = 0``."""
    return max(0.0, -math.fsum(p * math.log2(p) for p in d.probabilities if p > 0))


def sequence_entropy(values: Sequence[Hashable]) -> float:
    """Entropy of the empirical frequency distribution of ``values``."""
    if len(values) == 0:
        raise ValueError("empty sequence")
    return shannon_entropy(Distribution.from_counts(Counter(values)))


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


def _blocks(s: Sequence, L: int, overlapping: bool) -> list:
    step = 1 if overlapping else L
    stop = len(s) - L + 1
    if isinstance(s, str):
        return [s[i : i + L] for i in range(0, stop, step)]
    return [tuple(s[i : i + L]) for i in range(0, stop, step)]


def block_entropy(s: Sequence, L: int, *, overlapping: bool = False) -> float:
    """Entropy of the empirical distribution of length-``L`` blocks.

    Blocks are non-overlapping by default and a trailing partial block is
    dropped. ``overlapping=True`` slides the window one symbol at a time.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    if L > len(s):
        raise ValueError(f"block length {L} exceeds sequence length {len(s)}")
    return sequence_entropy(_blocks(s, L, overlapping))


class RateProfile(NamedTuple):
    rates: list[tuple[int, float]]
    argmin: int


def entropy_rate_profile(s: Sequence, Lmax: int) -> RateProfile:
    """Per-symbol block entropy ``H_L / L`` for ``L = 1..Lmax``.

    ``argmin`` is the smallest ``L`` attaining the minimum rate.
    """
    if Lmax < 1:
        raise ValueError("Lmax must be >= 1")
    if len(s) < Lmax:
        raise ValueError("sequence shorter than Lmax")
    rates = [(L, block_entropy(s, L) / L) for L in range(1, Lmax + 1)]
    best = min(r for _, r in rates)
    return RateProfile(rates, next(L for L, r in rates if r == best))


def adjacency_entropy(g: Graph) -> float:
    """Binary entropy of the edge frequency over the ``n(n-1)/2`` upper cells."""
    if g.node_count < 2:
        raise ValueError("adjacency entropy needs at least 2 nodes")
    return binary_entropy(g.edge_count / (g.node_count * (g.node_count - 1) / 2))


def degree_sequence_entropy(g: Graph) -> float:
    return sequence_entropy(degree_sequence(g))


class LZResult(NamedTuple):
    phrases: int
    compressed_bits: int


def lz_complexity(bits: str | Sequence[int]) -> LZResult:
    """LZ78 phrase count of a bit string and the size estimate
    ``phrases * (ceil(log2 phrases) + 1)``.

    An unfinished phrase at the end of the input counts as a phrase.
    """
    if not isinstance(bits, str):
        bits = "".join(str(int(b)) for b in bits)
    if not bits:
        raise ValueError("empty bit sequence")
    if bits.strip("01"):
        raise ValueError("lz_complexity expects a binary sequence")
    seen = set()
    phrases = 0
    start = 0
    for i in range(len(bits)):
        w = bits[start : i + 1]
        if w not in seen:
            seen.add(w)
            phrases += 1
            start = i + 1
    if start < len(bits):
        phrases += 1
    return LZResult(phrases, phrases * (math.ceil(math.log2(phrases)) + 1))


def _triangles_and_degrees(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    a = adjacency_matrix(g).astype(np.int64)
    tri = ((a @ a) * a).sum(axis=1) // 2
    return tri, a.sum(axis=1)


def clustering_coefficient(g: Graph) -> float:
    """Mean local clustering; nodes of degree < 2 contribute 0."""
    tri, deg = _triangles_and_degrees(g)
    pairs = deg * (deg - 1) / 2
    local = np.divide(tri, pairs, out=np.zeros(len(deg)), where=pairs > 0)
    return float(local.mean())


def transitivity(g: Graph) -> float:
    """Global clustering: 3 x triangles / connected triples."""
    tri, deg = _triangles_and_degrees(g)
    triples = (deg * (deg - 1) // 2).sum()
    return float(tri.sum() / triples) if triples else 0.0


def degree_histogram(g: Graph) -> list[tuple[int, int]]:
    return sorted(Counter(degree_sequence(g)).items())


@dataclass(frozen=True)
class EntropyReport:
    feature: str
    value: float
    parameters: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.feature not in FEATURES:
            raise ValueError(f"unknown feature {self.feature!r}")
        if self.value < 0:
            raise ValueError("measure values are non-negative")


def graph_entropy(g: Graph, feature: str, *, L: int | None = None) -> EntropyReport:
    """Measure ``g`` through one named description.

    ``block`` and ``compression`` operate on the row-major upper-triangle
    bit string; ``block`` reports ``H_L`` in bits, ``compression`` the LZ78
    size estimate divided by the raw length.
    """
    if feature == "adjacency":
        return EntropyReport(feature, adjacency_entropy(g), {"nodes": g.node_count})
    if feature == "degree-sequence":
        return EntropyReport(feature, degree_sequence_entropy(g), {"nodes": g.node_count})
    if feature == "block":
        if L is None:
            raise ValueError("block feature needs L")
        bits = upper_triangle_bits(g)
        return EntropyReport(feature, block_entropy(bits, L), {"L": L, "length": len(bits)})
    if feature == "compression":
        bits = upper_triangle_bits(g)
        lz = lz_complexity(bits)
        return EntropyReport(
            feature,
            lz.compressed_bits / len(bits),
            {"length": len(bits), "phrases": lz.phrases, "compressed_bits": lz.compressed_bits},
        )
    if feature == "clustering":
        return EntropyReport(feature, clustering_coefficient(g), {"transitivity": transitivity(g)})
    raise ValueError(f"unknown feature {feature!r}; expected one of {', '.join(FEATURES)}")
