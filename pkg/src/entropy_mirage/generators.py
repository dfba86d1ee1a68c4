"""Graph constructions: the ZK growth process, digit graphs and random baselines."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .digits import DigitStream
from .graph import Graph, build_graph, is_graphical
from .measures import sequence_entropy

__all__ = [
    "ZkStep",
    "ZkTrace",
    "zk_graph",
    "iter_zk_graphs",
    "zk_edge_count_formula",
    "zk_graph_randomized",
    "digit_graph",
    "er_graph",
    "er_graph_exact",
    "ba_graph",
    "ba_edge_count",
    "regular_ring_graph",
    "CorrelationMatrix",
    "correlated_pair",
    "quantized_degrees",
    "repair_to_graphical",
    "targeted_degree_sequence",
]


@dataclass(frozen=True)
class ZkStep:
    """State change made by one growth step.

    ``candidate`` is the node driven to degree ``max_degree + 1``; it had
    ``prior_degree`` before the step and received ``edges_added`` new links.
    ``node_count``, ``edge_count`` and ``max_multiplicity`` (largest number
    of nodes sharing one degree value) describe the graph after the step.
    """

    step: int
    max_degree: int
    candidate: int
    prior_degree: int
    edges_added: int
    node_count: int
    edge_count: int
    max_multiplicity: int


@dataclass(frozen=True)
class ZkTrace:
    graph: Graph
    steps: int
    records: tuple[ZkStep, ...]

    @property
    def edge_counts(self) -> list[int]:
        """Edge count after 0, 1, ..., ``steps`` growth steps."""
        return [1] + [r.edge_count for r in self.records]

    @property
    def node_counts(self) -> list[int]:
        return [2] + [r.node_count for r in self.records]

    @property
    def max_multiplicities(self) -> list[int]:
        return [2] + [r.max_multiplicity for r in self.records]


def _zk_grow(t: int) -> Iterator[tuple[dict[int, set[int]], ZkStep | None]]:
    # Yields the live adjacency after the seed and after every step.
    adj: dict[int, set[int]] = {1: {2}, 2: {1}}
    degree_counts = Counter({1: 2})
    max_degree = 1
    edge_count = 1
    yield adj, None

    def bump(v: int) -> None:
        d = len(adj[v])
        degree_counts[d - 1] -= 1
        if not degree_counts[d - 1]:
            del degree_counts[d - 1]
        degree_counts[d] += 1

    for step in range(1, t + 1):
        c = max_degree + 1
        prior = len(adj.get(c, ()))
        added = max_degree + 1 - prior
        for target in range(max_degree + 2, max_degree + 2 + added):
            for v in (c, target):
                if v not in adj:
                    adj[v] = set()
                    degree_counts[0] += 1
            adj[c].add(target)
            adj[target].add(c)
            bump(c)
            bump(target)
        edge_count += added
        max_degree = max(degree_counts)
        yield adj, ZkStep(
            step=step,
            max_degree=c - 1,
            candidate=c,
            prior_degree=prior,
            edges_added=added,
            node_count=len(adj),
            edge_count=edge_count,
            max_multiplicity=max(degree_counts.values()),
        )


def _freeze(adj: dict[int, set[int]]) -> Graph:
    return build_graph(max(adj), [(u, v) for u in adj for v in adj[u] if u < v])


def zk_graph(t: int) -> ZkTrace:
    """Grow the ZK graph for ``t`` steps from the single edge 1-2.

    Each step takes the current maximum degree ``M``, picks node ``c = M + 1``
    and links it to labels ``M + 2, M + 3, ...`` until ``c`` has degree
    ``M + 1``; labels that do not exist yet are created.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    records = []
    for adj, rec in _zk_grow(t):
        if rec is not None:
            records.append(rec)
    return ZkTrace(_freeze(adj), t, tuple(records))


def iter_zk_graphs(t_max: int) -> Iterator[tuple[int, Graph]]:
    """Yield ``(t, zk_graph(t).graph)`` for ``t = 0..t_max`` from a single run."""
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    for t, (adj, _) in enumerate(_zk_grow(t_max)):
        yield t, _freeze(adj)


def zk_edge_count_formula(t: int) -> int:
    """``sum_{k=1}^{t+2} floor(k / phi)`` with ``phi`` the golden ratio.

    ``floor(k / phi) = floor(k (sqrt 5 - 1) / 2)`` is evaluated exactly via
    the integer square root of ``5 k^2``.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    total = 0
    for k in range(1, t + 3):
        # k/phi = (sqrt(5k^2) - k)/2 and sqrt(5k^2) is irrational for k > 0
        total += (math.isqrt(5 * k * k) - k) // 2
    return total


def zk_graph_randomized(t: int, seed) -> Graph:
    """ZK growth with random tie-breaking.

    The candidate is drawn uniformly from the supportive (not yet converted)
    nodes of maximal degree. Its missing links go first to existing
    supportive nodes not already adjacent to it, in random order, then to
    fresh nodes.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    rng = np.random.default_rng(seed)
    adj: dict[int, set[int]] = {1: {2}, 2: {1}}
    core = {1}
    for _ in range(t):
        max_degree = max(len(a) for a in adj.values())
        supportive = [v for v in sorted(adj) if v not in core]
        top = max(len(adj[v]) for v in supportive)
        ties = [v for v in supportive if len(adj[v]) == top]
        c = ties[int(rng.integers(len(ties)))]
        need = max_degree + 1 - len(adj[c])
        eligible = [v for v in supportive if v != c and v not in adj[c]]
        eligible = [eligible[i] for i in rng.permutation(len(eligible))]
        chosen = eligible[:need]
        fresh = max(adj) + 1
        while len(chosen) < need:
            adj[fresh] = set()
            chosen.append(fresh)
            fresh += 1
        for v in chosen:
            adj[c].add(v)
            adj[v].add(c)
        core.add(c)
    return _freeze(adj)


def digit_graph(s: DigitStream, n: int, *, strict: bool = False) -> Graph:
    """Graph whose strict upper adjacency triangle is read from ``s`` row-major.

    By default exactly ``n(n-1)/2`` bits are consumed. With ``strict`` the
    stream fills a full ``n x n`` matrix (``n^2`` bits) and only the
    upper-triangle positions are kept.
    """
    if s.base != 2:
        raise ValueError("digit_graph needs a base-2 stream; binarize it first")
    if n < 1:
        raise ValueError("n must be positive")
    needed = n * n if strict else n * (n - 1) // 2
    if len(s.digits) < needed:
        raise ValueError(f"{needed} digits needed for n={n}, stream has {len(s.digits)}")
    edges = []
    k = 0
    for u in range(1, n + 1):
        if strict:
            k = (u - 1) * n + u
        for v in range(u + 1, n + 1):
            if s.digits[k]:
                edges.append((u, v))
            k += 1
    return build_graph(n, edges)


def er_graph(n: int, p: float, seed) -> Graph:
    """G(n, p): each pair present independently with probability ``p``."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    pairs = list(combinations(range(1, n + 1), 2))
    keep = rng.random(len(pairs)) < p
    return build_graph(n, [e for e, k in zip(pairs, keep) if k])


def er_graph_exact(n: int, m: int, seed) -> Graph:
    """G(n, m): uniform over simple graphs with ``n`` nodes and ``m`` edges."""
    pairs = list(combinations(range(1, n + 1), 2))
    if not 0 <= m <= len(pairs):
        raise ValueError(f"m must lie in [0, {len(pairs)}]")
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(len(pairs), size=m, replace=False))
    return build_graph(n, [pairs[i] for i in idx])


def ba_edge_count(n: int, m: int) -> int:
    return (m + 1) * m // 2 + m * (n - m - 1)


def ba_graph(n: int, m: int, seed) -> Graph:
    """Preferential attachment grown from the complete graph on ``m + 1`` nodes.

    Every new node links to ``m`` distinct existing nodes drawn without
    replacement with probability proportional to their current degree.
    """
    if m < 1 or n < m + 1:
        raise ValueError(f"need m >= 1 and n >= m + 1, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    degree = np.zeros(n, dtype=np.int64)
    edges = list(combinations(range(1, m + 2), 2))
    degree[: m + 1] = m
    for v in range(m + 1, n):
        weights = degree[:v] / degree[:v].sum()
        targets = rng.choice(v, size=m, replace=False, p=weights)
        for u in targets:
            edges.append((int(u) + 1, v + 1))
            degree[u] += 1
        degree[v] = m
    return build_graph(n, edges)


def regular_ring_graph(n: int, k: int) -> Graph:
    """Circulant graph: each node joined to its ``k/2`` nearest neighbours per side."""
    if k < 0 or k % 2:
        raise ValueError(f"k must be a non-negative even integer, got {k}")
    if n <= k:
        raise ValueError(f"need n > k, got n={n}, k={k}")
    edges = set()
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            edges.add((min(u, v) + 1, max(u, v) + 1))
    return build_graph(n, sorted(edges))


@dataclass(frozen=True)
class CorrelationMatrix:
    rows: tuple[tuple[float, float], tuple[float, float]]

    def __post_init__(self):
        if len(self.rows) != 2 or any(len(r) != 2 for r in self.rows):
            raise ValueError("correlation matrix must be 2x2")
        for r in self.rows:
            if abs(r[0] + r[1] - 1.0) > 1e-12:
                raise ValueError(f"row {r} does not sum to 1")

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float)

    def expected_correlation(self) -> float:
        a, b = self.as_array()
        return float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))


def correlated_pair(m: CorrelationMatrix, count: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``X1, X2`` i.i.d. standard normal and return ``M @ (X1, X2)``.

    The correlation of the outputs is the normalized inner product of the
    two rows of ``M``.
    """
    if count < 2:
        raise ValueError("count must be at least 2")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((2, count))
    y = m.as_array() @ x
    return y[0], y[1]


_TARGET_BASE_DEGREE = 2


def quantized_degrees(n: int, bins: int, theta: float, seed) -> list[int]:
    """Degrees ``2 + j`` with ``j`` drawn from ``P(j) ~ theta**j`` over ``bins`` values.

    Quantiles are stratified (``(rank + 0.5) / n``) so the degree multiset
    follows the distribution as closely as ``n`` allows; the ranks of a
    seeded normal sample decide which node receives which quantile.
    """
    weights = np.array([theta**j for j in range(bins)], dtype=float)
    cdf = np.cumsum(weights / weights.sum())
    cdf[-1] = 1.0
    y1, _ = correlated_pair(CorrelationMatrix(((1.0, 0.0), (0.0, 1.0))), n, seed)
    ranks = np.argsort(np.argsort(y1, kind="stable"), kind="stable")
    u = (ranks + 0.5) / n
    j = np.searchsorted(cdf, u, side="right")
    return [_TARGET_BASE_DEGREE + int(x) for x in j]


def repair_to_graphical(seq: Sequence[int]) -> list[int]:
    """Decrement maximal entries (lowest index first) until ``seq`` is graphical."""
    out = list(seq)
    if sum(out) % 2:
        out[out.index(max(out))] -= 1
    while not is_graphical(out):
        out[out.index(max(out))] -= 1
    return out


def targeted_degree_sequence(n: int, target_entropy: float, tol: float, seed, *, max_iter: int = 60) -> list[int]:
    """Graphical degree sequence whose empirical entropy is within ``tol`` of the target.

    For increasing bin counts the geometric parameter ``theta`` is bisected
    on the entropy of the repaired sequence; the first sequence within
    tolerance is returned.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not 0.0 <= target_entropy <= math.log2(n):
        raise ValueError(f"target entropy must lie in [0, log2 n = {math.log2(n):.4f}]")

    def attempt(bins: int, theta: float) -> tuple[float, list[int]]:
        seq = repair_to_graphical(quantized_degrees(n, bins, theta, seed))
        return sequence_entropy(seq), seq

    max_bins = n - _TARGET_BASE_DEGREE
    first = max(1, math.ceil(2.0**target_entropy - 1e-9))
    for bins in range(min(first, max_bins), max_bins + 1):
        lo, hi = 0.0, 1.0
        for theta in (lo, hi):
            h, seq = attempt(bins, theta)
            if abs(h - target_entropy) <= tol:
                return seq
        if attempt(bins, hi)[0] < target_entropy:
            continue
        for _ in range(max_iter):
            mid = (lo + hi) / 2
            h, seq = attempt(bins, mid)
            if abs(h - target_entropy) <= tol:
                return seq
            if h < target_entropy:
                lo = mid
            else:
                hi = mid
    raise ValueError(f"no graphical sequence within {tol} bits of {target_entropy} for n={n}")
