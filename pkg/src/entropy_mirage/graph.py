"""Simple undirected labelled graphs and their lossless descriptions.

Nodes are labelled ``1..node_count``. Edges are stored normalized as
``(u, v)`` with ``u < v`` in a sorted tuple so iteration order is stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Graph",
    "SizeLimitError",
    "build_graph",
    "adjacency_matrix",
    "upper_triangle_bits",
    "graph_from_bits",
    "degree_sequence",
    "edge_density",
    "is_graphical",
    "realize_graph",
    "relabel",
    "are_isomorphic",
    "canonical_form",
    "format_edge_list",
    "parse_edge_list",
    "save_graph",
    "load_graph",
]

ISOMORPHISM_MAX_NODES = 30
CANONICAL_MAX_NODES = 16


class SizeLimitError(ValueError):
    """Raised when an exact search would exceed its practical size bound."""


@dataclass(frozen=True)
class Graph:
    node_count: int
    edges: tuple[tuple[int, int], ...]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbors(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.node_count + 1)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(s) for v, s in adj.items()}

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbors.get(u, ())


def build_graph(node_count: int, edge_list: Iterable[Sequence[int]]) -> Graph:
    """Validate ``edge_list`` and return the corresponding :class:`Graph`.

    Pairs are normalized to ``(min, max)``. Self-loops, out-of-range labels
    and repeated pairs (in either orientation) raise ``ValueError``.
    """
    if node_count < 1:
        raise ValueError(f"node_count must be positive, got {node_count}")
    seen: set[tuple[int, int]] = set()
    for pair in edge_list:
        u, v = (int(x) for x in pair)
        if not (1 <= u <= node_count and 1 <= v <= node_count):
            raise ValueError(f"edge ({u}, {v}) has a label outside 1..{node_count}")
        if u == v:
            raise ValueError(f"self-loop at node {u}")
        e = (u, v) if u < v else (v, u)
        if e in seen:
            raise ValueError(f"duplicate edge {e}")
        seen.add(e)
    return Graph(node_count, tuple(sorted(seen)))


def adjacency_matrix(g: Graph) -> np.ndarray:
    """Symmetric 0/1 ``uint8`` matrix; row/column ``i`` is node ``i + 1``."""
    a = np.zeros((g.node_count, g.node_count), dtype=np.uint8)
    if g.edges:
        idx = np.asarray(g.edges, dtype=np.intp) - 1
        a[idx[:, 0], idx[:, 1]] = 1
        a[idx[:, 1], idx[:, 0]] = 1
    return a


def upper_triangle_bits(g: Graph) -> str:
    """Row-major strict upper triangle of the adjacency matrix as '0'/'1'."""
    a = adjacency_matrix(g)
    iu = np.triu_indices(g.node_count, k=1)
    return (a[iu] + ord("0")).tobytes().decode("ascii")


def graph_from_bits(node_count: int, bits: str) -> Graph:
    """Inverse of :func:`upper_triangle_bits`."""
    expected = node_count * (node_count - 1) // 2
    if len(bits) != expected:
        raise ValueError(f"need {expected} bits for {node_count} nodes, got {len(bits)}")
    edges = []
    k = 0
    for u in range(1, node_count + 1):
        for v in range(u + 1, node_count + 1):
            b = bits[k]
            if b == "1":
                edges.append((u, v))
            elif b != "0":
                raise ValueError(f"invalid bit {b!r} at position {k}")
            k += 1
    return Graph(node_count, tuple(edges))


def degree_sequence(g: Graph) -> list[int]:
    """Degrees indexed by label order (``result[i]`` is node ``i + 1``)."""
    deg = [0] * g.node_count
    for u, v in g.edges:
        deg[u - 1] += 1
        deg[v - 1] += 1
    return deg


def edge_density(g: Graph) -> Fraction:
    if g.node_count < 2:
        raise ValueError("edge density needs at least 2 nodes")
    return Fraction(g.edge_count, g.node_count * (g.node_count - 1) // 2)


def is_graphical(seq: Sequence[int]) -> bool:
    """Erdős–Gallai test: True iff some simple graph has degree sequence ``seq``."""
    d = sorted((int(x) for x in seq), reverse=True)
    if d and d[-1] < 0:
        raise ValueError("degree sequence has a negative entry")
    n = len(d)
    if sum(d) % 2:
        return False
    lhs = 0
    for k in range(1, n + 1):
        lhs += d[k - 1]
        rhs = k * (k - 1) + sum(min(x, k) for x in d[k:])
        if lhs > rhs:
            return False
    return True


def realize_graph(seq: Sequence[int]) -> Graph:
    """Havel–Hakimi realization with node ``i + 1`` receiving degree ``seq[i]``.

    The node with the largest residual degree (smallest label on ties) is
    joined to the nodes with the next-largest residuals, again breaking ties
    by smallest label.
    """
    seq = [int(x) for x in seq]
    if not is_graphical(seq):
        raise ValueError(f"degree sequence is not graphical: {seq}")
    n = len(seq)
    if n == 0:
        raise ValueError("cannot realize an empty degree sequence")
    residual = {v: d for v, d in enumerate(seq, start=1)}
    edges = []
    while True:
        order = sorted((v for v in residual if residual[v] > 0), key=lambda v: (-residual[v], v))
        if not order:
            break
        hub, rest = order[0], order[1:]
        k = residual[hub]
        # graphicality guarantees len(rest) >= k
        for v in rest[:k]:
            edges.append((hub, v) if hub < v else (v, hub))
            residual[v] -= 1
        residual[hub] = 0
    return Graph(n, tuple(sorted(edges)))


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Apply ``node i -> perm[i - 1]``; ``perm`` is a permutation of ``1..n``."""
    if sorted(perm) != list(range(1, g.node_count + 1)):
        raise ValueError("perm must be a permutation of 1..node_count")
    return build_graph(g.node_count, ((perm[u - 1], perm[v - 1]) for u, v in g.edges))


def _refine_colors(graphs: Sequence[Graph]) -> list[dict[int, int]]:
    # Joint 1-WL colour refinement so that colours are comparable across graphs.
    colors = [{v: len(g.neighbors[v]) for v in g.neighbors} for g in graphs]
    n_classes = len({c for col in colors for c in col.values()})
    while True:
        sigs = [
            {v: (col[v], tuple(sorted(col[u] for u in g.neighbors[v]))) for v in g.neighbors}
            for g, col in zip(graphs, colors)
        ]
        ranking = {s: i for i, s in enumerate(sorted({s for sig in sigs for s in sig.values()}))}
        colors = [{v: ranking[s] for v, s in sig.items()} for sig in sigs]
        if len(ranking) == n_classes:
            return colors
        n_classes = len(ranking)


def are_isomorphic(g: Graph, h: Graph) -> bool:
    """Exact isomorphism test by backtracking over colour-refined candidates."""
    if max(g.node_count, h.node_count) > ISOMORPHISM_MAX_NODES:
        raise SizeLimitError(f"isomorphism search is limited to {ISOMORPHISM_MAX_NODES} nodes")
    if g.node_count != h.node_count or g.edge_count != h.edge_count:
        return False
    if sorted(degree_sequence(g)) != sorted(degree_sequence(h)):
        return False
    cg, ch = _refine_colors([g, h])
    if sorted(cg.values()) != sorted(ch.values()):
        return False

    by_color: dict[int, list[int]] = {}
    for v, c in ch.items():
        by_color.setdefault(c, []).append(v)

    # Visit nodes so that each one has as many already-mapped neighbours as possible.
    order: list[int] = []
    remaining = set(g.neighbors)
    while remaining:
        placed = set(order)
        v = min(
            remaining,
            key=lambda x: (-len(g.neighbors[x] & placed), len(by_color[cg[x]]), x),
        )
        order.append(v)
        remaining.remove(v)

    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in by_color[cg[v]]:
            if w in used:
                continue
            if any((u in g.neighbors[v]) != (mapping[u] in h.neighbors[w]) for u in order[:i]):
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.remove(w)
        return False

    return extend(0)


def canonical_form(g: Graph) -> str:
    """Lexicographically smallest row-major upper-triangle bit string over all
    relabellings of ``g``.

    Positions are filled left to right. Fixing the node at position ``i``
    fixes row ``i`` once every later cell is split into non-neighbours
    followed by neighbours, so the search only branches between candidates
    that tie on the current row. Interchangeable twins are explored once and
    identical sub-searches are memoized.
    """
    if g.node_count > CANONICAL_MAX_NODES:
        raise SizeLimitError(f"canonical form is limited to {CANONICAL_MAX_NODES} nodes")
    nb = g.neighbors
    memo: dict[tuple[frozenset[int], ...], str] = {}

    def best(cells: tuple[frozenset[int], ...]) -> str:
        if not cells:
            return ""
        if cells in memo:
            return memo[cells]
        first = cells[0]
        reps: list[int] = []
        for v in sorted(first):
            if not any(nb[v] - {u} == nb[u] - {v} for u in reps):
                reps.append(v)
        options: list[tuple[str, tuple[frozenset[int], ...]]] = []
        for v in reps:
            row = []
            nxt = []
            for cell in ((first - {v}),) + cells[1:]:
                zeros = cell - nb[v]
                ones = cell & nb[v]
                row.append("0" * len(zeros) + "1" * len(ones))
                nxt.extend(c for c in (zeros, ones) if c)
            options.append(("".join(row), tuple(nxt)))
        top = min(r for r, _ in options)
        result = top + min(best(state) for r, state in options if r == top)
        memo[cells] = result
        return result

    return best((frozenset(nb),))


def format_edge_list(g: Graph) -> str:
    lines = [f"# nodes={g.node_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    """Parse the ``# nodes=N`` header plus one ``u v`` pair per line."""
    node_count = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            if key.strip() == "nodes":
                node_count = int(value)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {raw!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    if node_count is None:
        raise ValueError("missing '# nodes=N' header")
    return build_graph(node_count, pairs)


def save_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g), encoding="ascii")


def load_graph(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text(encoding="ascii"))

