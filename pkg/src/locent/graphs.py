"""Simple undirected graphs on at most 64 nodes, stored as neighbour bitmasks.

Node sets are integers with bit ``i`` standing for node ``i``.  Indices are
0-based everywhere inside the library; the JSON graph format and the CLI use
1-based labels.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

MAX_NODES = 64


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(nodes: Iterable[int]) -> int:
    m = 0
    for i in nodes:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph.

    ``adj[i]`` is the neighbour bitmask of node ``i``.
    """

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_NODES:
            raise ValueError(f"node count must be in 1..{MAX_NODES}, got {self.n}")
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match node count")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"node {i} has a neighbour out of range")
            if row >> i & 1:
                raise ValueError(f"self-loop on node {i}")
            for j in bits(row):
                if not self.adj[j] >> i & 1:
                    raise ValueError(f"asymmetric adjacency between {i} and {j}")

    def neighbors(self, i: int) -> list[int]:
        return bits(self.adj[self._check(i)])

    def degree(self, i: int) -> int:
        return bin(self.adj[self._check(i)]).count("1")

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[self._check(i)] >> self._check(j) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in bits(self.adj[i]) if j > i]

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        for i, j in self.edges():
            a[i, j] = a[j, i] = 1
        return a

    def is_connected(self) -> bool:
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            for i in bits(frontier):
                nxt |= self.adj[i]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.n) - 1

    def induced(self, nodes: Sequence[int]) -> "Graph":
        """Subgraph on ``nodes``, relabelled 0..len(nodes)-1 in the given order."""
        pos = {v: k for k, v in enumerate(nodes)}
        adj = []
        for v in nodes:
            adj.append(mask_of(pos[u] for u in self.neighbors(v) if u in pos))
        return Graph(len(nodes), tuple(adj))

    def _check(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise ValueError(f"node {i} out of range for graph on {self.n} nodes")
        return i


def from_edge_list(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from 0-based unordered pairs; duplicates collapse."""
    if not 1 <= n <= MAX_NODES:
        raise ValueError(f"node count must be in 1..{MAX_NODES}, got {n}")
    adj = [0] * n
    for i, j in edges:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i}, {j}) out of range for {n} nodes")
        if i == j:
            raise ValueError(f"self-loop edge ({i}, {j})")
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return Graph(n, tuple(adj))


def from_adjacency(a) -> Graph:
    a = np.asarray(a)
    n = a.shape[0]
    return from_edge_list(n, [(i, j) for i in range(n) for j in range(i + 1, n) if a[i, j]])


def as_region(members: Iterable[int], n: int, min_size: int = 1) -> tuple[int, ...]:
    """Validate a region and return it as a sorted tuple."""
    r = tuple(sorted(members))
    if len(r) < min_size:
        raise ValueError(f"region needs at least {min_size} member(s), got {len(r)}")
    if len(set(r)) != len(r):
        raise ValueError(f"region has repeated members: {r}")
    if r and not (0 <= r[0] and r[-1] < n):
        raise ValueError(f"region {r} out of range for {n} nodes")
    return r


def complement(region: Sequence[int], n: int) -> tuple[int, ...]:
    s = set(region)
    return tuple(i for i in range(n) if i not in s)


def local_complement(g: Graph, i: int) -> Graph:
    """Toggle every edge between two neighbours of ``i``."""
    nb = g.neighbors(i)
    nmask = g.adj[i]
    adj = list(g.adj)
    for j in nb:
        # j is not its own neighbour, so the toggle never creates a self-loop
        adj[j] ^= nmask & ~(1 << j)
    return Graph(g.n, tuple(adj))


def apply_lc_sequence(g: Graph, seq: Iterable[int]) -> Graph:
    for i in seq:
        g = local_complement(g, i)
    return g


@dataclass(frozen=True)
class AdjacencyBlocks:
    """Block decomposition of the adjacency matrix around a region.

    With nodes relabelled as ``order = omega + complement``, the full matrix is
    ``[[gamma_omega, gamma.T], [gamma, gamma_bar]]``.
    """

    omega: tuple[int, ...]
    rest: tuple[int, ...]
    gamma_omega: np.ndarray
    gamma_bar: np.ndarray
    gamma: np.ndarray
    boundary: tuple[int, ...]

    @property
    def order(self) -> tuple[int, ...]:
        return self.omega + self.rest

    @property
    def boundary_edges(self) -> list[tuple[int, int]]:
        """Links between the region and the rest, as (region node, outside node)."""
        return [
            (self.omega[c], self.rest[r])
            for r in range(len(self.rest))
            for c in range(len(self.omega))
            if self.gamma[r, c]
        ]

    def reassemble(self) -> np.ndarray:
        """Adjacency matrix in the original node labelling."""
        top = np.hstack([self.gamma_omega, self.gamma.T])
        bottom = np.hstack([self.gamma, self.gamma_bar])
        permuted = np.vstack([top, bottom])
        n = len(self.order)
        out = np.zeros((n, n), dtype=permuted.dtype)
        idx = np.array(self.order)
        out[np.ix_(idx, idx)] = permuted
        return out


def adjacency_blocks(g: Graph, omega: Iterable[int]) -> AdjacencyBlocks:
    om = as_region(omega, g.n)
    rest = complement(om, g.n)
    a = g.adjacency_matrix()
    gamma = a[np.ix_(rest, om)] if rest else np.zeros((0, len(om)), dtype=a.dtype)
    boundary = tuple(r for k, r in enumerate(rest) if gamma[k].any())
    return AdjacencyBlocks(
        omega=om,
        rest=rest,
        gamma_omega=a[np.ix_(om, om)],
        gamma_bar=a[np.ix_(rest, rest)] if rest else np.zeros((0, 0), dtype=a.dtype),
        gamma=gamma,
        boundary=boundary,
    )


@dataclass(frozen=True)
class NeighborhoodClasses:
    """Neighbours of an edge (a, b), split by which endpoint they touch.

    ``type1`` holds the members whose noise can flip a Z-measurement outcome;
    each class is split into its type-1 and type-2 parts by the ``*_counts``
    helpers.
    """

    a: int
    b: int
    tilde_a: tuple[int, ...]
    tilde_b: tuple[int, ...]
    tilde_ab: tuple[int, ...]
    type1: frozenset[int] = frozenset()

    @property
    def n_a(self) -> int:
        return len(self.tilde_a)

    @property
    def n_b(self) -> int:
        return len(self.tilde_b)

    @property
    def n_ab(self) -> int:
        return len(self.tilde_ab)

    def type1_counts(self) -> tuple[int, int, int]:
        """(n_a, n_ab, n_b) restricted to type-1 qubits."""
        t = self.type1
        return (
            sum(1 for v in self.tilde_a if v in t),
            sum(1 for v in self.tilde_ab if v in t),
            sum(1 for v in self.tilde_b if v in t),
        )

    def split(self, cls: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
        members = getattr(self, f"tilde_{cls}")
        return (
            tuple(v for v in members if v in self.type1),
            tuple(v for v in members if v not in self.type1),
        )


def neighborhood_partition(
    g: Graph, a: int, b: int, type1: Iterable[int] = ()
) -> NeighborhoodClasses:
    if not g.has_edge(a, b):
        raise ValueError(f"nodes {a} and {b} are not adjacent")
    ends = (1 << a) | (1 << b)
    na = g.adj[a] & ~ends
    nb = g.adj[b] & ~ends
    return NeighborhoodClasses(
        a=a,
        b=b,
        tilde_a=tuple(bits(na & ~nb)),
        tilde_b=tuple(bits(nb & ~na)),
        tilde_ab=tuple(bits(na & nb)),
        type1=frozenset(type1),
    )


def shortest_path(g: Graph, a: int, b: int) -> list[int]:
    """Shortest a-b path, lexicographically smallest among shortest ones."""
    dist = [-1] * g.n
    dist[b] = 0
    queue = deque([b])
    while queue:
        v = queue.popleft()
        for u in g.neighbors(v):
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue.append(u)
    if dist[a] < 0:
        raise ValueError(f"no path between {a} and {b}")
    path = [a]
    v = a
    while v != b:
        v = min(u for u in g.neighbors(v) if dist[u] == dist[v] - 1)
        path.append(v)
    return path


def connect_region(g: Graph, omega: Sequence[int]) -> tuple[Graph, list[int]]:
    """Local complementations that create the edge between a two-node region.

    The sequence is the interior of the lexicographically smallest shortest
    path from the lower-indexed member, applied starting next to it.
    """
    region = as_region(omega, g.n, min_size=2)
    if len(region) != 2:
        raise ValueError("connect_region expects a region of exactly two nodes")
    a, b = region
    if not g.is_connected():
        raise ValueError("graph is not connected")
    if g.has_edge(a, b):
        return g, []
    seq = shortest_path(g, a, b)[1:-1]
    out = apply_lc_sequence(g, seq)
    assert out.has_edge(a, b)
    return out, seq


def linear_chain(n_l: int, bulk: bool = False) -> tuple[Graph, int, int]:
    """Path a - 1 - ... - n_l - b, with one pendant on each end when ``bulk``.

    Returns the graph and the indices of a and b.  Node layout is left to
    right: ``[x,] a, 1..n_l, b[, y]``.
    """
    if n_l < 1:
        raise ValueError("n_l must be at least 1")
    n = n_l + 2 + (2 if bulk else 0)
    g = from_edge_list(n, [(i, i + 1) for i in range(n - 1)])
    a = 1 if bulk else 0
    return g, a, a + n_l + 1


def random_connected_graph(n: int, rng: np.random.Generator, p: float = 0.5) -> Graph:
    """Random spanning tree plus independent extra edges."""
    order = rng.permutation(n)
    edges = set()
    for k in range(1, n):
        j = order[rng.integers(k)]
        edges.add(tuple(sorted((int(order[k]), int(j)))))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.add((i, j))
    return from_edge_list(n, sorted(edges))


def load_graph(path) -> Graph:
    """Read ``{"n": int, "edges": [[i, j], ...]}`` with 1-based labels."""
    data = json.loads(Path(path).read_text())
    return graph_from_json(data)


def graph_from_json(data: dict) -> Graph:
    n = int(data["n"])
    edges = []
    for e in data["edges"]:
        i, j = int(e[0]), int(e[1])
        if i < 1 or j < 1:
            raise ValueError(f"graph file labels are 1-based, got edge {e}")
        edges.append((i - 1, j - 1))
    return from_edge_list(n, edges)


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [[i + 1, j + 1] for i, j in g.edges()]}


def all_connected_graphs(n: int) -> list[Graph]:
    """Every connected labelled graph on ``n`` nodes (small n only)."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    for m in range(1 << len(pairs)):
        g = from_edge_list(n, [p for k, p in enumerate(pairs) if m >> k & 1])
        if g.is_connected():
            out.append(g)
    return out
