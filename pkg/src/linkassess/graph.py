"""Simple (un)directed graphs with canonical node indexing."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

log = logging.getLogger(__name__)

_SPLIT = re.compile(r"[,\s]+")


class GraphError(ValueError):
    pass


class EdgeListParseError(GraphError):
    def __init__(self, path, lineno: int, line: str):
        super().__init__(f"{path}:{lineno}: expected two node tokens, got {line!r}")
        self.lineno = lineno


@dataclass(frozen=True)
class NetworkStats:
    n: int
    m: int
    avg_clustering: float
    density: float


@dataclass(frozen=True, eq=False)
class Network:
    """An immutable simple graph.

    Nodes are kept in sorted order so that the integer index of a node only
    depends on the node set, never on the order edges were read. Edges are
    stored as index pairs; undirected edges are normalised to ``(i, j)`` with
    ``i < j``.
    """

    id: str
    directed: bool
    nodes: tuple[str, ...]
    edges: frozenset[tuple[int, int]]
    _index: dict = field(init=False, repr=False, compare=False)
    _out: tuple = field(init=False, repr=False, compare=False)
    _in: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {v: i for i, v in enumerate(self.nodes)}
        if len(index) != len(self.nodes):
            raise GraphError("duplicate node ids")
        n = len(self.nodes)
        out = [set() for _ in range(n)]
        inn = [set() for _ in range(n)]
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop on {self.nodes[u]!r}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError("edge endpoint outside node set")
            if not self.directed and u > v:
                raise GraphError("undirected edges must be stored as (low, high)")
            out[u].add(v)
            inn[v].add(u)
            if not self.directed:
                out[v].add(u)
                inn[u].add(v)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_out", tuple(frozenset(s) for s in out))
        object.__setattr__(self, "_in", tuple(frozenset(s) for s in inn))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str]], directed: bool = False,
                   id: str = "G", nodes: Iterable[str] = ()) -> "Network":
        """Build a network from node-id pairs, dropping self-loops and duplicates."""
        edges = list(edges)
        node_set = set(nodes)
        for u, v in edges:
            node_set.add(u)
            node_set.add(v)
        ordered = tuple(sorted(node_set))
        index = {v: i for i, v in enumerate(ordered)}
        pairs = set()
        for u, v in edges:
            if u == v:
                continue
            i, j = index[u], index[v]
            if not directed and i > j:
                i, j = j, i
            pairs.add((i, j))
        return cls(id=id, directed=directed, nodes=ordered, edges=frozenset(pairs))

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise GraphError(f"unknown node {v!r} in network {self.id!r}") from None

    def has_edge(self, u: str, v: str) -> bool:
        i, j = self.index(u), self.index(v)
        return j in self._out[i]

    def neighbor_indices(self, i: int, direction: str = "undirected") -> frozenset[int]:
        _check_direction(self, direction)
        return self._in[i] if direction == "in" else self._out[i]

    def edge_names(self) -> list[tuple[str, str]]:
        return sorted((self.nodes[u], self.nodes[v]) for u, v in self.edges)

    def adjacency(self) -> np.ndarray:
        """Dense 0/1 matrix with ``A[u, v] = 1`` for every edge u->v (symmetric if undirected)."""
        a = np.zeros((self.n, self.n), dtype=np.float64)
        if self.edges:
            idx = np.array(sorted(self.edges))
            a[idx[:, 0], idx[:, 1]] = 1.0
            if not self.directed:
                a[idx[:, 1], idx[:, 0]] = 1.0
        return a

    def max_edges(self) -> int:
        return max_edges(self.n, self.directed)

    def with_edges(self, extra: Iterable[tuple[int, int]], id: str | None = None) -> "Network":
        """Copy of this network with extra index-pair edges added (same node set)."""
        new = set(self.edges)
        for u, v in extra:
            if not self.directed and u > v:
                u, v = v, u
            new.add((u, v))
        return Network(id=id or self.id, directed=self.directed, nodes=self.nodes,
                       edges=frozenset(new))

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (self.id, self.directed, self.nodes, self.edges) == (
            other.id, other.directed, other.nodes, other.edges)

    def __hash__(self):
        return hash((self.id, self.directed, self.nodes, self.edges))


def max_edges(n: int, directed: bool) -> int:
    return n * (n - 1) if directed else n * (n - 1) // 2


def _check_direction(net: Network, direction: str) -> None:
    if direction not in ("undirected", "in", "out"):
        raise GraphError(f"unknown direction {direction!r}")
    if (direction == "undirected") == net.directed:
        kind = "directed" if net.directed else "undirected"
        raise GraphError(f"direction {direction!r} does not apply to {kind} network {net.id!r}")


def load_edge_list(path, directed: bool = False, id: str | None = None) -> Network:
    path = Path(path)
    edges = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = [t for t in _SPLIT.split(line) if t]
        if len(tokens) != 2:
            raise EdgeListParseError(path, lineno, raw)
        edges.append((tokens[0], tokens[1]))
    if not edges:
        raise GraphError(f"{path}: no edges")
    loops = sum(1 for u, v in edges if u == v)
    if loops:
        log.warning("%s: dropped %d self-loop(s)", path, loops)
    return Network.from_edges(edges, directed=directed, id=id or path.stem)


def write_edge_list(net: Network, path) -> None:
    lines = [f"{u} {v}" for u, v in net.edge_names()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def neighbors(net: Network, v: str, direction: str = "undirected") -> set[str]:
    """Neighborhood of ``v``: all neighbors, in-neighbors (sources) or out-neighbors (targets)."""
    idx = net.neighbor_indices(net.index(v), direction)
    return {net.nodes[i] for i in idx}


def density(net: Network) -> float:
    if net.n < 2:
        raise GraphError("density needs at least two nodes")
    return net.m / max_edges(net.n, net.directed)


def avg_clustering(net: Network) -> float:
    """Mean local clustering coefficient, directed graphs taken as undirected."""
    if net.n == 0:
        return 0.0
    nbrs = [net._out[i] | net._in[i] for i in range(net.n)]
    total = 0.0
    for i, nb in enumerate(nbrs):
        k = len(nb)
        if k < 2:
            continue
        links = sum(len(nbrs[j] & nb) for j in nb) / 2
        total += links / (k * (k - 1) / 2)
    return total / net.n


def stats(net: Network) -> NetworkStats:
    return NetworkStats(net.n, net.m, avg_clustering(net), density(net))


def _named_edges(net: Network) -> set:
    if net.directed:
        return {(net.nodes[u], net.nodes[v]) for u, v in net.edges}
    return {frozenset((net.nodes[u], net.nodes[v])) for u, v in net.edges}


def edge_overlap(a: Network, b: Network) -> int:
    if a.directed != b.directed:
        raise GraphError("cannot compare directed with undirected network")
    return len(_named_edges(a) & _named_edges(b))


def node_names(n: int) -> list[str]:
    width = len(str(max(n - 1, 0)))
    return [f"v{i:0{width}d}" for i in range(n)]


def random_graph(n: int, m: int, seed: int, directed: bool = False, id: str = "random") -> Network:
    """Uniform G(n, m): ``m`` distinct edges drawn without replacement."""
    total = max_edges(n, directed)
    if m < 0 or m > total:
        raise GraphError(f"cannot place {m} edges on {n} nodes (max {total})")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(total, size=m, replace=False) if m else np.empty(0, dtype=np.int64)
    pairs = _pairs_from_codes(chosen, n, directed)
    return Network(id=id, directed=directed, nodes=tuple(node_names(n)),
                   edges=frozenset(pairs))


def all_pairs(n: int, directed: bool) -> np.ndarray:
    """Every node-index pair in sorted order: i<j if undirected, i!=j otherwise."""
    if directed:
        i, j = np.nonzero(~np.eye(n, dtype=bool))
    else:
        i, j = np.triu_indices(n, k=1)
    return np.column_stack([i, j]).astype(np.int64)


def _pairs_from_codes(codes, n: int, directed: bool) -> list[tuple[int, int]]:
    table = all_pairs(n, directed)
    return [tuple(map(int, table[c])) for c in np.sort(np.asarray(codes, dtype=np.int64))]
