from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

Edge = Tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices ``0..n-1``, optionally edge-weighted."""

    n: int
    edges: FrozenSet[Edge] = frozenset()
    weights: Optional[Mapping[Edge, float]] = field(default=None, compare=True)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        edges = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            edges.add(_edge(u, v))
        object.__setattr__(self, "edges", frozenset(edges))
        if self.weights is not None:
            w = {_edge(u, v): float(x) for (u, v), x in dict(self.weights).items()}
            if set(w) != edges:
                raise ValueError("weights must be given for exactly the graph's edges")
            object.__setattr__(self, "weights", MappingProxyType(w))
        adj: Dict[int, set] = {v: set() for v in range(self.n)}
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", {v: frozenset(s) for v, s in adj.items()})

    @classmethod
    def from_weighted_edges(cls, n: int, edges: Iterable[Tuple[int, int, float]]) -> "SimpleGraph":
        edges = list(edges)
        return cls(n, frozenset((u, v) for u, v, _ in edges), {(u, v): w for u, v, w in edges})

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self._adj[v]

    def weight(self, u: int, v: int) -> float:
        if not self.adjacent(u, v):
            raise KeyError(f"no edge ({u}, {v})")
        return 1.0 if self.weights is None else self.weights[_edge(u, v)]

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.adjacent(a, b) for i, a in enumerate(vs) for b in vs[i + 1:])

    def is_independent(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return not any(self.adjacent(a, b) for i, a in enumerate(vs) for b in vs[i + 1:])
