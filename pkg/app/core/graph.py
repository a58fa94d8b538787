"""Graph core - simple graphs on vertices 1..n, generators and invariants.

Vertices are 1-based so fixture labels can be copied verbatim. Products
number their vertices with ProductNumbering: the first factor is the row
(H) factor, the second the block factor.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import networkx as nx

from app.core.errors import ErrorDetail, InvalidOrderError, MalformedInputError

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    """Smaller endpoint first."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with canonically ordered edge tuple.

    Build with Graph.from_edges(); the constructor expects canonical input.
    """
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        errors: list[ErrorDetail] = []
        if self.n < 1:
            errors.append(ErrorDetail(
                code="EMPTY_GRAPH",
                message=f"Vertex count must be at least 1, got {self.n}.",
                field="n",
            ))
        for u, v in self.edges:
            if u == v:
                errors.append(ErrorDetail(
                    code="SELF_LOOP",
                    message=f"Self-loop at vertex {u}.",
                    field="edges",
                ))
            elif u > v:
                errors.append(ErrorDetail(
                    code="EDGE_NOT_NORMALIZED",
                    message=f"Edge {u}-{v} must list the smaller endpoint first.",
                    field="edges",
                ))
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                errors.append(ErrorDetail(
                    code="ENDPOINT_OUT_OF_RANGE",
                    message=f"Edge {u}-{v} has an endpoint outside 1..{self.n}.",
                    field="edges",
                ))
        if len(set(self.edges)) != len(self.edges):
            errors.append(ErrorDetail(
                code="DUPLICATE_EDGE",
                message="Edge list contains duplicates.",
                field="edges",
            ))
        if list(self.edges) != sorted(self.edges):
            errors.append(ErrorDetail(
                code="EDGES_NOT_SORTED",
                message="Edge list must be sorted lexicographically.",
                field="edges",
                hint="Use Graph.from_edges() to canonicalize.",
            ))
        if errors:
            raise MalformedInputError(
                f"Invalid graph with {len(errors)} error(s).",
                details=errors,
            )

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> Graph:
        """Canonicalize and validate (duplicates are reported, not merged)."""
        normalized = [normalize_edge(*map(int, e)) for e in edges]
        return cls(n=n, edges=tuple(sorted(normalized)))

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> Graph:
        """Nodes must already be the integers 1..n."""
        return cls.from_edges(g.number_of_nodes(), g.edges())

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(nbrs) for v, nbrs in adj.items()}

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_edge(u, v) in self.edge_set


@dataclass(frozen=True)
class ProductNumbering:
    """(i, j) <-> (j-1)*h + i for H-vertex i in 1..h and block j in 1..s."""
    h: int
    s: int

    def vertex(self, i: int, j: int) -> int:
        if not (1 <= i <= self.h and 1 <= j <= self.s):
            raise MalformedInputError(
                f"Coordinates ({i}, {j}) outside 1..{self.h} x 1..{self.s}.",
            )
        return (j - 1) * self.h + i

    def coords(self, v: int) -> tuple[int, int]:
        if not (1 <= v <= self.h * self.s):
            raise MalformedInputError(f"Vertex {v} outside 1..{self.h * self.s}.")
        j, i = divmod(v - 1, self.h)
        return i + 1, j + 1

    def block_of(self, v: int) -> int:
        return self.coords(v)[1]

    def block_vertices(self, j: int) -> range:
        return range((j - 1) * self.h + 1, j * self.h + 1)


# ── Generators ────────────────────────────────────────────


def cycle(n: int) -> Graph:
    """C_n on 1..n: 1-2-...-n-1."""
    if n < 3:
        raise InvalidOrderError(
            f"A cycle needs at least 3 vertices, got {n}.",
            details=[ErrorDetail(code="INVALID_ORDER", message=f"n = {n}", field="n",
                                 hint="Use n >= 3.")],
        )
    return Graph.from_networkx(nx.relabel_nodes(nx.cycle_graph(n), lambda x: x + 1))


def path(n: int) -> Graph:
    if n < 1:
        raise InvalidOrderError(f"A path needs at least 1 vertex, got {n}.")
    return Graph.from_networkx(nx.relabel_nodes(nx.path_graph(n), lambda x: x + 1))


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise InvalidOrderError(f"A complete graph needs at least 1 vertex, got {n}.")
    return Graph.from_networkx(nx.relabel_nodes(nx.complete_graph(n), lambda x: x + 1))


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """g is the row factor, h the block factor; (u, j) is numbered (j-1)*|g| + u."""
    numbering = ProductNumbering(g.n, h.n)
    product = nx.cartesian_product(g.to_networkx(), h.to_networkx())
    relabeled = nx.relabel_nodes(product, lambda node: numbering.vertex(node[0], node[1]))
    return Graph.from_edges(numbering.h * numbering.s, relabeled.edges())


# ── Invariants ────────────────────────────────────────────


def max_degree(g: Graph) -> int:
    return max((g.degree(v) for v in g.vertices), default=0)


def is_regular(g: Graph) -> bool:
    return len({g.degree(v) for v in g.vertices}) <= 1


def is_bipartite(g: Graph) -> bool:
    return nx.is_bipartite(g.to_networkx())


def mbt_lower_bound(g: Graph) -> int:
    """Delta, or Delta+1 for regular nonbipartite graphs.

    A regular dispersable graph is bipartite, so regular nonbipartite
    graphs need one page beyond Delta. chi' is never computed.
    """
    delta = max_degree(g)
    if is_regular(g) and not is_bipartite(g):
        return delta + 1
    return delta


def chromatic_index_bounds(g: Graph) -> tuple[int, int]:
    delta = max_degree(g)
    return delta, delta + 1


def product_upper_bound(mbt_g: int, mbt_h: int, h_bipartite: bool) -> int | None:
    """mbt(G x H) <= mbt(G) + mbt(H) when H is bipartite; no bound otherwise."""
    if not h_bipartite:
        return None
    return mbt_g + mbt_h


def classify_page_count(k: int, delta: int) -> str:
    if k == delta:
        return "dispersable witness"
    if k == delta + 1:
        return "nearly dispersable witness"
    return "other"
