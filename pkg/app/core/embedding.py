"""Page colorings, matching book embeddings and the verifier.

A k-page matching book embedding is (graph, layout, coloring) with a
surjective coloring in which adjacent edges and conflicting edges always
get distinct pages. Well-formedness is enforced at construction; validity
is a verdict computed by verify() and never assumed.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal, Mapping

from app.core.errors import ErrorDetail, MalformedInputError
from app.core.graph import Edge, Graph, normalize_edge
from app.core.layout import CyclicLayout, chords_cross

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PageColoring:
    """Edge -> page in 1..k, stored sorted by edge."""
    k: int
    assignment: tuple[tuple[Edge, int], ...]

    def __post_init__(self):
        errors: list[ErrorDetail] = []
        if self.k < 1:
            errors.append(ErrorDetail(code="INVALID_PAGE_COUNT",
                                      message=f"Page count must be >= 1, got {self.k}.",
                                      field="pages"))
        edges = [e for e, _ in self.assignment]
        if len(set(edges)) != len(edges):
            errors.append(ErrorDetail(code="EDGE_ON_TWO_PAGES",
                                      message="An edge is assigned to more than one page.",
                                      field="pages"))
        for e, page in self.assignment:
            if not 1 <= page <= self.k:
                errors.append(ErrorDetail(
                    code="PAGE_OUT_OF_RANGE",
                    message=f"Edge {e[0]}-{e[1]} is on page {page}, outside 1..{self.k}.",
                    field="pages",
                ))
        if errors:
            raise MalformedInputError(
                f"Invalid page coloring with {len(errors)} error(s).",
                details=errors,
            )

    @classmethod
    def from_mapping(cls, assignment: Mapping[Edge, int], k: int | None = None) -> PageColoring:
        items = tuple(sorted((normalize_edge(*e), int(p)) for e, p in assignment.items()))
        if k is None:
            k = max((p for _, p in items), default=1)
        return cls(k=k, assignment=items)

    @classmethod
    def from_pages(cls, pages: Mapping[int, Iterable[Iterable[int]]], k: int | None = None) -> PageColoring:
        """Page lists as in the fixtures: {1: [[u, v], ...], ...}."""
        items = [(normalize_edge(*map(int, e)), int(p)) for p, edges in pages.items() for e in edges]
        if k is None:
            k = max((int(p) for p in pages), default=1)
        return cls(k=k, assignment=tuple(sorted(items)))

    @cached_property
    def page_of(self) -> dict[Edge, int]:
        return dict(self.assignment)

    def pages(self) -> dict[int, list[Edge]]:
        """Every page 1..k, including empty ones."""
        result: dict[int, list[Edge]] = {p: [] for p in range(1, self.k + 1)}
        for e, p in self.assignment:
            result[p].append(e)
        return result

    @property
    def pages_used(self) -> frozenset[int]:
        return frozenset(p for _, p in self.assignment)

    def recolor(self, changes: Mapping[Edge, int]) -> PageColoring:
        merged = dict(self.page_of)
        merged.update({normalize_edge(*e): p for e, p in changes.items()})
        return PageColoring.from_mapping(merged, k=self.k)


@dataclass(frozen=True)
class BookEmbedding:
    graph: Graph
    layout: CyclicLayout
    coloring: PageColoring

    def __post_init__(self):
        errors: list[ErrorDetail] = []
        if self.layout.n != self.graph.n:
            errors.append(ErrorDetail(
                code="LAYOUT_SIZE_MISMATCH",
                message=f"Layout has {self.layout.n} vertices, graph has {self.graph.n}.",
                field="layout",
            ))
        colored = set(self.coloring.page_of)
        missing = sorted(self.graph.edge_set - colored)
        extra = sorted(colored - self.graph.edge_set)
        if missing:
            errors.append(ErrorDetail(
                code="UNCOLORED_EDGES",
                message=f"{len(missing)} edge(s) have no page, e.g. {missing[:3]}.",
                field="pages",
            ))
        if extra:
            errors.append(ErrorDetail(
                code="UNKNOWN_EDGES",
                message=f"{len(extra)} colored edge(s) are not in the graph, e.g. {extra[:3]}.",
                field="pages",
            ))
        if errors:
            raise MalformedInputError(
                f"Malformed embedding with {len(errors)} error(s).",
                details=errors,
            )

    @property
    def k(self) -> int:
        return self.coloring.k

    def pages(self) -> dict[int, list[Edge]]:
        return self.coloring.pages()

    def with_layout(self, layout: CyclicLayout) -> BookEmbedding:
        return BookEmbedding(self.graph, layout, self.coloring)

    def with_coloring(self, coloring: PageColoring) -> BookEmbedding:
        return BookEmbedding(self.graph, self.layout, coloring)

    @cached_property
    def conflicting_pairs(self) -> frozenset[tuple[Edge, Edge]]:
        """All crossing edge pairs under the layout, each pair sorted."""
        return frozenset(
            (e1, e2) for e1, e2 in itertools.combinations(self.graph.edges, 2)
            if _conflict(self.layout.position, e1, e2)
        )


def _conflict(pos: Mapping[int, int], e1: Edge, e2: Edge) -> bool:
    if e1[0] in e2 or e1[1] in e2:
        return False
    return chords_cross(pos[e1[0]], pos[e1[1]], pos[e2[0]], pos[e2[1]])


def constraint_pairs(graph: Graph, layout: CyclicLayout) -> list[tuple[int, int]]:
    """Edge-index pairs (i < j) that may never share a page: adjacent or crossing."""
    pos = layout.position
    edges = graph.edges
    pairs = []
    for i, j in itertools.combinations(range(len(edges)), 2):
        e1, e2 = edges[i], edges[j]
        if e1[0] in e2 or e1[1] in e2 or chords_cross(pos[e1[0]], pos[e1[1]], pos[e2[0]], pos[e2[1]]):
            pairs.append((i, j))
    return pairs


@dataclass(frozen=True)
class Violation:
    """adjacent: shared vertex on one page; crossing: chords cross on one page;
    unused_page: page with no edge (coloring not surjective)."""
    kind: Literal["adjacent", "crossing", "unused_page"]
    page: int
    edges: tuple[Edge, ...] = ()
    vertex: int | None = None

    def describe(self) -> str:
        if self.kind == "unused_page":
            return f"page {self.page} is empty"
        (a, b), (c, d) = self.edges
        if self.kind == "adjacent":
            return f"adjacent-clash on page {self.page}: {a}-{b} and {c}-{d} share vertex {self.vertex}"
        return f"crossing-clash on page {self.page}: {a}-{b} crosses {c}-{d}"


@dataclass
class ValidityReport:
    valid: bool
    k: int
    violations: list[Violation] = field(default_factory=list)

    @property
    def adjacent_clashes(self) -> list[Violation]:
        return [v for v in self.violations if v.kind == "adjacent"]

    @property
    def crossing_clashes(self) -> list[Violation]:
        return [v for v in self.violations if v.kind == "crossing"]

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "k": self.k,
            "violations": [
                {"kind": v.kind, "page": v.page, "edges": [list(e) for e in v.edges],
                 "vertex": v.vertex, "message": v.describe()}
                for v in self.violations
            ],
        }


def verify(embedding: BookEmbedding) -> ValidityReport:
    """Check every same-page edge pair plus surjectivity; list all violations."""
    pos = embedding.layout.position
    violations: list[Violation] = []
    for page, edges in embedding.pages().items():
        if not edges:
            violations.append(Violation(kind="unused_page", page=page))
            continue
        for e1, e2 in itertools.combinations(edges, 2):
            shared = set(e1) & set(e2)
            if shared:
                violations.append(Violation(kind="adjacent", page=page, edges=(e1, e2),
                                            vertex=shared.pop()))
            elif chords_cross(pos[e1[0]], pos[e1[1]], pos[e2[0]], pos[e2[1]]):
                violations.append(Violation(kind="crossing", page=page, edges=(e1, e2)))
    report = ValidityReport(valid=not violations, k=embedding.k, violations=violations)
    logger.debug(f"verify: n={embedding.graph.n} m={embedding.graph.m} k={embedding.k} "
                 f"violations={len(violations)}")
    return report
