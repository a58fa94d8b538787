"""DIMACS CNF export of the fixed-layout coloring problem, and its decoder.

Variable x(e, p) = e * k + p for edge index e (0-based, graph edge order)
and page p in 1..k. Clauses:
  - every edge gets at least one page, and at most one;
  - every page is used (surjectivity);
  - adjacent or crossing edges never share a page.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable

from app.core.embedding import PageColoring, constraint_pairs
from app.core.errors import ErrorDetail, MalformedInputError
from app.core.graph import Graph
from app.core.layout import CyclicLayout

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CnfDocument:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    comments: tuple[str, ...] = ()

    def to_dimacs(self) -> str:
        lines = [f"c {c}" for c in self.comments]
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        lines.extend(" ".join(map(str, clause)) + " 0" for clause in self.clauses)
        return "\n".join(lines) + "\n"


def variable(edge_index: int, page: int, k: int) -> int:
    return edge_index * k + page


def export_cnf(graph: Graph, layout: CyclicLayout, k: int) -> CnfDocument:
    m = graph.m
    clauses: list[tuple[int, ...]] = []
    for e in range(m):
        clauses.append(tuple(variable(e, p, k) for p in range(1, k + 1)))
        for p, q in itertools.combinations(range(1, k + 1), 2):
            clauses.append((-variable(e, p, k), -variable(e, q, k)))
    for p in range(1, k + 1):
        clauses.append(tuple(variable(e, p, k) for e in range(m)))
    for e, f in constraint_pairs(graph, layout):
        for p in range(1, k + 1):
            clauses.append((-variable(e, p, k), -variable(f, p, k)))

    comments = (
        f"matching book embedding: n={graph.n} m={m} k={k}",
        f"layout {' '.join(map(str, layout.order))}",
        "x(e,p) = e*k + p, edges in lexicographic order:",
        *(f"e{i} = {u}-{v}" for i, (u, v) in enumerate(graph.edges)),
    )
    document = CnfDocument(num_vars=m * k, clauses=tuple(clauses), comments=comments)
    logger.debug(f"export_cnf: {document.num_vars} variables, {len(document.clauses)} clauses")
    return document


def _parse_model(model: Iterable[int] | str) -> set[int]:
    if isinstance(model, str):
        literals: list[int] = []
        for line in model.splitlines():
            line = line.strip()
            if line.startswith("v"):
                literals.extend(int(tok) for tok in line[1:].split())
        return {lit for lit in literals if lit > 0}
    return {int(lit) for lit in model if int(lit) > 0}


def decode_model(model: Iterable[int] | str, graph: Graph, layout: CyclicLayout, k: int) -> PageColoring:
    """Satisfying assignment -> PageColoring; the caller still verifies it."""
    true_vars = _parse_model(model)
    assignment = {}
    errors: list[ErrorDetail] = []
    if layout.n != graph.n:
        errors.append(ErrorDetail(code="LAYOUT_SIZE_MISMATCH",
                                  message=f"Layout has {layout.n} vertices, graph has {graph.n}.",
                                  field="layout"))
    for e, edge in enumerate(graph.edges):
        pages = [p for p in range(1, k + 1) if variable(e, p, k) in true_vars]
        if len(pages) != 1:
            errors.append(ErrorDetail(
                code="MODEL_NOT_EXACTLY_ONE",
                message=f"Edge {edge[0]}-{edge[1]} has pages {pages}.",
                field="model",
            ))
            continue
        assignment[edge] = pages[0]
    if errors:
        raise MalformedInputError(f"Model does not encode a page coloring ({len(errors)} error(s)).",
                                  details=errors)
    return PageColoring.from_mapping(assignment, k=k)
