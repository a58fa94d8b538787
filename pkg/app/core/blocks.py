"""En bloc structure of product layouts and the seed conditions.

For G = H x C_s numbered by ProductNumbering, block j is the fiber of
second coordinate j. A layout is en bloc when every block is a contiguous
arc and the blocks appear as 1, 2, ..., s counter-clockwise (up to
rotation). An embedding with t+3 pages is extensible when some block (a
seed) uses at most t+1 pages on its own edges and its two unused pages are
separated: neither boundary matching contains both of them.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Literal

from app.core.embedding import BookEmbedding, ValidityReport, verify
from app.core.errors import ErrorDetail, MalformedInputError, PreconditionError
from app.core.graph import Edge, Graph, ProductNumbering

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlockStructure:
    """blocks[j-1] is the counter-clockwise vertex order of block j."""
    h: int
    s: int
    blocks: tuple[tuple[int, ...], ...]

    @property
    def numbering(self) -> ProductNumbering:
        return ProductNumbering(self.h, self.s)

    def block(self, j: int) -> tuple[int, ...]:
        return self.blocks[j - 1]

    def predecessor(self, j: int) -> int:
        return (j - 2) % self.s + 1

    def successor(self, j: int) -> int:
        return j % self.s + 1


@dataclass(frozen=True)
class NotEnBloc:
    """First violated en bloc condition with a witness vertex."""
    condition: Literal["contiguity", "natural_order"]
    block: int
    witness: int

    @property
    def message(self) -> str:
        if self.condition == "contiguity":
            return f"block {self.block} is not contiguous (vertex {self.witness} starts a second arc)"
        return (f"block {self.block} is out of natural counter-clockwise order "
                f"(arc starting at vertex {self.witness})")


def detect_blocks(embedding: BookEmbedding, h: int, s: int) -> BlockStructure | NotEnBloc:
    if h < 1 or s < 1 or embedding.graph.n != h * s:
        raise MalformedInputError(
            f"Graph has {embedding.graph.n} vertices, expected h*s = {h}*{s}.",
            details=[ErrorDetail(code="VERTEX_COUNT_MISMATCH",
                                 message=f"n = {embedding.graph.n}, h = {h}, s = {s}",
                                 field="h,s")],
        )
    numbering = ProductNumbering(h, s)
    order = embedding.layout.order
    labels = [numbering.block_of(v) for v in order]
    n = len(order)

    # Rotate so position 0 starts an arc.
    start = next((p for p in range(n) if labels[p] != labels[p - 1]), 0)
    runs: list[tuple[int, list[int]]] = []
    for p in range(start, start + n):
        v = order[p % n]
        if runs and runs[-1][0] == labels[p % n]:
            runs[-1][1].append(v)
        else:
            runs.append((labels[p % n], [v]))

    seen: set[int] = set()
    for j, vertices in runs:
        if j in seen:
            return NotEnBloc(condition="contiguity", block=j, witness=vertices[0])
        seen.add(j)

    first = next(i for i, (j, _) in enumerate(runs) if j == 1)
    runs = runs[first:] + runs[:first]
    for index, (j, vertices) in enumerate(runs):
        if j != index + 1:
            return NotEnBloc(condition="natural_order", block=j, witness=vertices[0])

    return BlockStructure(h=h, s=s, blocks=tuple(tuple(vertices) for _, vertices in runs))


def _require_cycle_factor(blocks: BlockStructure) -> None:
    if blocks.s < 3:
        raise PreconditionError(
            f"Block count must be at least 3 (cycle factor C_s), got {blocks.s}.",
            details=[ErrorDetail(code="CYCLE_TOO_SHORT", message=f"s = {blocks.s}", field="s")],
        )


def _edges_between(graph: Graph, numbering: ProductNumbering, a: int, b: int) -> tuple[Edge, ...]:
    return tuple(
        e for e in graph.edges
        if {numbering.block_of(e[0]), numbering.block_of(e[1])} == {a, b}
    )


def intra_block_edges(graph: Graph, numbering: ProductNumbering, j: int) -> tuple[Edge, ...]:
    return tuple(
        e for e in graph.edges
        if numbering.block_of(e[0]) == j and numbering.block_of(e[1]) == j
    )


def boundary_matchings(
    embedding: BookEmbedding, blocks: BlockStructure, j: int,
) -> tuple[tuple[Edge, ...], tuple[Edge, ...]]:
    """(before, after): edges joining block j to its predecessor and successor."""
    _require_cycle_factor(blocks)
    if not 1 <= j <= blocks.s:
        raise MalformedInputError(f"Block index {j} outside 1..{blocks.s}.")
    numbering = blocks.numbering
    before = _edges_between(embedding.graph, numbering, blocks.predecessor(j), j)
    after = _edges_between(embedding.graph, numbering, j, blocks.successor(j))
    return before, after


def product_factor(graph: Graph, h: int, s: int) -> Graph | None:
    """H if graph == H x C_s under ProductNumbering(h, s), else None."""
    if s < 3 or graph.n != h * s:
        return None
    numbering = ProductNumbering(h, s)
    fibers: list[set[Edge]] = [set() for _ in range(s)]
    for u, v in graph.edges:
        (i1, j1), (i2, j2) = numbering.coords(u), numbering.coords(v)
        if j1 == j2:
            fibers[j1 - 1].add((min(i1, i2), max(i1, i2)))
        elif i1 != i2 or (j2 - j1) % s not in (1, s - 1):
            return None
    if any(f != fibers[0] for f in fibers):
        return None
    expected_rungs = h * s
    rungs = graph.m - s * len(fibers[0])
    if rungs != expected_rungs:
        return None
    return Graph.from_edges(h, fibers[0])


@dataclass(frozen=True)
class SeedReport:
    """Seed verdicts for one block.

    separated_pair is the unused page pair that the boundary matchings keep
    apart (lowest first); breaking names the matching that holds both pages
    of the first unused pair when no pair is separated.
    """
    block: int
    intra_pages: frozenset[int]
    before_pages: frozenset[int]
    after_pages: frozenset[int]
    unused_pages: tuple[int, ...]
    verdict_a: bool
    verdict_b: bool
    separated_pair: tuple[int, int] | None = None
    breaking: Literal["before", "after", "both"] | None = None
    order: tuple[int, ...] = ()

    @property
    def is_seed(self) -> bool:
        return self.verdict_a and self.verdict_b

    def to_dict(self) -> dict:
        return {
            "block": self.block,
            "order": list(self.order),
            "intra_pages": sorted(self.intra_pages),
            "before_pages": sorted(self.before_pages),
            "after_pages": sorted(self.after_pages),
            "unused_pages": list(self.unused_pages),
            "verdict_a": self.verdict_a,
            "verdict_b": self.verdict_b,
            "is_seed": self.is_seed,
            "separated_pair": list(self.separated_pair) if self.separated_pair else None,
            "breaking": self.breaking,
        }


def assess_block(
    intra_pages: set[int] | frozenset[int],
    before_pages: set[int] | frozenset[int],
    after_pages: set[int] | frozenset[int],
    t: int,
    k: int,
    block: int = 0,
    order: tuple[int, ...] = (),
) -> SeedReport:
    """Conditions (a) and (b) from page sets alone.

    With more than two unused pages any separated pair satisfies (b).
    """
    intra, before, after = frozenset(intra_pages), frozenset(before_pages), frozenset(after_pages)
    unused = tuple(p for p in range(1, k + 1) if p not in intra)
    verdict_a = len(intra) <= t + 1

    separated = None
    for pair in itertools.combinations(unused, 2):
        if not set(pair) <= before and not set(pair) <= after:
            separated = pair
            break

    breaking = None
    if separated is None and len(unused) >= 2:
        first = set(unused[:2])
        in_before, in_after = first <= before, first <= after
        breaking = "both" if in_before and in_after else "before" if in_before else "after"

    return SeedReport(
        block=block,
        order=tuple(order),
        intra_pages=intra,
        before_pages=before,
        after_pages=after,
        unused_pages=unused,
        verdict_a=verdict_a,
        verdict_b=separated is not None,
        separated_pair=separated,
        breaking=breaking,
    )


def seed_report(embedding: BookEmbedding, blocks: BlockStructure, t: int) -> list[SeedReport]:
    if embedding.k != t + 3:
        raise PreconditionError(
            f"Extensibility needs t+3 = {t + 3} pages, embedding has {embedding.k}.",
            details=[ErrorDetail(code="PAGE_COUNT_NOT_T_PLUS_3",
                                 message=f"k = {embedding.k}, t = {t}", field="t",
                                 hint="Seeds are defined for nearly dispersable embeddings only.")],
        )
    _require_cycle_factor(blocks)
    numbering = blocks.numbering
    page_of = embedding.coloring.page_of
    reports = []
    for j in range(1, blocks.s + 1):
        intra = intra_block_edges(embedding.graph, numbering, j)
        degrees = {v: 0 for v in numbering.block_vertices(j)}
        for u, v in intra:
            degrees[u] += 1
            degrees[v] += 1
        if any(d != t for d in degrees.values()):
            raise PreconditionError(
                f"Block {j} does not induce a {t}-regular graph.",
                details=[ErrorDetail(code="FACTOR_NOT_REGULAR",
                                     message=f"degrees {sorted(set(degrees.values()))}", field="t")],
            )
        before, after = boundary_matchings(embedding, blocks, j)
        reports.append(assess_block(
            {page_of[e] for e in intra},
            {page_of[e] for e in before},
            {page_of[e] for e in after},
            t=t,
            k=embedding.k,
            block=j,
            order=blocks.block(j),
        ))
    return reports


@dataclass
class ExtensibilityVerdict:
    extensible: bool
    seeds: list[int] = field(default_factory=list)
    reason: str | None = None
    validity: ValidityReport | None = None
    blocks: BlockStructure | None = None
    reports: list[SeedReport] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "extensible": self.extensible,
            "seeds": self.seeds,
            "reason": self.reason,
            "blocks": [list(b) for b in self.blocks.blocks] if self.blocks else None,
            "reports": [r.to_dict() for r in self.reports],
        }


def is_extensible(embedding: BookEmbedding, h: int, s: int, t: int) -> ExtensibilityVerdict:
    validity = verify(embedding)
    if not validity.valid:
        return ExtensibilityVerdict(False, reason="embedding is not a valid matching book embedding",
                                    validity=validity)
    if embedding.k != t + 3:
        return ExtensibilityVerdict(False, reason=f"page count {embedding.k} is not t+3 = {t + 3}",
                                    validity=validity)
    if embedding.graph.n != h * s or product_factor(embedding.graph, h, s) is None:
        return ExtensibilityVerdict(False, reason=f"graph is not H x C_{s} with |H| = {h}",
                                    validity=validity)
    blocks = detect_blocks(embedding, h, s)
    if isinstance(blocks, NotEnBloc):
        return ExtensibilityVerdict(False, reason=f"layout is not en bloc: {blocks.message}",
                                    validity=validity)
    try:
        reports = seed_report(embedding, blocks, t)
    except PreconditionError as exc:
        return ExtensibilityVerdict(False, reason=exc.message, validity=validity, blocks=blocks)
    seeds = [r.block for r in reports if r.is_seed]
    return ExtensibilityVerdict(
        extensible=bool(seeds),
        seeds=seeds,
        reason=None if seeds else "no block satisfies both seed conditions",
        validity=validity,
        blocks=blocks,
        reports=reports,
    )
