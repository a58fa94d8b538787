"""Seed replication: extend an extensible embedding of H x C_s to H x C_{s+r}.

The seed block's arc is replaced by r+1 copies of the seed, alternating
with order-reversed copies. Consecutive copies are joined by straight
matchings (vertex i to vertex i); since consecutive copies have mutually
reversed orders those chords nest, so each inserted matching is
crossing-free. The r inserted matchings alternate between the two pages
the seed does not use. The seed's before-matching now enters the first
copy and its after-matching leaves the last copy, with unchanged pages.

The phase (which unused page the first inserted matching takes) is not
fixed in advance: both phases are tried and the output is re-verified.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal, Mapping

from app.core.blocks import (
    BlockStructure,
    boundary_matchings,
    intra_block_edges,
    is_extensible,
    product_factor,
)
from app.core.embedding import BookEmbedding, PageColoring, verify
from app.core.errors import (
    ErrorDetail,
    ExtensionFailedError,
    NotExtensibleError,
    PreconditionError,
)
from app.core.fixtures import c3c3_embedding, c5c5_embedding
from app.core.graph import Edge, ProductNumbering, cartesian_product, cycle, normalize_edge
from app.core.layout import CyclicLayout

logger = logging.getLogger(__name__)


def _require_even_r(r: int) -> None:
    if r < 2 or r % 2:
        raise PreconditionError(
            f"r must be an even integer >= 2, got {r}.",
            details=[ErrorDetail(code="R_NOT_EVEN_POSITIVE", message=f"r = {r}", field="r",
                                 hint="Odd r changes the parity class and is not supported.")],
        )


@dataclass(frozen=True)
class ExtensionPlan:
    seed: int
    r: int
    phase: Literal[1, 2]
    unused_pair: tuple[int, int]

    def __post_init__(self):
        _require_even_r(self.r)

    @property
    def sequence(self) -> tuple[Literal["seed", "reversed"], ...]:
        """r+1 copies, seed-ordered at both ends."""
        return tuple("seed" if c % 2 == 0 else "reversed" for c in range(self.r + 1))

    def matching_page(self, m: int) -> int:
        """Page of the m-th inserted matching (1-based)."""
        first, second = self.unused_pair if self.phase == 1 else self.unused_pair[::-1]
        return first if m % 2 == 1 else second


@dataclass(frozen=True)
class ExtensionResult:
    embedding: BookEmbedding
    renumbering: dict[int, int]
    plan: ExtensionPlan
    h: int
    s: int

    def sidecar(self) -> dict:
        return {
            "renumbering": {str(old): new for old, new in sorted(self.renumbering.items())},
            "seed": self.plan.seed,
            "r": self.plan.r,
            "phase": self.plan.phase,
        }


def reverse_block(
    order: tuple[int, ...], coloring: Mapping[Edge, int],
) -> tuple[tuple[int, ...], dict[Edge, int]]:
    """Reflect a block; pages stay attached to edges, not positions."""
    return tuple(reversed(order)), dict(coloring)


def _build(
    embedding: BookEmbedding,
    blocks: BlockStructure,
    plan: ExtensionPlan,
) -> tuple[BookEmbedding, dict[int, int]]:
    h, s, j, r = blocks.h, blocks.s, plan.seed, plan.r
    old = ProductNumbering(h, s)
    new = ProductNumbering(h, s + r)
    page_of = embedding.coloring.page_of

    def new_block(b: int) -> int:
        # Seed -> first copy (block 1); the rest follow counter-clockwise.
        return 1 if b == j else (b - j) % s + r + 1

    def relabel(v: int) -> int:
        i, b = old.coords(v)
        return new.vertex(i, new_block(b))

    renumbering = {v: relabel(v) for v in embedding.graph.vertices}

    seed_order = tuple(old.coords(v)[0] for v in blocks.block(j))
    seed_pages = {
        normalize_edge(old.coords(u)[0], old.coords(v)[0]): page_of[(u, v)]
        for u, v in intra_block_edges(embedding.graph, old, j)
    }
    reversed_order, reversed_pages = reverse_block(seed_order, seed_pages)

    layout: list[int] = []
    assignment: dict[Edge, int] = {}
    for c, kind in enumerate(plan.sequence, start=1):
        order, pages = (seed_order, seed_pages) if kind == "seed" else (reversed_order, reversed_pages)
        layout.extend(new.vertex(i, c) for i in order)
        for (i1, i2), page in pages.items():
            assignment[normalize_edge(new.vertex(i1, c), new.vertex(i2, c))] = page
    for m in range(1, r + 1):
        for i in range(1, h + 1):
            assignment[(new.vertex(i, m), new.vertex(i, m + 1))] = plan.matching_page(m)

    seed_arc = set(blocks.block(j))
    start = embedding.layout.position[blocks.block(j)[0]]
    rotated = embedding.layout.rotate(start).order
    layout.extend(renumbering[v] for v in rotated if v not in seed_arc)

    before, after = boundary_matchings(embedding, blocks, j)
    for u, v in before:
        a, b = (u, v) if old.block_of(v) == j else (v, u)
        i_seed = old.coords(b)[0]
        assignment[normalize_edge(renumbering[a], new.vertex(i_seed, 1))] = page_of[(u, v)]
    for u, v in after:
        a, b = (u, v) if old.block_of(u) == j else (v, u)
        i_seed = old.coords(a)[0]
        assignment[normalize_edge(new.vertex(i_seed, r + 1), renumbering[b])] = page_of[(u, v)]

    for u, v in embedding.graph.edges:
        if old.block_of(u) == j or old.block_of(v) == j:
            continue
        assignment[normalize_edge(renumbering[u], renumbering[v])] = page_of[(u, v)]

    factor = product_factor(embedding.graph, h, s)
    graph = cartesian_product(factor, cycle(s + r))
    extended = BookEmbedding(
        graph=graph,
        layout=CyclicLayout(tuple(layout)),
        coloring=PageColoring.from_mapping(assignment, k=embedding.k),
    )
    return extended, renumbering


def extend(embedding: BookEmbedding, j: int, r: int, *, h: int, s: int) -> ExtensionResult:
    """Replicate seed block j to obtain an extensible embedding of H x C_{s+r}."""
    _require_even_r(r)
    t = embedding.k - 3
    verdict = is_extensible(embedding, h, s, t)
    if not verdict.extensible:
        raise NotExtensibleError(
            f"Embedding is not extensible: {verdict.reason}.",
            details=[ErrorDetail(code="NOT_EXTENSIBLE", message=verdict.reason or "")],
        )
    if j not in verdict.seeds:
        raise NotExtensibleError(
            f"Block {j} is not a seed.",
            details=[ErrorDetail(code="NOT_A_SEED", message=f"seeds: {verdict.seeds}", field="seed",
                                 hint=f"Choose one of {verdict.seeds}.")],
        )
    report = verdict.reports[j - 1]
    failures: list[ErrorDetail] = []
    for phase in (1, 2):
        plan = ExtensionPlan(seed=j, r=r, phase=phase, unused_pair=report.separated_pair)
        extended, renumbering = _build(embedding, verdict.blocks, plan)
        validity = verify(extended)
        if validity.valid and is_extensible(extended, h, s + r, t).extensible:
            logger.info(f"Extended seed {j} by r={r} with phase {phase}: "
                        f"{embedding.graph.n} -> {extended.graph.n} vertices")
            return ExtensionResult(extended, renumbering, plan, h=h, s=s + r)
        logger.debug(f"Phase {phase} failed for seed {j}, r={r}: {len(validity.violations)} violation(s)")
        failures.extend(
            ErrorDetail(code=f"PHASE_{phase}_{v.kind.upper()}", message=v.describe())
            for v in validity.violations
        )

    logger.warning(f"Both alternation phases failed for seed {j}, r={r}")
    raise ExtensionFailedError(
        f"Seed replication of block {j} failed in both alternation phases.",
        details=failures,
    )


def certify_family(m: int, n: int) -> BookEmbedding:
    """Verified 5-page embedding of C_m x C_n for m in {3, 5} and odd n >= 3."""
    if m not in (3, 5):
        raise PreconditionError(f"Only m = 3 or m = 5 is certified, got {m}.",
                                details=[ErrorDetail(code="UNSUPPORTED_M", message=f"m = {m}", field="m")])
    if n < 3 or n % 2 == 0:
        raise PreconditionError(
            f"n must be odd and >= 3, got {n}.",
            details=[ErrorDetail(code="N_NOT_ODD", message=f"n = {n}", field="n",
                                 hint="Even n is covered by prior results, not by seed replication.")],
        )

    if m == 5 and n == 3:
        return swap_factors(certify_family(3, 5), h=3, s=5)

    base, s = (c3c3_embedding(), 3) if m == 3 else (c5c5_embedding(), 5)
    if n == s:
        return base
    if n < s:
        raise PreconditionError(f"C_{m} x C_{n} is not reachable from the C_{m} x C_{s} certificate.")
    verdict = is_extensible(base, m, s, 2)
    result = extend(base, min(verdict.seeds), n - s, h=m, s=s)
    logger.info(f"Certified C_{m} x C_{n}: {result.embedding.graph.n} vertices, "
                f"k = {result.embedding.k}, seed {result.plan.seed}, phase {result.plan.phase}")
    return result.embedding


def swap_factors(embedding: BookEmbedding, h: int, s: int) -> BookEmbedding:
    """Relabel an embedding of H x C_s numbered (h, s) into C_s x H numbered (s, h)."""
    old = ProductNumbering(h, s)
    new = ProductNumbering(s, h)

    def relabel(v: int) -> int:
        i, j = old.coords(v)
        return new.vertex(j, i)

    factor = product_factor(embedding.graph, h, s)
    graph = cartesian_product(cycle(s), factor)
    coloring = PageColoring.from_mapping(
        {(relabel(u), relabel(v)): p for (u, v), p in embedding.coloring.assignment},
        k=embedding.k,
    )
    swapped = BookEmbedding(graph, CyclicLayout(tuple(relabel(v) for v in embedding.layout.order)), coloring)
    if not verify(swapped).valid:
        raise ExtensionFailedError("Factor swap produced an invalid embedding.")
    return swapped
