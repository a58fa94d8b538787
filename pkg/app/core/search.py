"""Backtracking searches for k-page matching book embeddings.

color_search decides whether a fixed layout admits a k-page coloring,
mbt_exact minimizes k over all layouts of a tiny graph, and the en bloc
campaign lives in bloc_search. All of them run on DepthFirstSearch, so
budgets, checkpoints and the process-pool mode are shared here.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from multiprocessing import Manager
from pathlib import Path
from typing import Any, Callable, Literal

from app.config import get_settings
from app.core.blocks import ExtensibilityVerdict
from app.core.dfs import (
    Checkpoint,
    DepthFirstSearch,
    RunStatus,
    SearchProblem,
    SearchStatistics,
    Subtree,
    split_prefixes,
)
from app.core.embedding import BookEmbedding, PageColoring, verify
from app.core.errors import (
    BookError,
    ErrorDetail,
    GraphTooLargeError,
    MalformedInputError,
    PreconditionError,
)
from app.core.graph import Edge, Graph, max_degree
from app.core.layout import CyclicLayout, chords_cross, enumerate_layouts
from app.schemas.search import SearchConfig

logger = logging.getLogger(__name__)

OutcomeStatus = Literal["found", "exhausted", "budget-exhausted"]


@dataclass
class SearchOutcome:
    status: OutcomeStatus
    witness: BookEmbedding | None = None
    stats: SearchStatistics = field(default_factory=SearchStatistics)
    checkpoint_path: str | None = None
    verdict: ExtensibilityVerdict | None = None

    @property
    def found(self) -> bool:
        return self.status == "found"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "stats": self.stats.to_dict(),
            "checkpoint_path": self.checkpoint_path,
            "witness": None if self.witness is None else {
                "n": self.witness.graph.n,
                "layout": list(self.witness.layout.order),
                "pages": {str(p): [list(e) for e in edges] for p, edges in self.witness.pages().items()},
            },
            "seeds": self.verdict.seeds if self.verdict else None,
        }


# ── Driver ────────────────────────────────────────────────


@dataclass
class DriveResult:
    status: RunStatus
    solution: Any
    stats: SearchStatistics
    checkpoint_path: str | None = None


def _default_checkpoint(kind: str, config_hash: str) -> Path:
    return Path(get_settings().checkpoint_dir) / f"{kind}-{config_hash[:12]}.json"


def drive(
    factory: Callable[[], SearchProblem],
    config: SearchConfig,
    problem_key: str,
    kind: str,
    resume: str | Path | None = None,
) -> DriveResult:
    """Run one search tree to found/exhausted/budget, honoring checkpoints and workers."""
    config_hash = config.config_hash(problem_key)
    path = Path(config.checkpoint_path) if config.checkpoint_path else _default_checkpoint(kind, config_hash)
    checkpoint = None
    if resume is not None:
        checkpoint = Checkpoint.load(resume)
        if checkpoint.config_hash != config_hash:
            logger.warning(f"Checkpoint {resume} was written for another configuration; starting fresh")
            checkpoint = None
    if config.workers > 1 or (checkpoint is not None and checkpoint.frontier):
        return _drive_parallel(factory, config, config_hash, path, checkpoint)

    problem = factory()

    def save(prefix: list[int]) -> None:
        Checkpoint(prefix=prefix, stats=problem.stats.to_dict(), config_hash=config_hash).save(path)

    engine = DepthFirstSearch(
        problem,
        node_budget=config.node_budget,
        time_budget=config.time_budget,
        checkpoint_interval=config.checkpoint_interval,
        on_checkpoint=save,
    )
    if checkpoint is not None:
        engine.start(checkpoint.prefix)
        # Replaying the prefix re-counts prunes; the checkpoint's figures are authoritative.
        problem.stats.restore(SearchStatistics.from_dict(checkpoint.stats))
        logger.info(f"Resumed from {resume} at depth {len(checkpoint.prefix)}, "
                    f"nodes {problem.stats.nodes}")

    status = engine.run()
    if status == "budget":
        save(engine.prefix())
        logger.warning(f"Search budget exhausted after {problem.stats.nodes} nodes; checkpoint {path}")
        return DriveResult(status, None, problem.stats, str(path))
    solution = problem.solution() if status == "found" else None
    return DriveResult(status, solution, problem.stats, None)


def _explore_subtree(
    factory, subtree: Subtree, node_budget, time_budget, stop,
) -> tuple[str, Any, dict, Subtree | None]:
    problem = factory()
    engine = DepthFirstSearch(problem, node_budget=node_budget, time_budget=time_budget,
                              should_stop=stop.is_set)
    engine.start(subtree.prefix, floor=subtree.floor)
    status = engine.run()
    if status == "found":
        stop.set()
        return status, problem.solution(), problem.stats.to_dict(), None
    position = Subtree(engine.prefix(), subtree.floor) if status == "budget" else None
    return status, None, problem.stats.to_dict(), position


def _drive_parallel(
    factory: Callable[[], SearchProblem],
    config: SearchConfig,
    config_hash: str,
    path: Path,
    checkpoint: Checkpoint | None,
) -> DriveResult:
    """Disjoint DFS subtrees in a process pool.

    The node and time budgets apply per subtree and per invocation. Subtrees
    a budget interrupts are saved as the checkpoint's frontier.
    """
    root = factory()
    stats = root.stats
    if checkpoint is None:
        subtrees = [Subtree(p + [-1], len(p)) for p in split_prefixes(root, config.workers * 4)]
    else:
        subtrees = checkpoint.frontier or [Subtree(checkpoint.prefix, 0)]
        stats.restore(SearchStatistics.from_dict(checkpoint.stats))
        logger.info(f"Resumed {len(subtrees)} subtrees, nodes {stats.nodes}")
    if config.checkpoint_interval:
        logger.info("Periodic checkpoints are single-worker only; budget stops still write one")
    logger.info(f"Parallel search: {len(subtrees)} subtrees on {config.workers} workers")

    with Manager() as manager:
        stop = manager.Event()
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [
                pool.submit(_explore_subtree, factory, t, config.node_budget, config.time_budget, stop)
                for t in subtrees
            ]
            results = [f.result() for f in futures]

    solution = None
    frontier: list[Subtree] = []
    for status, candidate, worker_stats, position in results:
        stats.merge(SearchStatistics.from_dict(worker_stats))
        if status == "found" and solution is None:
            solution = candidate
        if position is not None:
            frontier.append(position)
    if solution is not None:
        return DriveResult("found", solution, stats)
    if frontier:
        Checkpoint(prefix=[], stats=stats.to_dict(), config_hash=config_hash, frontier=frontier).save(path)
        logger.warning(f"Search budget exhausted in {len(frontier)} subtrees after {stats.nodes} nodes; "
                       f"checkpoint {path}")
        return DriveResult("budget", None, stats, str(path))
    return DriveResult("exhausted", None, stats)


def _outcome_status(status: RunStatus) -> OutcomeStatus:
    return "budget-exhausted" if status == "budget" else status


# ── Fixed-layout coloring ─────────────────────────────────


def _static_order(m: int, neighbors: list[list[int]]) -> list[int]:
    """Greedy order: next edge has most constraints into the ordered prefix.

    Ties go to higher total constraint degree, then lower edge index.
    """
    placed = [False] * m
    links = [0] * m
    order: list[int] = []
    for _ in range(m):
        best = min(
            (e for e in range(m) if not placed[e]),
            key=lambda e: (-links[e], -len(neighbors[e]), e),
        )
        placed[best] = True
        order.append(best)
        for f in neighbors[best]:
            links[f] += 1
    return order


class ColorSearchProblem:
    """Pages for the edges of a fixed layout, one edge per DFS level.

    Forbidden pages are kept as per-edge counters split by cause
    (adjacency, crossing) and updated incrementally for uncolored
    neighbours only; an edge whose k pages are all forbidden wipes out
    the branch.
    """

    def __init__(self, graph: Graph, layout: CyclicLayout, k: int):
        self.graph = graph
        self.layout = layout
        self.k = k
        self.stats = SearchStatistics()
        edges = graph.edges
        m = len(edges)
        pos = layout.position
        self.adjacent: list[list[int]] = [[] for _ in range(m)]
        self.crossing: list[list[int]] = [[] for _ in range(m)]
        for i in range(m):
            a, b = edges[i]
            for j in range(i + 1, m):
                c, d = edges[j]
                if a == c or a == d or b == c or b == d:
                    self.adjacent[i].append(j)
                    self.adjacent[j].append(i)
                elif chords_cross(pos[a], pos[b], pos[c], pos[d]):
                    self.crossing[i].append(j)
                    self.crossing[j].append(i)
        self.order = _static_order(m, [self.adjacent[e] + self.crossing[e] for e in range(m)])
        self.page = [0] * m
        self.adj_block = [[0] * (k + 1) for _ in range(m)]
        self.cross_block = [[0] * (k + 1) for _ in range(m)]
        self.blocked = [0] * m
        self.depth = 0
        self.used = 0
        self._used_stack: list[int] = []
        self.wipeouts = 0

    def options(self) -> list[int]:
        if self.wipeouts:
            self.stats.prunes_forward += 1
            return []
        e = self.order[self.depth]
        top = min(self.used + 1, self.k)
        self.stats.prunes_symmetry += self.k - top
        pages = []
        for p in range(1, top + 1):
            if self.adj_block[e][p]:
                self.stats.prunes_adjacency += 1
            elif self.cross_block[e][p]:
                self.stats.prunes_crossing += 1
            else:
                pages.append(p)
        return pages

    def _touch(self, f: int, p: int, counts: list[list[int]], delta: int) -> None:
        before = self.adj_block[f][p] + self.cross_block[f][p]
        counts[f][p] += delta
        after = self.adj_block[f][p] + self.cross_block[f][p]
        if before == 0 and after > 0:
            self.blocked[f] += 1
            if self.blocked[f] == self.k:
                self.wipeouts += 1
        elif before > 0 and after == 0:
            if self.blocked[f] == self.k:
                self.wipeouts -= 1
            self.blocked[f] -= 1

    def apply(self, p: int) -> None:
        e = self.order[self.depth]
        self.page[e] = p
        self._used_stack.append(self.used)
        self.used = max(self.used, p)
        self.depth += 1
        for f in self.adjacent[e]:
            if not self.page[f]:
                self._touch(f, p, self.adj_block, 1)
        for f in self.crossing[e]:
            if not self.page[f]:
                self._touch(f, p, self.cross_block, 1)

    def undo(self, p: int) -> None:
        self.depth -= 1
        e = self.order[self.depth]
        for f in self.adjacent[e]:
            if not self.page[f]:
                self._touch(f, p, self.adj_block, -1)
        for f in self.crossing[e]:
            if not self.page[f]:
                self._touch(f, p, self.cross_block, -1)
        self.page[e] = 0
        self.used = self._used_stack.pop()

    def is_complete(self) -> bool:
        return self.depth == len(self.order)

    def solution(self) -> dict[Edge, int]:
        return {edge: self.page[i] for i, edge in enumerate(self.graph.edges)}


def spread_pages(assignment: dict[Edge, int], k: int) -> dict[Edge, int]:
    """Fill empty pages by moving single edges off the fullest page.

    A lone edge is always valid on its own page, so a valid coloring with
    at most k pages becomes a surjective k-page coloring whenever m >= k.
    """
    pages: dict[int, list[Edge]] = defaultdict(list)
    for edge, p in sorted(assignment.items()):
        pages[p].append(edge)
    result = dict(assignment)
    for p in range(1, k + 1):
        if pages[p]:
            continue
        donor = max(range(1, k + 1), key=lambda q: (len(pages[q]), -q))
        edge = pages[donor].pop(0)
        pages[p].append(edge)
        result[edge] = p
    return result


def capacity_exhausted(graph: Graph, k: int) -> bool:
    """No surjective k-page matching coloring can exist by counting alone."""
    return graph.m < k or graph.m > k * (graph.n // 2)


def _require_layout(graph: Graph, layout: CyclicLayout) -> None:
    if layout.n != graph.n:
        raise MalformedInputError(
            f"Layout has {layout.n} vertices, graph has {graph.n}.",
            details=[ErrorDetail(code="LAYOUT_SIZE_MISMATCH", message=f"{layout.n} != {graph.n}",
                                 field="layout")],
        )


def _require_k(k: int) -> None:
    if k < 1:
        raise PreconditionError(
            f"Page count must be >= 1, got {k}.",
            details=[ErrorDetail(code="INVALID_PAGE_COUNT", message=f"k = {k}", field="k")],
        )


def _checked_witness(graph: Graph, layout: CyclicLayout, assignment: dict[Edge, int], k: int) -> BookEmbedding:
    witness = BookEmbedding(graph, layout, PageColoring.from_mapping(spread_pages(assignment, k), k=k))
    report = verify(witness)
    if not report.valid:
        raise BookError(
            "Search produced a coloring that fails verification.",
            details=[ErrorDetail(code="UNSOUND_WITNESS", message=v.describe()) for v in report.violations],
        )
    return witness


def color_search(
    graph: Graph,
    layout: CyclicLayout,
    k: int,
    config: SearchConfig | None = None,
    resume: str | Path | None = None,
) -> SearchOutcome:
    """Decide whether (graph, layout) has a k-page matching book embedding."""
    _require_k(k)
    _require_layout(graph, layout)
    config = config or SearchConfig()

    if capacity_exhausted(graph, k):
        stats = SearchStatistics(prunes_capacity=1)
        logger.debug(f"color_search: capacity rules out k={k} (n={graph.n}, m={graph.m})")
        return SearchOutcome("exhausted", stats=stats)

    logger.debug(f"color_search: n={graph.n} m={graph.m} k={k}")
    key = f"color|{graph.n}|{graph.edges}|{layout.order}|{k}"
    result = drive(partial(ColorSearchProblem, graph, layout, k), config, key, "color", resume)
    outcome = SearchOutcome(_outcome_status(result.status), stats=result.stats,
                            checkpoint_path=result.checkpoint_path)
    if result.status == "found":
        outcome.witness = _checked_witness(graph, layout, result.solution, k)
    logger.debug(f"color_search: {outcome.status} after {result.stats.nodes} nodes")
    return outcome


def layout_search(graph: Graph, k: int, config: SearchConfig | None = None) -> SearchOutcome:
    """Any layout up to rotation/reflection admitting k pages; budgets apply per layout."""
    _require_k(k)
    config = config or SearchConfig()
    total = SearchStatistics()
    if capacity_exhausted(graph, k):
        total.prunes_capacity += 1
        return SearchOutcome("exhausted", stats=total)
    budget_hit = False
    for layout in enumerate_layouts(graph.n):
        outcome = color_search(graph, layout, k, config.model_copy(update={"checkpoint_interval": None}))
        total.merge(outcome.stats)
        if outcome.found:
            outcome.stats = total
            return outcome
        budget_hit = budget_hit or outcome.status == "budget-exhausted"
    return SearchOutcome("budget-exhausted" if budget_hit else "exhausted", stats=total)


# ── Exact matching book thickness ─────────────────────────


def mbt_exact(graph: Graph, max_vertices: int | None = None) -> int:
    """Least k over all layouts, by canonical layout enumeration."""
    ceiling = max_vertices if max_vertices is not None else get_settings().mbt_max_vertices
    if graph.n > ceiling:
        raise GraphTooLargeError(
            f"mbt_exact refuses graphs above {ceiling} vertices (got {graph.n}).",
            details=[ErrorDetail(code="TOO_MANY_VERTICES", message=f"n = {graph.n}", field="n",
                                 hint="Raise MBT_MAX_VERTICES only for graphs you expect to finish.")],
        )
    if graph.m == 0:
        return 0

    quiet = SearchConfig()
    for k in range(max(1, max_degree(graph)), graph.m + 1):
        if capacity_exhausted(graph, k):
            logger.debug(f"mbt_exact: k={k} ruled out by capacity")
            continue
        for count, layout in enumerate(enumerate_layouts(graph.n), start=1):
            if color_search(graph, layout, k, quiet).found:
                logger.info(f"mbt_exact: n={graph.n} m={graph.m} -> {k} (layout {layout.order})")
                return k
            if count % 5000 == 0:
                logger.debug(f"mbt_exact: k={k}, {count} layouts tried")
    # Unreachable: k = m puts every edge on its own page.
    raise BookError("mbt_exact found no embedding with m pages.")
