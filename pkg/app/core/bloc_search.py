"""Search for extensible en bloc embeddings of H x C_s.

Blocks are placed outward from block 1 (1, 2, s, 3, s-1, ...): choosing
a block's internal order makes its own edges and the matchings to
already placed neighbours colorable, and those edges are colored before
the next block is placed, most constrained edge first.

Block 1 is required to be the seed. Any seed can be rotated into block 1
by relabeling the cycle factor, so this loses no solutions and lets the
seed conditions prune from the first block on. Block 1's order is taken
up to H's rotations and reflections and up to reversal (the reflection
of the cycle factor that fixes block 1).

A matching edge whose other block is still unplaced is pending: every
colored chord either crosses it whatever that block's order turns out
to be or never does, so pending edges take part in forward checking.
"""

from __future__ import annotations

import itertools
import logging
from functools import partial
from pathlib import Path

from app.core.blocks import is_extensible
from app.core.dfs import SearchStatistics
from app.core.embedding import BookEmbedding, PageColoring, verify
from app.core.errors import BookError, ErrorDetail, PreconditionError
from app.core.extension import extend
from app.core.graph import (
    Edge,
    Graph,
    ProductNumbering,
    cartesian_product,
    cycle,
    is_bipartite,
    is_regular,
    max_degree,
    normalize_edge,
)
from app.core.layout import CyclicLayout, chords_cross
from app.core.search import SearchOutcome, capacity_exhausted, drive
from app.schemas.search import SearchConfig

logger = logging.getLogger(__name__)

_INTRA_SEED = "intra_seed"
_AFTER_SEED = "after_seed"
_BEFORE_SEED = "before_seed"
_OTHER = "other"

_UNTRACKED, _PENDING, _FULL = 0, 1, 2


def factor_symmetries(h_graph: Graph) -> list[tuple[int, ...]]:
    """Rotations and reflections of the labels 1..h that map H onto itself.

    A map `m` sends label i to m[i - 1]; the identity comes first.
    """
    h = h_graph.n
    maps: dict[tuple[int, ...], None] = {}
    for r in range(h):
        maps[tuple((i - 1 + r) % h + 1 for i in range(1, h + 1))] = None
        maps[tuple((r - i) % h + 1 for i in range(1, h + 1))] = None
    return [
        m for m in maps
        if all(h_graph.has_edge(m[u - 1], m[v - 1]) for u, v in h_graph.edges)
    ]


def placement_order(s: int) -> list[int]:
    """1, 2, s, 3, s-1, ...: both neighbours of block 1 come right after it."""
    order, lo, hi = [1], 2, s
    while lo <= hi:
        order.append(lo)
        lo += 1
        if lo <= hi:
            order.append(hi)
            hi -= 1
    return order


def _concordant_pairs(first: tuple[int, ...], second: tuple[int, ...]) -> int:
    """Pairs of labels in the same relative order; their matching chords cross."""
    at = {label: i for i, label in enumerate(second)}
    return sum(1 for a, b in itertools.combinations(first, 2) if at[a] < at[b])


class BlocSearchProblem:
    """DFS state for the en bloc campaign.

    Options are block orders when every placed edge is colored, and
    (edge, page) pairs for the most constrained open edge otherwise.
    """

    def __init__(self, h_graph: Graph, s: int, k: int):
        self.h_graph = h_graph
        self.h = h_graph.n
        self.s = s
        self.k = k
        self.t = max_degree(h_graph)
        self.stats = SearchStatistics()
        self.numbering = ProductNumbering(self.h, s)
        self.symmetries = factor_symmetries(h_graph)
        self.placement = placement_order(s)
        self.perms = list(itertools.permutations(range(1, self.h + 1)))

        vertex = self.numbering.vertex
        self.seq: list[Edge] = []
        self.kind: list[str] = []
        self.intra: dict[int, list[int]] = {}
        # matching[j] joins block j to its successor; matching[s] closes the cycle.
        self.matching: dict[int, list[int]] = {}
        for j in range(1, s + 1):
            kind = _INTRA_SEED if j == 1 else _OTHER
            self.intra[j] = [self._add(normalize_edge(vertex(a, j), vertex(b, j)), kind)
                             for a, b in h_graph.edges]
        for j in range(1, s + 1):
            nxt = j % s + 1
            kind = _AFTER_SEED if j == 1 else _BEFORE_SEED if nxt == 1 else _OTHER
            self.matching[j] = [self._add(normalize_edge(vertex(i, j), vertex(i, nxt)), kind)
                                for i in range(1, self.h + 1)]
        self.boundary = {_AFTER_SEED: self.matching[1], _BEFORE_SEED: self.matching[s]}

        m = len(self.seq)
        self.m = m
        self.pos = [-1] * (self.h * s + 1)
        self.orders: dict[int, tuple[int, ...]] = {}
        self.status = [_UNTRACKED] * m
        self.arc: list[tuple[int, int]] = [(0, 0)] * m
        self.adjacent: list[list[int]] = [[] for _ in range(m)]
        self.crossing: list[list[int]] = [[] for _ in range(m)]
        self.page = [0] * m
        self.adj_block = [[0] * (k + 1) for _ in range(m)]
        self.cross_block = [[0] * (k + 1) for _ in range(m)]
        self.blocked = [0] * m
        self.wipeouts = 0
        self.colored = 0
        self.used = 0
        self._used_stack: list[int] = []
        self.phase: list[int] = []
        self.open_count = 0
        self._placed: list[tuple[int, list[int], list[int], list[int]]] = []
        self._moves: list[str] = []
        self.seed_pages = {_INTRA_SEED: [0] * (k + 1), _AFTER_SEED: [0] * (k + 1), _BEFORE_SEED: [0] * (k + 1)}
        self.first_orders = [
            o for o in self.perms
            if o == min(tuple(sym[i - 1] for i in seq) for sym in self.symmetries for seq in (o, o[::-1]))
        ]

    def _add(self, edge: Edge, kind: str) -> int:
        self.seq.append(edge)
        self.kind.append(kind)
        return len(self.seq) - 1

    # ── options ──

    def options(self) -> list:
        if self.wipeouts:
            self.stats.prunes_forward += 1
            return []
        if self.m - self.colored < self.k - self.used:
            self.stats.prunes_capacity += 1
            return []
        if self._seed_ready() and not self._seed_pair_open():
            self.stats.prunes_seed += 1
            return []
        if self.open_count:
            return self._edge_options()
        if len(self._placed) < self.s:
            return self._order_options(self.placement[len(self._placed)])
        return []

    def _order_options(self, j: int) -> list[tuple[int, ...]]:
        if j == 1:
            self.stats.prunes_symmetry += len(self.perms) - len(self.first_orders)
            return list(self.first_orders)
        neighbours = [self.orders[b] for b in ((j - 2) % self.s + 1, j % self.s + 1) if b in self.orders]
        # Fewest crossing matching chords first; ties keep lexicographic order.
        return sorted(self.perms, key=lambda o: sum(_concordant_pairs(nb, o) for nb in neighbours))

    def _free_pages(self, e: int, top: int) -> list[int]:
        return [
            p for p in range(1, top + 1)
            if not (self.adj_block[e][p] or self.cross_block[e][p]) and self._seed_feasible(self.kind[e], p)
        ]

    def _edge_options(self) -> list[tuple[int, int]]:
        top = min(self.used + 1, self.k)
        best, best_pages = -1, None
        for e in self.phase:
            if self.page[e]:
                continue
            pages = self._free_pages(e, top)
            if best_pages is None or len(pages) < len(best_pages):
                best, best_pages = e, pages
                if not pages:
                    break
        self.stats.prunes_symmetry += self.k - top
        for p in range(1, top + 1):
            if self.adj_block[best][p]:
                self.stats.prunes_adjacency += 1
            elif self.cross_block[best][p]:
                self.stats.prunes_crossing += 1
            elif p not in best_pages:
                self.stats.prunes_seed += 1
        return [(best, p) for p in best_pages]

    def _seed_feasible(self, kind: str, p: int) -> bool:
        if kind == _OTHER:
            return True
        intra = {q for q in range(1, self.k + 1) if self.seed_pages[_INTRA_SEED][q]}
        if kind == _INTRA_SEED:
            return p in intra or len(intra) < self.t + 1
        before = {q for q in range(1, self.k + 1) if self.seed_pages[_BEFORE_SEED][q]}
        after = {q for q in range(1, self.k + 1) if self.seed_pages[_AFTER_SEED][q]}
        (before if kind == _BEFORE_SEED else after).add(p)
        unused = [q for q in range(1, self.k + 1) if q not in intra]
        # Boundary page sets only grow, so a pair caught inside one stays caught.
        return any(
            not {a, b} <= before and not {a, b} <= after
            for a, b in itertools.combinations(unused, 2)
        )

    def _seed_ready(self) -> bool:
        return sum(self.seed_pages[_INTRA_SEED]) == len(self.intra[1])

    def _seed_pair_open(self) -> bool:
        """Some unused pair can still be kept out of each boundary matching as a whole."""
        unused = [q for q in range(1, self.k + 1) if not self.seed_pages[_INTRA_SEED][q]]
        avoidable = {
            side: {q for q in unused if self._avoidable(side, q)}
            for side in (_AFTER_SEED, _BEFORE_SEED)
        }
        return any(
            all(a in pages or b in pages for pages in avoidable.values())
            for a, b in itertools.combinations(unused, 2)
        )

    def _avoidable(self, side: str, q: int) -> bool:
        if self.seed_pages[side][q]:
            return False
        for e in self.boundary[side]:
            if self.page[e] or self.status[e] == _UNTRACKED:
                continue
            free = self.k - self.blocked[e]
            if not (self.adj_block[e][q] or self.cross_block[e][q]):
                free -= 1
            if free < 1:
                return False
        return True

    # ── apply / undo ──

    def _conflict(self, e: int, f: int) -> str | None:
        """Conflict of a fully placed edge e with a tracked edge f."""
        a, b = self.seq[e]
        c, d = self.seq[f]
        if a == c or a == d or b == c or b == d:
            return "adjacent"
        pos = self.pos
        if self.status[f] == _FULL:
            return "crossing" if chords_cross(pos[a], pos[b], pos[c], pos[d]) else None
        lo, hi = self.arc[f]
        return "crossing" if (lo <= pos[a] < hi) != (lo <= pos[b] < hi) else None

    def _place(self, j: int, order: tuple[int, ...]) -> None:
        base = (j - 1) * self.h
        for offset, i in enumerate(order):
            self.pos[self.numbering.vertex(i, j)] = base + offset
        self.orders[j] = order

        promoted, pending = [], []
        prev, nxt = (j - 2) % self.s + 1, j % self.s + 1
        for neighbour, edges, after in ((prev, self.matching[prev], False), (nxt, self.matching[j], True)):
            if neighbour in self.orders:
                promoted.extend(edges)
                continue
            for e in edges:
                a, b = self.seq[e]
                x = self.pos[a] if self.numbering.block_of(a) == j else self.pos[b]
                # Positions strictly between x and the unplaced block.
                self.arc[e] = (x + 1, base + self.h) if after else (base, x)
                self.status[e] = _PENDING
                pending.append(e)
        # Colored chords never touch block j, so every edge that enters here starts unblocked.
        full = self.intra[j] + promoted
        for e in full:
            self.status[e] = _FULL
        tracked = [f for f in range(self.m) if self.status[f] != _UNTRACKED and not self.page[f]]
        for e in full:
            adjacent, crossing = [], []
            for f in tracked:
                if f == e:
                    continue
                conflict = self._conflict(e, f)
                if conflict == "adjacent":
                    adjacent.append(f)
                elif conflict == "crossing":
                    crossing.append(f)
            self.adjacent[e], self.crossing[e] = adjacent, crossing
        self._placed.append((j, promoted, pending, self.phase))
        self.phase = full
        self.open_count = len(full)

    def _unplace(self, order: tuple[int, ...]) -> None:
        j, promoted, pending, phase = self._placed.pop()
        for e in pending + self.intra[j]:
            self.status[e] = _UNTRACKED
        for e in promoted:
            self.status[e] = _PENDING
        for i in order:
            self.pos[self.numbering.vertex(i, j)] = -1
        del self.orders[j]
        self.phase = phase
        self.open_count = 0

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

    def _color(self, e: int, p: int, delta: int) -> None:
        for f in self.adjacent[e]:
            if not self.page[f]:
                self._touch(f, p, self.adj_block, delta)
        for f in self.crossing[e]:
            if not self.page[f]:
                self._touch(f, p, self.cross_block, delta)
        if self.kind[e] != _OTHER:
            self.seed_pages[self.kind[e]][p] += delta

    def apply(self, option) -> None:
        if self.open_count:
            e, p = option
            self.page[e] = p
            self.colored += 1
            self.open_count -= 1
            self._used_stack.append(self.used)
            self.used = max(self.used, p)
            self._color(e, p, 1)
            self._moves.append("page")
        else:
            self._place(self.placement[len(self._placed)], option)
            self._moves.append("order")

    def undo(self, option) -> None:
        if self._moves.pop() == "order":
            self._unplace(option)
            return
        e, p = option
        self.page[e] = 0
        self._color(e, p, -1)
        self.colored -= 1
        self.open_count += 1
        self.used = self._used_stack.pop()

    def is_complete(self) -> bool:
        return len(self._placed) == self.s and self.colored == self.m and self.used == self.k

    def solution(self) -> tuple[tuple[int, ...], dict[Edge, int]]:
        layout = tuple(
            self.numbering.vertex(i, j) for j in range(1, self.s + 1) for i in self.orders[j]
        )
        return layout, dict(zip(self.seq, self.page))


def _require_factor(h_graph: Graph, s: int, k: int) -> int:
    errors: list[ErrorDetail] = []
    t = max_degree(h_graph)
    if not is_regular(h_graph):
        errors.append(ErrorDetail(code="FACTOR_NOT_REGULAR", message="H must be regular.", field="h"))
    if is_bipartite(h_graph):
        errors.append(ErrorDetail(code="FACTOR_BIPARTITE", message="H must be nonbipartite.", field="h",
                                  hint="Bipartite factors are dispersable; no seed search is needed."))
    if k != t + 3:
        errors.append(ErrorDetail(code="PAGE_COUNT_NOT_T_PLUS_3", message=f"k = {k}, t = {t}", field="k"))
    if s < 3:
        errors.append(ErrorDetail(code="CYCLE_TOO_SHORT", message=f"s = {s}", field="s"))
    if errors:
        raise PreconditionError(f"Extensible search is not defined for this input ({len(errors)} error(s)).",
                                details=errors)
    return t


def search_extensible(
    h_graph: Graph,
    s: int,
    k: int,
    config: SearchConfig | None = None,
    resume: str | Path | None = None,
) -> SearchOutcome:
    """Find an extensible k-page en bloc embedding of h_graph x C_s."""
    t = _require_factor(h_graph, s, k)
    h = h_graph.n
    config = config or SearchConfig(k=k, layout_mode="en_bloc", h=h, s=s)
    graph = cartesian_product(h_graph, cycle(s))
    if capacity_exhausted(graph, k):
        return SearchOutcome("exhausted", stats=SearchStatistics(prunes_capacity=1))

    logger.info(f"Extensible search: H with {h} vertices, s={s}, k={k}, "
                f"node budget {config.node_budget}, workers {config.workers}")
    key = f"bloc|{h}|{h_graph.edges}|{s}|{k}"
    result = drive(partial(BlocSearchProblem, h_graph, s, k), config, key, "bloc", resume)
    status = "budget-exhausted" if result.status == "budget" else result.status
    outcome = SearchOutcome(status, stats=result.stats, checkpoint_path=result.checkpoint_path)

    if result.status == "found":
        order, pages = result.solution
        witness = BookEmbedding(graph, CyclicLayout(order), PageColoring.from_mapping(pages, k=k))
        report = verify(witness)
        verdict = is_extensible(witness, h, s, t)
        if not report.valid or not verdict.extensible:
            raise BookError(
                "En bloc search produced a witness that is not extensible.",
                details=[ErrorDetail(code="UNSOUND_WITNESS", message=verdict.reason or "invalid")],
            )
        smoke = extend(witness, min(verdict.seeds), 2, h=h, s=s)
        logger.info(f"Witness seeds {verdict.seeds}; extension smoke test gave "
                    f"{smoke.embedding.graph.n} vertices with phase {smoke.plan.phase}")
        outcome.witness = witness
        outcome.verdict = verdict

    stats = result.stats
    logger.info(f"Extensible search {outcome.status}: nodes={stats.nodes} "
                f"prunes adj={stats.prunes_adjacency} cross={stats.prunes_crossing} "
                f"sym={stats.prunes_symmetry} seed={stats.prunes_seed} fwd={stats.prunes_forward} "
                f"capacity={stats.prunes_capacity} elapsed={stats.elapsed:.2f}s")
    return outcome
