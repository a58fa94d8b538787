"""Published embeddings of C3 x C3 and C5 x C5 and the non-seed block gadget.

Page numbers follow each construction's own color enumeration; names are
for display only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from app.core.blocks import SeedReport, assess_block
from app.core.embedding import BookEmbedding, PageColoring
from app.core.graph import cartesian_product, cycle
from app.core.layout import CyclicLayout

C3C3_LAYOUT = (1, 2, 3, 6, 5, 4, 7, 8, 9)
C3C3_COLOR_NAMES = {1: "red", 2: "black", 3: "green", 4: "blue", 5: "purple"}
C3C3_PAGES = {
    1: [(1, 2), (3, 9), (5, 6), (8, 7)],
    2: [(1, 3), (9, 6), (8, 5), (7, 4)],
    3: [(2, 3), (6, 4), (1, 7), (8, 9)],
    4: [(2, 8), (4, 5)],
    5: [(3, 6), (2, 5), (1, 4), (9, 7)],
}

C5C5_LAYOUT = (
    1, 2, 3, 4, 5, 10, 9, 8, 7, 6, 11, 12, 13, 15, 14,
    19, 20, 16, 17, 18, 23, 22, 21, 25, 24,
)
C5C5_COLOR_NAMES = {1: "purple", 2: "blue", 3: "red", 4: "green", 5: "black"}
C5C5_PAGES = {
    1: [(1, 2), (3, 4), (9, 14), (8, 7), (11, 15), (12, 13), (24, 19), (25, 20),
        (21, 16), (22, 17), (23, 18)],
    2: [(2, 3), (1, 5), (10, 9), (7, 6), (11, 12), (13, 18), (15, 20), (14, 19),
        (16, 17), (21, 22), (23, 24)],
    3: [(5, 10), (4, 9), (3, 8), (2, 7), (1, 6), (12, 17), (13, 14), (22, 23), (25, 21)],
    4: [(24, 25), (1, 21), (2, 22), (3, 23), (4, 5), (10, 15), (8, 13), (7, 12), (6, 11),
        (19, 18), (20, 16)],
    5: [(4, 24), (5, 25), (10, 6), (9, 8), (11, 16), (15, 14), (19, 20), (18, 17)],
}

# r, b, r, g around the circle, inner chord b; before p,k,k,k,k; after g,p,p,p,p.
# Page numbers use the red/black/green/blue/purple enumeration.
GADGET_COLOR_NAMES = C3C3_COLOR_NAMES
_R, _K, _G, _B, _P = 1, 2, 3, 4, 5


@dataclass(frozen=True)
class BlockGadget:
    """A single block with page sets for its edges and boundary matchings."""
    t: int
    k: int
    order: tuple[int, ...]
    intra: dict[tuple[int, int], int]
    before: tuple[int, ...]
    after: tuple[int, ...]

    def report(self) -> SeedReport:
        return assess_block(
            set(self.intra.values()), set(self.before), set(self.after),
            t=self.t, k=self.k, order=self.order,
        )

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "k": self.k,
            "order": list(self.order),
            "intra": [[u, v, p] for (u, v), p in sorted(self.intra.items())],
            "before": list(self.before),
            "after": list(self.after),
        }


BLOCK_GADGET = BlockGadget(
    t=2,
    k=5,
    order=(1, 2, 3, 4, 5),
    intra={(1, 2): _R, (2, 3): _B, (3, 4): _R, (4, 5): _G, (1, 5): _B},
    before=(_P, _K, _K, _K, _K),
    after=(_G, _P, _P, _P, _P),
)


@dataclass(frozen=True)
class Fixture:
    name: str
    provenance: str
    h: int
    s: int
    color_names: dict[int, str] = field(default_factory=dict)
    embedding: BookEmbedding | None = None
    gadget: BlockGadget | None = None


@lru_cache
def c3c3_embedding() -> BookEmbedding:
    return BookEmbedding(
        graph=cartesian_product(cycle(3), cycle(3)),
        layout=CyclicLayout(C3C3_LAYOUT),
        coloring=PageColoring.from_pages(C3C3_PAGES, k=5),
    )


@lru_cache
def c5c5_embedding() -> BookEmbedding:
    return BookEmbedding(
        graph=cartesian_product(cycle(5), cycle(5)),
        layout=CyclicLayout(C5C5_LAYOUT),
        coloring=PageColoring.from_pages(C5C5_PAGES, k=5),
    )


def c3c3_fixture() -> Fixture:
    return Fixture(
        name="lemma1-c3c3",
        provenance="Lemma 1: C3 x C3, 5 pages (red, black, green, blue, purple).",
        h=3, s=3,
        color_names=C3C3_COLOR_NAMES,
        embedding=c3c3_embedding(),
    )


def c5c5_fixture() -> Fixture:
    return Fixture(
        name="lemma2-c5c5",
        provenance="Lemma 2: C5 x C5, 5 pages (purple, blue, red, green, black).",
        h=5, s=5,
        color_names=C5C5_COLOR_NAMES,
        embedding=c5c5_embedding(),
    )


def gadget_fixture() -> Fixture:
    return Fixture(
        name="figure3-gadget",
        provenance="Figure 3: C5 block gadget, condition (a) holds, (b) fails.",
        h=5, s=1,
        color_names=GADGET_COLOR_NAMES,
        gadget=BLOCK_GADGET,
    )
