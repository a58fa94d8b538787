from typing import Literal

from pydantic import BaseModel, Field, field_validator

from app.core.embedding import BookEmbedding, PageColoring
from app.core.graph import Graph
from app.core.layout import CyclicLayout


class GraphDocument(BaseModel):
    """Graph on vertices 1..n; edges are [u, v] pairs."""
    n: int = Field(..., ge=1, description="Vertex count; vertices are 1..n.")
    edges: list[tuple[int, int]] = Field(
        default_factory=list,
        description="Undirected edges, u < v, lexicographically sorted on output.",
        json_schema_extra={"examples": [[[1, 2], [1, 3], [2, 3]]]},
    )

    def to_graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges)

    @classmethod
    def from_graph(cls, graph: Graph) -> "GraphDocument":
        return cls(n=graph.n, edges=list(graph.edges))


class LayoutedGraphDocument(BaseModel):
    """A graph with a fixed cyclic layout and no coloring yet."""
    graph: GraphDocument
    layout: list[int] = Field(..., description="Counter-clockwise vertex order.")

    def to_layout(self) -> CyclicLayout:
        return CyclicLayout.of(self.layout)


class EmbeddingDocument(BaseModel):
    """Matching book embedding: graph, counter-clockwise layout and page lists."""
    graph: GraphDocument
    layout: list[int] = Field(..., description="Counter-clockwise vertex order.")
    pages: dict[str, list[tuple[int, int]]] = Field(
        ...,
        description='Page number (as string, "1".."k") -> edges on that page.',
    )
    color_names: dict[str, str] | None = Field(
        None,
        description="Display names of the pages (e.g. red, black); not semantic.",
    )

    @field_validator("pages")
    @classmethod
    def validate_page_keys(cls, v: dict[str, list[tuple[int, int]]]) -> dict[str, list[tuple[int, int]]]:
        bad = [key for key in v if not key.isdigit() or int(key) < 1]
        if bad:
            raise ValueError(f"Page keys must be positive integers as strings, got {bad}")
        return v

    def to_embedding(self) -> BookEmbedding:
        k = max((int(p) for p in self.pages), default=1)
        return BookEmbedding(
            graph=self.graph.to_graph(),
            layout=CyclicLayout.of(self.layout),
            coloring=PageColoring.from_pages({int(p): edges for p, edges in self.pages.items()}, k=k),
        )

    def page_names(self) -> dict[int, str]:
        return {int(p): name for p, name in (self.color_names or {}).items()}

    @classmethod
    def from_embedding(cls, embedding: BookEmbedding, color_names: dict[int, str] | None = None) -> "EmbeddingDocument":
        return cls(
            graph=GraphDocument.from_graph(embedding.graph),
            layout=list(embedding.layout.order),
            pages={str(p): list(edges) for p, edges in embedding.pages().items()},
            color_names={str(p): name for p, name in sorted(color_names.items())} if color_names else None,
        )


class SidecarDocument(BaseModel):
    """Renumbering written next to an extended embedding."""
    renumbering: dict[str, int] = Field(..., description="Old vertex -> new vertex.")
    seed: int = Field(..., ge=1)
    r: int = Field(..., ge=2)
    phase: Literal[1, 2]


class ExtensionResponse(BaseModel):
    embedding: EmbeddingDocument
    sidecar: SidecarDocument
    h: int
    s: int


class ViolationDocument(BaseModel):
    kind: Literal["adjacent", "crossing", "unused_page"]
    page: int
    edges: list[tuple[int, int]] = Field(default_factory=list)
    vertex: int | None = None
    message: str


class VerificationSummary(BaseModel):
    """Verifier verdict plus the invariants printed next to it."""
    valid: bool
    k: int = Field(..., description="Number of pages.")
    delta: int = Field(..., description="Maximum degree.")
    lower_bound: int = Field(..., description="Delta, or Delta+1 for regular nonbipartite graphs.")
    classification: Literal["dispersable witness", "nearly dispersable witness", "other"]
    violations: list[ViolationDocument] = Field(default_factory=list)


class FixtureSummary(BaseModel):
    name: str
    provenance: str
    kind: Literal["embedding", "gadget"]
    h: int
    s: int


class MbtResponse(BaseModel):
    n: int
    m: int
    mbt: int
    lower_bound: int
