"""Search service - resolves graph/layout arguments and dispatches the searches."""

import logging
import re
from pathlib import Path

from app.core.bloc_search import search_extensible
from app.core.cnf import export_cnf
from app.core.errors import ErrorDetail, MalformedInputError
from app.core.graph import Graph, complete_graph, cycle, mbt_lower_bound, path
from app.core.layout import CyclicLayout
from app.core.search import SearchOutcome, color_search, layout_search, mbt_exact
from app.config import get_settings
from app.schemas.documents import GraphDocument, LayoutedGraphDocument, MbtResponse
from app.schemas.search import SearchConfig
from app.services.embedding_service import parse_document, read_json
from app.services.fixture_service import fixture_names, get_fixture

logger = logging.getLogger(__name__)

NAMED_GRAPH = re.compile(r"^(cycle|path|complete)(\d+)$")
_GENERATORS = {"cycle": cycle, "path": path, "complete": complete_graph}


def resolve_graph(source: str) -> Graph:
    """`cycle7`, `path4`, `complete4`, a fixture name or a graph/embedding JSON path."""
    match = NAMED_GRAPH.match(source)
    if match:
        return _GENERATORS[match.group(1)](int(match.group(2)))
    if source in fixture_names():
        fixture = get_fixture(source)
        if fixture.embedding is not None:
            return fixture.embedding.graph
    data = read_json(source)
    if "graph" in data:
        data = data["graph"]
    return parse_document(GraphDocument, data, source).to_graph()


def resolve_layout(source: str | None, graph: Graph) -> CyclicLayout:
    """`identity`, a fixture name (its layout), `lemma1`/`lemma2`, or `v1,v2,...`."""
    if source is None or source == "identity":
        return CyclicLayout.identity(graph.n)
    aliases = {"lemma1": "lemma1-c3c3", "lemma2": "lemma2-c5c5"}
    name = aliases.get(source, source)
    if name in fixture_names() and get_fixture(name).embedding is not None:
        return get_fixture(name).embedding.layout
    if Path(source).is_file():
        data = read_json(source)
        return CyclicLayout.of(data["layout"] if isinstance(data, dict) else data)
    try:
        return CyclicLayout.of(int(tok) for tok in source.split(","))
    except ValueError as exc:
        raise MalformedInputError(
            f"Cannot read layout '{source}'.",
            details=[ErrorDetail(code="BAD_LAYOUT", message=str(exc), field="layout",
                                 hint="Use identity, a fixture name or a comma-separated vertex list.")],
        ) from exc


def search_config(**overrides) -> SearchConfig:
    """SearchConfig with unset budgets filled from Settings."""
    settings = get_settings()
    values = {
        "node_budget": settings.search_node_budget,
        "time_budget": settings.search_time_budget,
        "checkpoint_interval": settings.search_checkpoint_interval,
        "workers": settings.search_workers,
    }
    values.update({key: value for key, value in overrides.items() if value is not None})
    return parse_document(SearchConfig, values, "search options")


def run_search(
    graph: Graph | None,
    config: SearchConfig,
    layout: CyclicLayout | None = None,
    h_graph: Graph | None = None,
    resume: str | None = None,
) -> SearchOutcome:
    if config.layout_mode == "en_bloc":
        return search_extensible(h_graph, config.s, config.k, config, resume=resume)
    if config.layout_mode == "all":
        return layout_search(graph, config.k, config)
    return color_search(graph, layout or CyclicLayout.identity(graph.n), config.k, config, resume=resume)


def mbt(graph: Graph) -> MbtResponse:
    return MbtResponse(n=graph.n, m=graph.m, mbt=mbt_exact(graph), lower_bound=mbt_lower_bound(graph))


def cnf_text(document: LayoutedGraphDocument, k: int) -> str:
    graph = document.graph.to_graph()
    return export_cnf(graph, document.to_layout(), k).to_dimacs()
