import pytest
from hypothesis import given, settings, strategies as st

from app.core.embedding import BookEmbedding, PageColoring, verify
from app.core.errors import MalformedInputError
from app.core.fixtures import C3C3_PAGES, C5C5_PAGES
from app.core.graph import Graph, cartesian_product, cycle, max_degree
from app.core.layout import CyclicLayout
from app.schemas.documents import EmbeddingDocument

from .oracles import coloring_is_valid
from .strategies import instances


@pytest.mark.parametrize("pages,m", [(C3C3_PAGES, 3), (C5C5_PAGES, 5)])
def test_fixture_pages_cover_the_product_exactly(pages, m):
    listed = [tuple(sorted(e)) for edges in pages.values() for e in edges]
    assert len(listed) == len(set(listed))
    assert set(listed) == set(cartesian_product(cycle(m), cycle(m)).edges)


@pytest.mark.parametrize("fixture", ["c3c3", "c5c5"])
def test_published_embeddings_are_valid(fixture, request):
    embedding = request.getfixturevalue(fixture)
    report = verify(embedding)
    assert report.valid, [v.describe() for v in report.violations]
    assert report.k == 5
    assert max_degree(embedding.graph) == 4


def test_corrupted_page_label_is_reported(c3c3):
    corrupted = c3c3.with_coloring(c3c3.coloring.recolor({(1, 2): 3}))
    report = verify(corrupted)
    assert not report.valid
    clash = [v for v in report.adjacent_clashes if v.vertex == 2 and (1, 2) in v.edges]
    assert clash and clash[0].page == 3
    assert (2, 3) in clash[0].edges
    assert "adjacent-clash on page 3" in clash[0].describe()


def test_crossing_is_reported():
    graph = Graph.from_edges(4, [(1, 3), (2, 4)])
    embedding = BookEmbedding(graph, CyclicLayout.identity(4), PageColoring.from_mapping({(1, 3): 1, (2, 4): 1}))
    report = verify(embedding)
    assert [v.kind for v in report.violations] == ["crossing"]
    assert report.crossing_clashes[0].edges == ((1, 3), (2, 4))


def test_empty_page_breaks_surjectivity():
    embedding = BookEmbedding(cycle(4), CyclicLayout.identity(4),
                              PageColoring.from_mapping({(1, 2): 1, (3, 4): 1, (2, 3): 2, (1, 4): 2}, k=3))
    report = verify(embedding)
    assert not report.valid
    assert [(v.kind, v.page) for v in report.violations] == [("unused_page", 3)]


def test_malformed_embedding_lists_all_problems():
    with pytest.raises(MalformedInputError) as exc:
        BookEmbedding(cycle(4), CyclicLayout.identity(3), PageColoring.from_mapping({(1, 2): 1, (5, 6): 1}))
    codes = {d.code for d in exc.value.details}
    assert codes == {"LAYOUT_SIZE_MISMATCH", "UNCOLORED_EDGES", "UNKNOWN_EDGES"}


def test_page_out_of_range():
    with pytest.raises(MalformedInputError) as exc:
        PageColoring.from_mapping({(1, 2): 4}, k=3)
    assert exc.value.details[0].code == "PAGE_OUT_OF_RANGE"


def test_conflicting_pairs_of_published_layout(c3c3):
    # only chords that really cross are listed, and none share a page
    page_of = c3c3.coloring.page_of
    assert c3c3.conflicting_pairs
    assert all(page_of[e1] != page_of[e2] for e1, e2 in c3c3.conflicting_pairs)


@pytest.mark.parametrize("fixture", ["c3c3", "c5c5"])
def test_json_round_trip(fixture, request):
    embedding = request.getfixturevalue(fixture)
    document = EmbeddingDocument.from_embedding(embedding)
    again = EmbeddingDocument.model_validate_json(document.model_dump_json())
    assert again.to_embedding() == embedding


@settings(max_examples=80, deadline=None)
@given(instances())
def test_verify_agrees_with_independent_checker(case):
    graph, layout, k = case
    # round-robin pages give a mix of valid and invalid colorings
    pages = {e: i % k + 1 for i, e in enumerate(graph.edges)}
    embedding = BookEmbedding(graph, layout, PageColoring.from_mapping(pages, k=k))
    report = verify(embedding)
    assert report.valid == coloring_is_valid(graph.edges, layout.order, pages, k)
    if report.valid:
        assert k >= max_degree(graph)


@pytest.mark.parametrize("fixture", ["c3c3", "c5c5"])
def test_published_embeddings_stay_valid_when_turned(fixture, request):
    embedding = request.getfixturevalue(fixture)
    for variant in embedding.layout.variants():
        report = verify(embedding.with_layout(variant))
        assert report.valid
        assert report.k == 5


@settings(max_examples=60, deadline=None)
@given(instances(), st.integers(0, 20))
def test_verify_ignores_rotation_and_reflection(case, r):
    graph, layout, k = case
    pages = {e: i % k + 1 for i, e in enumerate(graph.edges)}
    embedding = BookEmbedding(graph, layout, PageColoring.from_mapping(pages, k=k))
    report = verify(embedding)
    for variant in (layout.rotate(r), layout.reflect(), layout.reflect().rotate(r)):
        again = verify(embedding.with_layout(variant))
        assert again.valid == report.valid
        assert again.k == report.k
        assert len(again.violations) == len(report.violations)
