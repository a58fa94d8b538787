import networkx as nx
import pytest

from app.core.errors import InvalidOrderError, MalformedInputError
from app.core.graph import (
    Graph,
    ProductNumbering,
    cartesian_product,
    chromatic_index_bounds,
    classify_page_count,
    complete_graph,
    cycle,
    is_bipartite,
    is_regular,
    max_degree,
    mbt_lower_bound,
    path,
    product_upper_bound,
)


def test_cycle_edges():
    assert cycle(3).edges == ((1, 2), (1, 3), (2, 3))
    assert cycle(5).m == 5
    assert all(cycle(6).degree(v) == 2 for v in range(1, 7))


def test_cycle_rejects_short_orders():
    with pytest.raises(InvalidOrderError) as exc:
        cycle(2)
    assert exc.value.details[0].code == "INVALID_ORDER"


def test_graph_collects_every_problem():
    with pytest.raises(MalformedInputError) as exc:
        Graph(n=3, edges=((2, 1), (1, 1), (1, 7)))
    codes = {d.code for d in exc.value.details}
    assert {"EDGE_NOT_NORMALIZED", "SELF_LOOP", "ENDPOINT_OUT_OF_RANGE", "EDGES_NOT_SORTED"} <= codes


def test_from_edges_reports_duplicates():
    with pytest.raises(MalformedInputError) as exc:
        Graph.from_edges(3, [(1, 2), (2, 1)])
    assert [d.code for d in exc.value.details] == ["DUPLICATE_EDGE"]


def test_product_numbering_round_trip():
    numbering = ProductNumbering(3, 5)
    assert numbering.vertex(1, 1) == 1
    assert numbering.vertex(3, 2) == 6
    assert numbering.coords(6) == (3, 2)
    assert list(numbering.block_vertices(5)) == [13, 14, 15]
    with pytest.raises(MalformedInputError):
        numbering.vertex(4, 1)


@pytest.mark.parametrize("m,n", [(3, 3), (3, 5), (5, 5), (4, 3)])
def test_cartesian_product_matches_networkx(m, n):
    product = cartesian_product(cycle(m), cycle(n))
    assert product.n == m * n
    assert product.m == 2 * m * n
    reference = nx.cartesian_product(nx.cycle_graph(m), nx.cycle_graph(n))
    assert nx.is_isomorphic(product.to_networkx(), reference)


def test_cartesian_product_numbering():
    product = cartesian_product(cycle(3), cycle(3))
    # fiber edges inside block 2 and rungs between blocks
    assert product.has_edge(4, 5)
    assert product.has_edge(4, 6)
    assert product.has_edge(1, 4)
    assert product.has_edge(1, 7)
    assert not product.has_edge(1, 5)


def test_invariants_of_cycle_products():
    c3c3 = cartesian_product(cycle(3), cycle(3))
    assert max_degree(c3c3) == 4
    assert is_regular(c3c3)
    assert not is_bipartite(c3c3)
    assert mbt_lower_bound(c3c3) == 5
    assert mbt_lower_bound(cartesian_product(cycle(5), cycle(5))) == 5
    assert mbt_lower_bound(cartesian_product(cycle(4), cycle(4))) == 4


@pytest.mark.parametrize("g,h", [
    (cycle(3), cycle(3)),
    (cycle(5), cycle(4)),
    (path(3), cycle(5)),
    (complete_graph(4), path(2)),
    (path(4), path(3)),
])
def test_product_degree_is_sum_of_factor_degrees(g, h):
    assert max_degree(cartesian_product(g, h)) == max_degree(g) + max_degree(h)


def test_lower_bound_of_small_graphs():
    assert mbt_lower_bound(cycle(6)) == 2
    assert mbt_lower_bound(cycle(5)) == 3
    assert mbt_lower_bound(complete_graph(4)) == 4
    assert mbt_lower_bound(path(4)) == 2


def test_chromatic_index_bounds():
    assert chromatic_index_bounds(cycle(5)) == (2, 3)


def test_product_upper_bound_needs_bipartite_factor():
    assert product_upper_bound(3, 2, h_bipartite=True) == 5
    assert product_upper_bound(3, 3, h_bipartite=False) is None


def test_classify_page_count():
    assert classify_page_count(4, 4) == "dispersable witness"
    assert classify_page_count(5, 4) == "nearly dispersable witness"
    assert classify_page_count(7, 4) == "other"


def test_networkx_round_trip():
    g = cartesian_product(cycle(3), path(3))
    assert Graph.from_networkx(g.to_networkx()) == g
