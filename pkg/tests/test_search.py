import logging

import pytest
from hypothesis import given, settings

from app.core.bloc_search import BlocSearchProblem, factor_symmetries, placement_order, search_extensible
from app.core.blocks import is_extensible
from app.core.dfs import Checkpoint, SearchStatistics
from app.core.embedding import verify
from app.core.errors import GraphTooLargeError, MalformedInputError, PreconditionError
from app.core.graph import Graph, cartesian_product, complete_graph, cycle, mbt_lower_bound, path
from app.core.layout import CyclicLayout
from app.core.search import capacity_exhausted, color_search, layout_search, mbt_exact, spread_pages
from app.schemas.search import SearchConfig

from .oracles import coloring_is_valid, naive_coloring_exists
from .strategies import graphs, instances


# ── color_search ─────────────────────────────────────────


def test_published_layout_admits_five_pages(c3c3):
    outcome = color_search(c3c3.graph, c3c3.layout, 5)
    assert outcome.found
    assert verify(outcome.witness).valid
    assert outcome.witness.layout == c3c3.layout


def test_four_pages_ruled_out_by_capacity(c3c3):
    outcome = color_search(c3c3.graph, c3c3.layout, 4)
    assert outcome.status == "exhausted"
    assert outcome.stats.prunes_capacity == 1
    assert outcome.stats.nodes == 0


def test_even_cycle_two_pages():
    outcome = color_search(cycle(4), CyclicLayout.identity(4), 2)
    assert outcome.found
    assert outcome.witness.k == 2


def test_complete_graph_needs_more_than_three_pages():
    outcome = color_search(complete_graph(4), CyclicLayout.identity(4), 3)
    assert outcome.status == "exhausted"
    assert outcome.stats.nodes > 0
    assert outcome.witness is None


def test_layout_size_mismatch_is_malformed():
    with pytest.raises(MalformedInputError):
        color_search(cycle(4), CyclicLayout.identity(5), 2)


def test_k_must_be_positive():
    with pytest.raises(PreconditionError):
        color_search(cycle(4), CyclicLayout.identity(4), 0)


def test_capacity_rule():
    assert capacity_exhausted(cycle(4), 5)
    assert capacity_exhausted(complete_graph(4), 2)
    assert not capacity_exhausted(complete_graph(4), 3)


def test_spread_pages_fills_every_page():
    spread = spread_pages({(1, 2): 1, (3, 4): 1, (2, 3): 2}, 3)
    assert set(spread.values()) == {1, 2, 3}
    assert spread[(2, 3)] == 2


@settings(max_examples=60, deadline=None)
@given(instances(max_n=6, max_m=6, max_k=3))
def test_color_search_agrees_with_brute_force(case):
    graph, layout, k = case
    outcome = color_search(graph, layout, k)
    assert outcome.found == naive_coloring_exists(graph.edges, layout.order, k)
    if outcome.found:
        assert coloring_is_valid(graph.edges, layout.order, outcome.witness.coloring.page_of, k)


# ── Budgets, checkpoints, resume ──────────────────────────


def test_budget_stop_writes_checkpoint_and_resumes_identically(checkpoint_dir):
    graph, layout = cycle(6), CyclicLayout.identity(6)
    uninterrupted = color_search(graph, layout, 2)
    assert uninterrupted.found

    stopped = color_search(graph, layout, 2, SearchConfig(node_budget=3))
    assert stopped.status == "budget-exhausted"
    assert stopped.stats.nodes == 3
    checkpoint = Checkpoint.load(stopped.checkpoint_path)
    assert str(checkpoint_dir) in stopped.checkpoint_path
    assert checkpoint.stats["nodes"] == 3

    resumed = color_search(graph, layout, 2, SearchConfig(), resume=stopped.checkpoint_path)
    assert resumed.found
    assert resumed.witness == uninterrupted.witness
    assert resumed.stats == uninterrupted.stats


def test_node_budget_is_cumulative_across_resumes():
    graph, layout = cycle(6), CyclicLayout.identity(6)
    first = color_search(graph, layout, 2, SearchConfig(node_budget=2))
    second = color_search(graph, layout, 2, SearchConfig(node_budget=4), resume=first.checkpoint_path)
    assert second.status == "budget-exhausted"
    assert second.stats.nodes == 4


def test_periodic_checkpoints(checkpoint_dir):
    outcome = color_search(cycle(6), CyclicLayout.identity(6), 2, SearchConfig(checkpoint_interval=2))
    assert outcome.found
    assert len(list(checkpoint_dir.glob("color-*.json"))) == 1


def test_explicit_checkpoint_path(tmp_path):
    target = tmp_path / "run.json"
    outcome = color_search(complete_graph(4), CyclicLayout.identity(4), 3,
                           SearchConfig(node_budget=1, checkpoint_path=str(target)))
    assert outcome.status == "budget-exhausted"
    assert outcome.checkpoint_path == str(target)
    assert target.exists()


def test_checkpoint_from_other_configuration_starts_fresh(caplog):
    graph, layout = cycle(6), CyclicLayout.identity(6)
    stopped = color_search(graph, layout, 2, SearchConfig(node_budget=3))
    with caplog.at_level(logging.WARNING, logger="app.core.search"):
        outcome = color_search(graph, layout, 3, SearchConfig(), resume=stopped.checkpoint_path)
    assert outcome.found
    assert "another configuration" in caplog.text


def test_unreadable_checkpoint(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(MalformedInputError) as exc:
        color_search(cycle(6), CyclicLayout.identity(6), 2, resume=str(bad))
    assert exc.value.details[0].code == "BAD_CHECKPOINT"


def test_statistics_round_trip():
    stats = SearchStatistics(nodes=5, prunes_seed=2, elapsed=1.5)
    assert SearchStatistics.from_dict(stats.to_dict()) == stats
    stats.merge(SearchStatistics(nodes=1, prunes_seed=1))
    assert (stats.nodes, stats.prunes_seed) == (6, 3)


def test_config_hash_ignores_budgets():
    a = SearchConfig(k=5, node_budget=10, workers=1)
    b = SearchConfig(k=5, node_budget=99, workers=4, time_budget=3.0)
    c = SearchConfig(k=4)
    assert a.config_hash("key") == b.config_hash("key")
    assert a.config_hash("key") != c.config_hash("key")
    assert a.config_hash("key") != a.config_hash("other")


def test_en_bloc_config_requires_factor_sizes():
    with pytest.raises(ValueError):
        SearchConfig(k=5, layout_mode="en_bloc", h=3)
    assert SearchConfig(k=5, layout_mode="en_bloc", h=3, s=3).require_extensible


# ── Parallel mode ─────────────────────────────────────────


def test_parallel_search_finds_witness():
    outcome = color_search(cycle(6), CyclicLayout.identity(6), 2, SearchConfig(workers=2))
    assert outcome.found
    assert verify(outcome.witness).valid


def test_parallel_search_exhausts():
    outcome = color_search(complete_graph(4), CyclicLayout.identity(4), 3, SearchConfig(workers=2))
    assert outcome.status == "exhausted"
    assert outcome.checkpoint_path is None


def test_parallel_budget_stop_writes_resumable_frontier(c3c3):
    stopped = color_search(c3c3.graph, c3c3.layout, 5, SearchConfig(workers=2, node_budget=2))
    assert stopped.status == "budget-exhausted"
    checkpoint = Checkpoint.load(stopped.checkpoint_path)
    assert checkpoint.frontier
    assert all(len(t.prefix) > t.floor for t in checkpoint.frontier)
    assert checkpoint.stats["nodes"] == stopped.stats.nodes

    resumed = color_search(c3c3.graph, c3c3.layout, 5, SearchConfig(workers=2),
                           resume=stopped.checkpoint_path)
    assert resumed.found
    assert verify(resumed.witness).valid


def test_parallel_frontier_resumes_on_one_worker(c3c3):
    stopped = color_search(c3c3.graph, c3c3.layout, 5, SearchConfig(workers=2, node_budget=2))
    resumed = color_search(c3c3.graph, c3c3.layout, 5, resume=stopped.checkpoint_path)
    assert resumed.found
    assert resumed.stats.nodes > stopped.stats.nodes


# ── Layout search and exact thickness ─────────────────────


def test_layout_search():
    assert layout_search(cycle(5), 3).found
    assert layout_search(complete_graph(4), 3).status == "exhausted"


@pytest.mark.parametrize("graph,expected", [
    (cycle(3), 3),
    (cycle(4), 2),
    (cycle(7), 3),
    (cycle(6), 2),
    (cycle(5), 3),
    (path(4), 2),
    (complete_graph(4), 4),
])
def test_mbt_exact(graph, expected):
    assert mbt_exact(graph) == expected


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=6, max_m=6))
def test_mbt_exact_never_beats_the_lower_bound(graph):
    assert mbt_exact(graph) >= mbt_lower_bound(graph)


def test_mbt_of_edgeless_graph():
    assert mbt_exact(Graph.from_edges(3, [])) == 0


def test_mbt_refuses_large_graphs():
    with pytest.raises(GraphTooLargeError) as exc:
        mbt_exact(cycle(11))
    assert exc.value.details[0].code == "TOO_MANY_VERTICES"


@pytest.mark.slow
def test_mbt_of_smallest_cycle_product():
    assert mbt_exact(cartesian_product(cycle(3), cycle(3))) == 5


# ── Extensible en bloc search ─────────────────────────────


def test_factor_symmetries():
    assert len(factor_symmetries(cycle(5))) == 10
    assert factor_symmetries(cycle(5))[0] == (1, 2, 3, 4, 5)
    assert len(factor_symmetries(cycle(3))) == 6
    assert factor_symmetries(path(3)) == [(1, 2, 3), (3, 2, 1)]


def test_placement_grows_outward_from_seed():
    assert placement_order(3) == [1, 2, 3]
    assert placement_order(5) == [1, 2, 5, 3, 4]
    assert placement_order(7) == [1, 2, 7, 3, 6, 4, 5]


@pytest.mark.parametrize("h,classes", [(3, 1), (5, 8)])
def test_first_block_orders_are_one_per_symmetry_class(h, classes):
    problem = BlocSearchProblem(cycle(h), h, 5)

    def images(order):
        return {tuple(sym[i - 1] for i in seq) for sym in problem.symmetries for seq in (order, order[::-1])}

    assert len(problem.first_orders) == classes
    assert {min(images(order)) for order in problem.perms} == set(problem.first_orders)
    assert tuple(range(1, h + 1)) in problem.first_orders


def test_extensible_search_on_smallest_product():
    outcome = search_extensible(cycle(3), 3, 5)
    assert outcome.found
    assert 1 in outcome.verdict.seeds
    assert is_extensible(outcome.witness, 3, 3, 2).extensible


def test_extensible_search_resumes_to_the_same_witness(checkpoint_dir):
    straight = search_extensible(cycle(3), 3, 5)
    config = SearchConfig(k=5, layout_mode="en_bloc", h=3, s=3, node_budget=10)
    stopped = search_extensible(cycle(3), 3, 5, config)
    assert stopped.status == "budget-exhausted"
    resumed = search_extensible(cycle(3), 3, 5, resume=stopped.checkpoint_path)
    assert resumed.found
    assert resumed.witness.layout == straight.witness.layout
    assert resumed.witness.coloring == straight.witness.coloring
    assert resumed.stats == straight.stats


@pytest.mark.slow
def test_extensible_search_on_five_cycle_product():
    config = SearchConfig(k=5, layout_mode="en_bloc", h=5, s=5, node_budget=2_000_000)
    outcome = search_extensible(cycle(5), 5, 5, config)
    assert outcome.found
    assert verify(outcome.witness).valid
    assert 1 in is_extensible(outcome.witness, 5, 5, 2).seeds


def test_campaign_stops_on_budget(checkpoint_dir):
    # fewer nodes than the tree is deep, so no witness can be reached
    config = SearchConfig(k=5, layout_mode="en_bloc", h=5, s=5, node_budget=40)
    outcome = search_extensible(cycle(5), 5, 5, config)
    assert outcome.status == "budget-exhausted"
    assert outcome.stats.nodes == 40
    assert outcome.witness is None
    assert list(checkpoint_dir.glob("bloc-*.json"))


@pytest.mark.parametrize("h_graph,s,k,codes", [
    (cycle(4), 3, 5, {"FACTOR_BIPARTITE"}),
    (cycle(3), 3, 4, {"PAGE_COUNT_NOT_T_PLUS_3"}),
    (path(3), 3, 5, {"FACTOR_NOT_REGULAR", "FACTOR_BIPARTITE"}),
    (cycle(4), 2, 4, {"FACTOR_BIPARTITE", "PAGE_COUNT_NOT_T_PLUS_3", "CYCLE_TOO_SHORT"}),
])
def test_extensible_search_preconditions(h_graph, s, k, codes):
    with pytest.raises(PreconditionError) as exc:
        search_extensible(h_graph, s, k)
    assert {d.code for d in exc.value.details} == codes
