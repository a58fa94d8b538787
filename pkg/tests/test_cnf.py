import pytest
from hypothesis import given, settings

from app.core.cnf import decode_model, export_cnf, variable
from app.core.embedding import BookEmbedding, verify
from app.core.errors import MalformedInputError
from app.core.graph import complete_graph, cycle
from app.core.layout import CyclicLayout
from app.core.search import color_search

from .strategies import instances

pysat_formula = pytest.importorskip("pysat.formula")
pysat_solvers = pytest.importorskip("pysat.solvers")


def solve(document):
    """Parse the DIMACS text back and run a CDCL solver on it."""
    formula = pysat_formula.CNF(from_string=document.to_dimacs())
    with pysat_solvers.Solver(name="g3", bootstrap_with=formula.clauses) as solver:
        return solver.get_model() if solver.solve() else None


def test_triangle_encoding_shape():
    document = export_cnf(cycle(3), CyclicLayout.identity(3), 3)
    text = document.to_dimacs()
    assert document.num_vars == 9
    assert "p cnf 9 24" in text.splitlines()
    assert "c e0 = 1-2" in text
    assert variable(2, 3, 3) == 9


def test_triangle_needs_three_pages():
    graph, layout = cycle(3), CyclicLayout.identity(3)
    assert solve(export_cnf(graph, layout, 2)) is None
    model = solve(export_cnf(graph, layout, 3))
    assert model is not None
    assert verify(BookEmbedding(graph, layout, decode_model(model, graph, layout, 3))).valid


def test_crossing_layout_of_complete_graph_is_unsat():
    assert solve(export_cnf(complete_graph(4), CyclicLayout.identity(4), 3)) is None


def test_published_layout_is_satisfiable(c3c3):
    model = solve(export_cnf(c3c3.graph, c3c3.layout, 5))
    coloring = decode_model(model, c3c3.graph, c3c3.layout, 5)
    assert verify(c3c3.with_coloring(coloring)).valid


@pytest.mark.slow
def test_published_layout_with_four_pages_is_unsat(c3c3):
    assert solve(export_cnf(c3c3.graph, c3c3.layout, 4)) is None


@settings(max_examples=60, deadline=None)
@given(instances(max_n=6, max_m=6, max_k=3))
def test_cnf_agrees_with_backtracking(case):
    graph, layout, k = case
    model = solve(export_cnf(graph, layout, k))
    assert (model is not None) == color_search(graph, layout, k).found


def test_decode_solver_output_lines():
    graph, layout = cycle(4), CyclicLayout.identity(4)
    witness = color_search(graph, layout, 2).witness
    literals = [
        variable(e, p, 2) if witness.coloring.page_of[edge] == p else -variable(e, p, 2)
        for e, edge in enumerate(graph.edges)
        for p in (1, 2)
    ]
    text = "s SATISFIABLE\nv " + " ".join(map(str, literals[:4])) + "\nv " + \
        " ".join(map(str, literals[4:])) + " 0\n"
    assert decode_model(text, graph, layout, 2) == witness.coloring


def test_decode_rejects_incomplete_model():
    graph, layout = cycle(4), CyclicLayout.identity(4)
    with pytest.raises(MalformedInputError) as exc:
        decode_model([1, 2], graph, layout, 2)
    codes = [d.code for d in exc.value.details]
    assert codes == ["MODEL_NOT_EXACTLY_ONE"] * 4
