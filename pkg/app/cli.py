"""Command line front end: python -m app.cli <command> ...

Exit codes: 0 ok/found, 1 invalid or precondition failure, 2 malformed
input, 3 search exhausted, 4 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from app.config import get_settings
from app.core.drawing import to_dot, to_svg
from app.core.cnf import export_cnf
from app.core.errors import BookError, MalformedInputError
from app.core.graph import max_degree
from app.core.search import mbt_exact
from app.schemas.documents import EmbeddingDocument
from app.services import embedding_service, fixture_service, search_service

logger = logging.getLogger("app.cli")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_EXHAUSTED = 3
EXIT_BUDGET = 4

SEARCH_EXIT = {"found": EXIT_OK, "exhausted": EXIT_EXHAUSTED, "budget-exhausted": EXIT_BUDGET}


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)
    logger.info(f"Wrote {path}")


def _dump(document) -> str:
    return json.dumps(document, indent=2, sort_keys=False) + "\n"


def _print_summary(summary) -> None:
    print(f"valid: {summary.valid}")
    print(f"pages (k): {summary.k}")
    print(f"max degree: {summary.delta}")
    print(f"lower bound: {summary.lower_bound}")
    print(f"classification: {summary.classification}")
    for violation in summary.violations:
        print(f"  {violation.message}")


# ── Commands ──────────────────────────────────────────────


def cmd_verify(args) -> int:
    loaded = embedding_service.load_embedding(args.source, args.h, args.s)
    summary = embedding_service.verification_summary(loaded.embedding)
    _print_summary(summary)
    return EXIT_OK if summary.valid else EXIT_INVALID


def cmd_extend(args) -> int:
    loaded = embedding_service.load_embedding(args.source, args.h, args.s)
    response = embedding_service.extend_embedding(loaded, args.r, args.seed)
    extended = response.embedding.to_embedding()
    summary = embedding_service.verification_summary(extended)
    print(f"seed: {response.sidecar.seed}")
    print(f"phase: {response.sidecar.phase}")
    print(f"result: H x C_{response.s} with {extended.graph.n} vertices and {extended.graph.m} edges")
    _print_summary(summary)
    if args.out:
        _write(args.out, _dump(response.embedding.model_dump(mode="json")))
        sidecar = Path(args.out).with_suffix(".sidecar.json")
        _write(str(sidecar), _dump(response.sidecar.model_dump(mode="json")))
    return EXIT_OK if summary.valid else EXIT_INVALID


def cmd_certify_family(args) -> int:
    document = embedding_service.certificate(args.m, args.n)
    summary = embedding_service.verification_summary(document.to_embedding())
    print(f"certificate: C_{args.m} x C_{args.n}")
    _print_summary(summary)
    if args.out:
        _write(args.out, _dump(document.model_dump(mode="json")))
    return EXIT_OK if summary.valid else EXIT_INVALID


def cmd_search(args) -> int:
    if args.extensible:
        if args.h is None or args.s is None or args.k is None:
            raise MalformedInputError("search --extensible needs --h, --s and --k.")
        h_graph = search_service.resolve_graph(args.h)
        config = search_service.search_config(
            k=args.k, layout_mode="en_bloc", h=h_graph.n, s=args.s,
            node_budget=args.node_budget, time_budget=args.time_budget,
            checkpoint_interval=args.checkpoint_interval, workers=args.workers,
            checkpoint_path=args.checkpoint,
        )
        outcome = search_service.run_search(None, config, h_graph=h_graph, resume=args.resume)
    else:
        if args.graph is None or args.k is None:
            raise MalformedInputError("search needs --graph and --k (or --extensible).")
        graph = search_service.resolve_graph(args.graph)
        mode = "all" if args.all_layouts else "fixed"
        config = search_service.search_config(
            k=args.k, layout_mode=mode,
            node_budget=args.node_budget, time_budget=args.time_budget,
            checkpoint_interval=args.checkpoint_interval, workers=args.workers,
            checkpoint_path=args.checkpoint,
        )
        layout = None if args.all_layouts else search_service.resolve_layout(args.layout, graph)
        outcome = search_service.run_search(graph, config, layout=layout, resume=args.resume)

    stats = outcome.stats
    print(f"status: {outcome.status}")
    print(f"nodes: {stats.nodes}  prunes: adjacency={stats.prunes_adjacency} crossing={stats.prunes_crossing} "
          f"symmetry={stats.prunes_symmetry} seed={stats.prunes_seed} capacity={stats.prunes_capacity} "
          f"forward={stats.prunes_forward}  time: {stats.elapsed:.2f}s")
    if outcome.checkpoint_path:
        print(f"checkpoint: {outcome.checkpoint_path}")
    if outcome.verdict is not None:
        print(f"seeds: {outcome.verdict.seeds}")
    if outcome.witness is not None and args.out:
        _write(args.out, _dump(EmbeddingDocument.from_embedding(outcome.witness).model_dump(mode="json")))
    return SEARCH_EXIT[outcome.status]


def cmd_mbt(args) -> int:
    graph = search_service.resolve_graph(args.graph)
    print(mbt_exact(graph, args.max_vertices))
    return EXIT_OK


def cmd_export_cnf(args) -> int:
    graph = search_service.resolve_graph(args.graph)
    layout = search_service.resolve_layout(args.layout, graph)
    _write(args.out, export_cnf(graph, layout, args.k).to_dimacs())
    return EXIT_OK


def cmd_draw(args) -> int:
    loaded = embedding_service.load_embedding(args.source)
    fmt = args.format or ("dot" if args.out.endswith((".dot", ".gv")) else "svg")
    text = to_dot(loaded.embedding, loaded.color_names) if fmt == "dot" else to_svg(loaded.embedding, loaded.color_names)
    _write(args.out, text)
    logger.info(f"Drew {loaded.embedding.graph.n} vertices, {loaded.embedding.graph.m} chords, "
                f"{loaded.embedding.k} pages (max degree {max_degree(loaded.embedding.graph)})")
    return EXIT_OK


def cmd_fixtures(args) -> int:
    if args.action == "list":
        for name in fixture_service.fixture_names():
            fixture = fixture_service.get_fixture(name)
            print(f"{name}: {fixture.provenance}")
        return EXIT_OK
    if not args.name:
        raise MalformedInputError("fixtures dump needs a fixture name.")
    _write(args.out, _dump(fixture_service.fixture_document(args.name)))
    logger.info(f"Dumped fixture {args.name}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port)
    return EXIT_OK


# ── Parser ────────────────────────────────────────────────


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="python -m app.cli",
                                     description="Matching book embeddings of cycle products.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="verify an embedding (fixture name or JSON path)")
    p.add_argument("source")
    p.add_argument("--h", type=int)
    p.add_argument("--s", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extend", help="replicate a seed block")
    p.add_argument("source")
    p.add_argument("--r", type=int, required=True, help="even number of extra blocks")
    p.add_argument("--seed", type=int, help="seed block (lowest seed when omitted)")
    p.add_argument("--h", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--out", help="extended embedding JSON; sidecar goes next to it")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("certify-family", help="certificate for C_m x C_n")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify_family)

    p = sub.add_parser("search", help="coloring or extensible en bloc search")
    p.add_argument("--graph", help="graph: cycleN, pathN, completeN, fixture or JSON path")
    p.add_argument("--layout", help="identity, lemma1, lemma2, fixture name or v1,v2,...")
    p.add_argument("--all-layouts", action="store_true", help="try every layout up to symmetry")
    p.add_argument("--h", help="row factor H for --extensible (e.g. cycle7)")
    p.add_argument("--s", type=int, help="cycle factor length for --extensible")
    p.add_argument("--k", type=int, help="page count")
    p.add_argument("--extensible", action="store_true", help="search extensible en bloc embeddings")
    p.add_argument("--node-budget", type=int)
    p.add_argument("--time-budget", type=float)
    p.add_argument("--checkpoint-interval", type=int)
    p.add_argument("--checkpoint", help="checkpoint path (default: CHECKPOINT_DIR)")
    p.add_argument("--resume", help="checkpoint JSON to resume from")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="write the witness embedding JSON")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("mbt", help="exact matching book thickness of a tiny graph")
    p.add_argument("graph")
    p.add_argument("--max-vertices", type=int)
    p.set_defaults(func=cmd_mbt)

    p = sub.add_parser("export-cnf", help="DIMACS CNF for a fixed layout")
    p.add_argument("graph")
    p.add_argument("--layout")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_cnf)

    p = sub.add_parser("draw", help="circular drawing as SVG or DOT")
    p.add_argument("source")
    p.add_argument("out")
    p.add_argument("--format", choices=["svg", "dot"])
    p.set_defaults(func=cmd_draw)

    p = sub.add_parser("fixtures", help="list or dump fixtures")
    p.add_argument("action", choices=["list", "dump"])
    p.add_argument("name", nargs="?")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, get_settings().log_level.upper(), logging.INFO)
    logging.basicConfig(level=level, format="%(levelname)-5.5s [%(name)s] %(message)s", stream=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.func(args)
    except BookError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        for detail in exc.details:
            where = f" [{detail.field}]" if detail.field else ""
            print(f"  {detail.code}{where}: {detail.message}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
