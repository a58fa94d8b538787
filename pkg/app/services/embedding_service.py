"""Embedding service - parsing, verification summaries, seeds, extension, certificates.

Shared by the CLI and the HTTP routers. Inputs are either fixture names
or embedding documents; every failure surfaces as a BookError.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from pydantic import BaseModel, ValidationError

from app.core.blocks import NotEnBloc, detect_blocks, is_extensible, product_factor, seed_report
from app.core.embedding import BookEmbedding, verify
from app.core.errors import ErrorDetail, MalformedInputError, PreconditionError
from app.core.extension import certify_family, extend
from app.core.graph import Graph, classify_page_count, max_degree, mbt_lower_bound
from app.schemas.documents import (
    EmbeddingDocument,
    ExtensionResponse,
    SidecarDocument,
    VerificationSummary,
    ViolationDocument,
)
from app.services.fixture_service import fixture_names, get_fixture

logger = logging.getLogger(__name__)


@dataclass
class LoadedEmbedding:
    embedding: BookEmbedding
    color_names: dict[int, str]
    h: int | None = None
    s: int | None = None
    source: str = ""


def read_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise MalformedInputError(
            f"Cannot read {path}.",
            details=[ErrorDetail(code="UNREADABLE_FILE", message=str(exc), field="path")],
        ) from exc
    except json.JSONDecodeError as exc:
        raise MalformedInputError(
            f"{path} is not valid JSON.",
            details=[ErrorDetail(code="INVALID_JSON", message=exc.msg,
                                 field=f"line {exc.lineno}, column {exc.colno}")],
        ) from exc


def parse_document(model: type[BaseModel], data: dict, source: str = "input"):
    """Validate a document; every pydantic error becomes one ErrorDetail."""
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise MalformedInputError(
            f"{source} is not a valid {model.__name__} ({exc.error_count()} error(s)).",
            details=[
                ErrorDetail(code="SCHEMA_VIOLATION", message=err["msg"],
                            field=".".join(str(part) for part in err["loc"]))
                for err in exc.errors()
            ],
        ) from exc


def infer_product(graph: Graph) -> tuple[int, int] | None:
    """Smallest h with graph = H x C_s (s = n/h >= 3) under the product numbering."""
    for h in range(3, graph.n // 3 + 1):
        if graph.n % h == 0 and product_factor(graph, h, graph.n // h) is not None:
            return h, graph.n // h
    return None


def load_embedding(source: str, h: int | None = None, s: int | None = None) -> LoadedEmbedding:
    """Fixture name or path to an embedding JSON file."""
    if source in fixture_names():
        fixture = get_fixture(source)
        if fixture.embedding is None:
            raise MalformedInputError(
                f"Fixture '{source}' is a block gadget, not an embedding.",
                details=[ErrorDetail(code="NOT_AN_EMBEDDING", message=source, field="source",
                                     hint="Use `fixtures dump` to inspect gadgets.")],
            )
        return LoadedEmbedding(fixture.embedding, fixture.color_names, fixture.h, fixture.s, source)
    document = parse_document(EmbeddingDocument, read_json(source), source)
    embedding = document.to_embedding()
    if h is None or s is None:
        inferred = infer_product(embedding.graph)
        if inferred:
            h, s = inferred
    return LoadedEmbedding(embedding, document.page_names(), h, s, source)


def verification_summary(embedding: BookEmbedding) -> VerificationSummary:
    report = verify(embedding)
    delta = max_degree(embedding.graph)
    summary = VerificationSummary(
        valid=report.valid,
        k=embedding.k,
        delta=delta,
        lower_bound=mbt_lower_bound(embedding.graph),
        classification=classify_page_count(embedding.k, delta),
        violations=[ViolationDocument(**v) for v in report.to_dict()["violations"]],
    )
    logger.info(f"Verified embedding: n={embedding.graph.n} k={embedding.k} valid={report.valid} "
                f"violations={len(report.violations)}")
    return summary


def _require_product(loaded: LoadedEmbedding) -> tuple[int, int]:
    if loaded.h is None or loaded.s is None:
        raise MalformedInputError(
            "Cannot tell the product structure of this graph.",
            details=[ErrorDetail(code="PRODUCT_UNKNOWN", message=loaded.source, field="h,s",
                                 hint="Pass h and s explicitly.")],
        )
    return loaded.h, loaded.s


def seed_analysis(loaded: LoadedEmbedding, t: int | None = None) -> dict:
    """Block structure and per-block seed reports; raises PreconditionError when undefined."""
    h, s = _require_product(loaded)
    embedding = loaded.embedding
    t = t if t is not None else embedding.k - 3
    blocks = detect_blocks(embedding, h, s)
    if isinstance(blocks, NotEnBloc):
        raise PreconditionError(
            f"Layout is not en bloc: {blocks.message}.",
            details=[ErrorDetail(code="NOT_EN_BLOC", message=blocks.message, field="layout")],
        )
    reports = seed_report(embedding, blocks, t)
    verdict = is_extensible(embedding, h, s, t)
    return {
        "h": h,
        "s": s,
        "t": t,
        "blocks": [list(b) for b in blocks.blocks],
        "reports": [r.to_dict() for r in reports],
        "seeds": verdict.seeds,
        "extensible": verdict.extensible,
        "reason": verdict.reason,
    }


def extend_embedding(loaded: LoadedEmbedding, r: int, seed: int | None = None) -> ExtensionResponse:
    h, s = _require_product(loaded)
    embedding = loaded.embedding
    if seed is None:
        verdict = is_extensible(embedding, h, s, embedding.k - 3)
        seed = min(verdict.seeds) if verdict.seeds else 1
    result = extend(embedding, seed, r, h=h, s=s)
    return ExtensionResponse(
        embedding=EmbeddingDocument.from_embedding(result.embedding, loaded.color_names),
        sidecar=SidecarDocument(**result.sidecar()),
        h=result.h,
        s=result.s,
    )


def certificate(m: int, n: int) -> EmbeddingDocument:
    embedding = certify_family(m, n)
    return EmbeddingDocument.from_embedding(embedding)

