"""Fixture registry: published embeddings, the block gadget and derived certificates."""

import logging
from functools import lru_cache

from app.core.errors import ErrorDetail, MalformedInputError
from app.core.extension import extend
from app.core.blocks import is_extensible
from app.core.fixtures import (
    C3C3_COLOR_NAMES,
    Fixture,
    c3c3_embedding,
    c3c3_fixture,
    c5c5_fixture,
    gadget_fixture,
)
from app.schemas.documents import EmbeddingDocument, FixtureSummary

logger = logging.getLogger(__name__)


def c3c5_fixture() -> Fixture:
    """C3 x C5, generated by replicating the lowest seed of the C3 x C3 embedding."""
    base = c3c3_embedding()
    seed = min(is_extensible(base, 3, 3, 2).seeds)
    result = extend(base, seed, 2, h=3, s=3)
    return Fixture(
        name="figure4-c3c5-derived",
        provenance=f"Figure 4: extend(lemma1-c3c3, seed {seed}, r=2), phase {result.plan.phase}.",
        h=3, s=5,
        color_names=C3C3_COLOR_NAMES,
        embedding=result.embedding,
    )


_BUILDERS = {
    "lemma1-c3c3": c3c3_fixture,
    "lemma2-c5c5": c5c5_fixture,
    "figure3-gadget": gadget_fixture,
    "figure4-c3c5-derived": c3c5_fixture,
}


def fixture_names() -> list[str]:
    return list(_BUILDERS)


@lru_cache
def get_fixture(name: str) -> Fixture:
    builder = _BUILDERS.get(name)
    if builder is None:
        raise MalformedInputError(
            f"Unknown fixture '{name}'.",
            details=[ErrorDetail(code="UNKNOWN_FIXTURE", message=f"'{name}' is not a fixture.",
                                 field="name", hint=f"Known fixtures: {', '.join(_BUILDERS)}.")],
        )
    return builder()


def summarize(fixture: Fixture) -> FixtureSummary:
    return FixtureSummary(
        name=fixture.name,
        provenance=fixture.provenance,
        kind="embedding" if fixture.embedding is not None else "gadget",
        h=fixture.h,
        s=fixture.s,
    )


def fixture_document(name: str) -> dict:
    """Embedding JSON for embedding fixtures; gadget payload plus its seed report otherwise."""
    fixture = get_fixture(name)
    if fixture.embedding is not None:
        return EmbeddingDocument.from_embedding(fixture.embedding, fixture.color_names).model_dump(mode="json")
    return {
        "gadget": fixture.gadget.to_dict(),
        "color_names": {str(p): c for p, c in fixture.color_names.items()},
        "report": fixture.gadget.report().to_dict(),
    }
