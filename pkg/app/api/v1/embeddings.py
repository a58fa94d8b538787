"""Embedding API - verify, seed analysis, extension and certificates."""

from fastapi import APIRouter, Query

from app.schemas.documents import EmbeddingDocument, ExtensionResponse, VerificationSummary
from app.services import embedding_service
from app.services.embedding_service import LoadedEmbedding

router = APIRouter(tags=["Embeddings"])


def _loaded(document: EmbeddingDocument, h: int | None = None, s: int | None = None) -> LoadedEmbedding:
    embedding = document.to_embedding()
    if h is None or s is None:
        inferred = embedding_service.infer_product(embedding.graph)
        if inferred:
            h, s = inferred
    return LoadedEmbedding(embedding, document.page_names(), h, s, source="request body")


@router.post(
    "/embeddings/verify",
    response_model=VerificationSummary,
    summary="Verify an embedding",
    description="Lists every adjacent-clash, crossing-clash and empty page. Invalid embeddings are "
                "a normal 200 response with valid=false; malformed documents are 422.",
)
async def verify_embedding(document: EmbeddingDocument):
    return embedding_service.verification_summary(document.to_embedding())


@router.post(
    "/embeddings/seeds",
    summary="Seed analysis",
    description="Block structure and seed conditions per block. 409 when the layout is not en bloc "
                "or the page count is not t+3.",
)
async def seeds(
    document: EmbeddingDocument,
    h: int | None = Query(None, ge=1, description="Vertices of H; inferred when omitted."),
    s: int | None = Query(None, ge=3, description="Cycle length; inferred when omitted."),
    t: int | None = Query(None, ge=1, description="Degree of H; defaults to k-3."),
):
    return embedding_service.seed_analysis(_loaded(document, h, s), t)


@router.post(
    "/embeddings/extend",
    response_model=ExtensionResponse,
    summary="Seed replication",
    description="Replicates a seed block to go from H x C_s to H x C_{s+r}; r must be even.",
)
async def extend_embedding(
    document: EmbeddingDocument,
    r: int = Query(..., description="Even number of extra blocks."),
    seed: int | None = Query(None, ge=1, description="Seed block; lowest seed when omitted."),
    h: int | None = Query(None, ge=1),
    s: int | None = Query(None, ge=3),
):
    return embedding_service.extend_embedding(_loaded(document, h, s), r, seed)


@router.get(
    "/certificates/{m}/{n}",
    response_model=EmbeddingDocument,
    summary="Certificate for C_m x C_n",
    description="Verified 5-page embedding for m in {3, 5} and odd n >= 3.",
)
def certificate(m: int, n: int):
    return embedding_service.certificate(m, n)
