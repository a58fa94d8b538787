"""Search API - exact matching book thickness and CNF export.

Long searches are CLI-only; these endpoints stay within desk-scale limits.
"""

from fastapi import APIRouter, Query
from fastapi.responses import PlainTextResponse

from app.schemas.documents import GraphDocument, LayoutedGraphDocument, MbtResponse
from app.services import search_service

router = APIRouter(prefix="/search", tags=["Search"])


@router.post(
    "/mbt",
    response_model=MbtResponse,
    summary="Exact matching book thickness",
    description="Brute force over all layouts; 413 above the configured vertex ceiling.",
)
def mbt(document: GraphDocument):
    return search_service.mbt(document.to_graph())


@router.post(
    "/cnf",
    response_class=PlainTextResponse,
    summary="DIMACS export",
    description="CNF whose models are the k-page colorings of the given layout.",
)
def cnf(document: LayoutedGraphDocument, k: int = Query(..., ge=1, description="Page count.")):
    return search_service.cnf_text(document, k)
