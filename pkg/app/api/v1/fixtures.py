"""Fixture API - published embeddings, the block gadget and the derived C3 x C5."""

from fastapi import APIRouter

from app.schemas.documents import FixtureSummary
from app.services import fixture_service

router = APIRouter(prefix="/fixtures", tags=["Fixtures"])


@router.get(
    "",
    response_model=list[FixtureSummary],
    summary="List fixtures",
    description="Names, provenance notes and product parameters of all fixtures.",
)
async def list_fixtures():
    return [fixture_service.summarize(fixture_service.get_fixture(name))
            for name in fixture_service.fixture_names()]


@router.get(
    "/{name}",
    summary="Fixture document",
    description="Embedding JSON for embedding fixtures; gadget payload plus seed report for gadgets.",
    responses={422: {"description": "Unknown fixture name"}},
)
async def get_fixture(name: str):
    return fixture_service.fixture_document(name)
