"""Matching Book Workbench - HTTP front end.

Verifies matching book embeddings, replicates seed blocks to certify
C3 x Cn and C5 x Cn, and exposes the desk-scale searches. The CLI
(`python -m app.cli`) is the second front end over the same services.
"""

import logging

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app.config import get_settings
from app.core.errors import BookError
from app.api.v1.fixtures import router as fixtures_router
from app.api.v1.embeddings import router as embeddings_router
from app.api.v1.search import router as search_router

logger = logging.getLogger(__name__)
settings = get_settings()

APP_DESCRIPTION = """\
## Matching book embeddings of cycle products

1. **`GET /api/v1/fixtures`** - published embeddings and derived certificates
2. **`POST /api/v1/embeddings/verify`** - every clash of an embedding, with k, Delta and the lower bound
3. **`POST /api/v1/embeddings/seeds`** - en bloc structure and seed conditions
4. **`POST /api/v1/embeddings/extend?r=2`** - seed replication H x C_s -> H x C_{s+r}
5. **`GET /api/v1/certificates/{m}/{n}`** - certificate for C_m x C_n (m in {3, 5}, n odd)

### Error format

```json
{
  "error": "malformed|invalid_order|precondition|not_extensible|extension_failed|too_large",
  "message": "Human readable summary",
  "details": [{"code": "ERROR_CODE", "message": "...", "field": "...", "hint": "..."}]
}
```
"""

app = FastAPI(
    title=settings.app_name,
    version=settings.app_version,
    description=APP_DESCRIPTION,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# ── Global Exception Handlers ────────────────────────────

@app.exception_handler(BookError)
async def book_error_handler(request: Request, exc: BookError):
    """All BookError subclasses -> structured JSON response."""
    if exc.status_code >= 500:
        logger.error(f"{exc.error_type}: {exc.message}")
    return JSONResponse(
        status_code=exc.status_code,
        content=exc.to_response().to_dict(),
    )


app.include_router(fixtures_router, prefix="/api/v1")
app.include_router(embeddings_router, prefix="/api/v1")
app.include_router(search_router, prefix="/api/v1")


@app.get("/", tags=["Health"],
         summary="Workbench Info",
         description="Basic info and endpoint map.")
async def root():
    return {
        "name": settings.app_name,
        "version": settings.app_version,
        "docs": "/docs",
        "endpoints": {
            "fixtures": "/api/v1/fixtures",
            "verify": "/api/v1/embeddings/verify",
            "seeds": "/api/v1/embeddings/seeds",
            "extend": "/api/v1/embeddings/extend",
            "certificates": "/api/v1/certificates/{m}/{n}",
            "mbt": "/api/v1/search/mbt",
            "cnf": "/api/v1/search/cnf",
        },
    }


@app.get("/health", tags=["Health"],
         summary="Health Check",
         description="Simple health check for load balancers and monitoring.")
async def health():
    return {"status": "ok"}
