"""HTTP service speaking the chunk-translation wire protocol.

POST /translate {"chunks": [...]} -> {"translations": [...]}, same length
and order; GET /health -> {"status": "ok"}. Malformed bodies get 400 with
an "error" field, model failures 500. Oversized request batches are split
before reaching the adapter.
"""

from __future__ import annotations

import logging

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .adapters import ModelAdapter

log = logging.getLogger("chunkserve")


class TranslateRequest(BaseModel):
    chunks: list[str]


class TranslateResponse(BaseModel):
    translations: list[str]


def create_app(adapter: ModelAdapter, max_batch: int = 64) -> FastAPI:
    app = FastAPI(title=f"chunkserve ({adapter.name})", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def malformed(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors()[:1])})

    @app.exception_handler(Exception)
    async def model_failure(_request: Request, exc: Exception):
        log.exception("model failure")
        return JSONResponse(status_code=500, content={"error": str(exc)})

    @app.post("/translate", response_model=TranslateResponse)
    def translate(request: TranslateRequest) -> TranslateResponse:
        translations: list[str] = []
        for start in range(0, len(request.chunks), max_batch):
            translations.extend(
                adapter.translate_batch(request.chunks[start : start + max_batch])
            )
        if len(translations) != len(request.chunks):
            raise RuntimeError(
                f"adapter returned {len(translations)} translations "
                f"for {len(request.chunks)} chunks"
            )
        return TranslateResponse(translations=translations)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    return app
