"""Wire-protocol HTTP service exposing a TranslationBackend.

POST /translate  {"chunks": [...]}  ->  {"translations": [...]}
GET  /health                        ->  {"status": "ok"}

Unknown request fields are ignored; malformed bodies get 400 with an
"error" field so in-process and reference servers look identical to the
client.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .errors import BackendError
from .pipeline import TranslationBackend


class TranslateRequest(BaseModel):
    chunks: list[str]


class TranslateResponse(BaseModel):
    translations: list[str]


class HealthResponse(BaseModel):
    status: str


def create_app(backend: TranslationBackend) -> FastAPI:
    app = FastAPI(title="bahnaric-mt backend", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def malformed_request(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors()[:1])})

    @app.exception_handler(BackendError)
    async def backend_failure(_request: Request, exc: BackendError):
        return JSONResponse(status_code=500, content={"error": str(exc)})

    @app.post("/translate", response_model=TranslateResponse)
    def translate(request: TranslateRequest) -> TranslateResponse:
        return TranslateResponse(translations=backend.translate_chunks(request.chunks))

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok")

    return app


def run_server(backend: TranslationBackend, host: str = "127.0.0.1", port: int = 8000) -> None:
    import uvicorn

    uvicorn.run(create_app(backend), host=host, port=port, log_level="warning")
