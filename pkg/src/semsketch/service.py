"""Read-only HTTP/JSON API over a loaded sketch store.

Versioned under /v1; every response is UTF-8 JSON with the key order fixed
by the wire schemas, so responses are byte-stable and golden-file testable.
The loaded store is immutable and shared across requests without locks.
"""

from __future__ import annotations

import json
from dataclasses import replace
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .contrastive import (
    SketchPair,
    affinity,
    diff,
    field_report_to_json,
    field_structure_report,
    pair_diff_to_json,
    pair_to_json,
)
from .errors import DomainError, SemSketchError
from .model import Lexeme, Measure
from .sketch import project_sketch, rank_fillers, score_filler, sketch_to_json
from .store import SketchStore

_STATUS_BY_CODE = {
    "E_NOT_FOUND": 404,
    "E_EMPTY_CLASS": 404,
    "E_EMPTY": 404,
    "E_DOMAIN": 400,
    "E_FORMAT": 400,
    "E_BELOW_THRESHOLD": 400,
}


class CanonicalJSONResponse(JSONResponse):
    """UTF-8 JSON with insertion key order preserved (no ASCII escaping)."""

    def render(self, content: Any) -> bytes:
        return json.dumps(content, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def _error(status: int, code: str) -> CanonicalJSONResponse:
    return CanonicalJSONResponse({"error": code}, status_code=status)


def _parse_measure(text: str | None) -> Measure | None:
    if text is None:
        return None
    try:
        return Measure.parse(text)
    except SemSketchError:
        raise DomainError(f"unknown measure {text!r}") from None


def create_app(store: SketchStore) -> FastAPI:
    app = FastAPI(title="semsketch", openapi_url=None, default_response_class=CanonicalJSONResponse)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.exception_handler(StarletteHTTPException)
    async def http_error(_req: Request, exc: StarletteHTTPException):
        if exc.status_code == 404:
            return _error(404, "E_NOT_FOUND")
        return _error(exc.status_code, "E_USAGE")

    @app.exception_handler(RequestValidationError)
    async def validation_error(_req: Request, _exc: RequestValidationError):
        return _error(400, "E_USAGE")

    @app.exception_handler(SemSketchError)
    async def domain_error(_req: Request, exc: SemSketchError):
        return _error(_STATUS_BY_CODE.get(exc.code, 400), exc.code)

    @app.get("/v1/manifest")
    def manifest():
        return store.manifest

    @app.get("/v1/languages")
    def languages():
        return {"languages": store.languages}

    @app.get("/v1/lexemes")
    def lexemes(lang: str | None = None, prefix: str = "", limit: int = 50):
        if limit < 1:
            raise DomainError(f"limit must be positive, got {limit}")
        found = store.lexemes(language=lang, prefix=prefix)
        return {
            "lexemes": [
                {"lang": l.language, "lemma": l.lemma, "semclass": l.semclass}
                for l in found[:limit]
            ],
            "total": len(found),
        }

    def _get_sketch(lang: str, lemma: str, semclass: str):
        sketch = store.get(lang, lemma, semclass)
        if sketch is None:
            raise StarletteHTTPException(status_code=404)
        return sketch

    @app.get("/v1/sketch/{lang}/{lemma}/{semclass}")
    def sketch_view(lang: str, lemma: str, semclass: str, top: int | None = None, measure: str | None = None):
        sketch = _get_sketch(lang, lemma, semclass)
        view = project_sketch(sketch, top=top, measure=_parse_measure(measure))
        return sketch_to_json(view)

    @app.get("/v1/sketch/{lang}/{lemma}/{semclass}/slot/{role}")
    def slot_page(
        lang: str,
        lemma: str,
        semclass: str,
        role: str,
        offset: int = 0,
        limit: int | None = None,
        measure: str | None = None,
    ):
        sketch = _get_sketch(lang, lemma, semclass)
        slot = sketch.slot(role)
        if slot is None:
            raise StarletteHTTPException(status_code=404)
        if offset < 0:
            raise DomainError(f"offset must be nonnegative, got {offset}")
        page_limit = limit if limit is not None else sketch.config_used.top_fillers
        if page_limit < 1:
            raise DomainError(f"limit must be positive, got {page_limit}")

        target = _parse_measure(measure) or sketch.config_used.measure
        fillers = list(slot.fillers)
        if target is not sketch.config_used.measure:
            fillers = [
                replace(e, score=score_filler(e.count, slot.link_count, e.filler_marginal, target))
                for e in fillers
            ]
            fillers = rank_fillers(fillers)
        page = fillers[offset : offset + page_limit]
        view = replace(slot, fillers=tuple(page))
        slot_json = sketch_to_json(
            replace(sketch, slots=(view,)),
        )["slots"][0]
        slot_json["offset"] = offset
        slot_json["limit"] = page_limit
        slot_json["total"] = len(fillers)
        return slot_json

    @app.get("/v1/pairs")
    def pairs(semclass: str | None = None):
        rows = [
            pair_to_json(p)
            for p, _ in store.pairs
            if semclass is None or p.semclass == semclass
        ]
        return {"pairs": rows}

    @app.get("/v1/pair/{llang}/{llemma}/{lclass}/{rlang}/{rlemma}/{rclass}/diff")
    def pair_diff(llang: str, llemma: str, lclass: str, rlang: str, rlemma: str, rclass: str):
        left_lex = Lexeme(llang, llemma, lclass)
        right_lex = Lexeme(rlang, rlemma, rclass)
        stored = store.find_pair(left_lex, right_lex)
        if stored is not None:
            return pair_diff_to_json(stored[0], stored[1])
        # No precomputed pair: derive one when both sketches are present.
        left = store.get(*left_lex.key())
        right = store.get(*right_lex.key())
        if left is None or right is None:
            raise StarletteHTTPException(status_code=404)
        if left.lexeme.semclass != right.lexeme.semclass:
            raise DomainError(
                f"{left.lexeme} and {right.lexeme} are not in the same semantic class"
            )
        pair = SketchPair(left, right, left.lexeme.semclass, affinity(left, right))
        return pair_diff_to_json(pair, diff(pair))

    @app.get("/v1/classes/{name}/report")
    def class_report(name: str, role: str = "Object", left: str | None = None, right: str | None = None):
        langs = store.languages
        if left is None or right is None:
            if len(langs) != 2:
                raise DomainError(
                    "store holds "
                    f"{len(langs)} languages; pass explicit ?left=&right= language codes"
                )
            left, right = langs[0], langs[1]
        report = field_structure_report(
            name,
            store.sketches_for(left),
            store.sketches_for(right),
            role=role,
        )
        return field_report_to_json(report)

    return app


def serve(store: SketchStore, bind: str) -> None:
    """Run the API with uvicorn until interrupted."""
    import uvicorn

    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise DomainError(f"bind address must be HOST:PORT, got {bind!r}")
    uvicorn.run(create_app(store), host=host, port=int(port_text), log_level="info")
