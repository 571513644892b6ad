"""HTTP surface over a Study: session lifecycle, item delivery, click and
answer recording, imports, and the six report tables.

Every error reaches the client as ``{"code", "message", "detail"}`` with a
status derived from the error code. The event log is single-writer, so one
process-wide lock serializes all state changes; endpoints run sync in the
server's thread pool.
"""

from __future__ import annotations

import threading
import uuid
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .clock import SimulatedClock
from .engine import (
    ITEMS_PER_TEST,
    PRACTICE_PER_PLACE,
    Cohort,
    Phase,
    SessionState,
    TEST_PHASES,
)
from .errors import NotFoundError, PlaceTutorError, ValidationError
from .places import Place, PlaceCount, place_from_slug
from .report import export_table
from .store import Study, parse_traditional_csv

_STATUS_BY_CODE = {
    "not_found": 404,
    "protocol_error": 409,
    "conflict": 409,
    "retention_not_due": 409,
    "missing_data": 409,
    "incomplete": 409,
    "corrupt_log": 500,
    "internal": 500,
}
_DEFAULT_ERROR_STATUS = 422  # validation-shaped failures


class SessionBody(BaseModel):
    student_id: str
    cohort: str = "app"


class ClickBody(BaseModel):
    place: str
    block_place: Optional[str] = None


class AnswerBody(BaseModel):
    counts: list[list]  # [[place_slug, clicks], ...]
    submission_id: Optional[str] = None
    block_place: Optional[str] = None


class SatisfactionBody(BaseModel):
    ratings: list[int]


class ExpertBody(BaseModel):
    ratings: list[int]


class ClockBody(BaseModel):
    advance_days: float = 0
    advance_seconds: float = 0
    set: Optional[str] = None  # ISO-8601


def _parse_place(slug: str | None) -> Place | None:
    return place_from_slug(slug) if slug else None


def _parse_counts(wire: list[list]) -> tuple[PlaceCount, ...]:
    try:
        return tuple(
            PlaceCount(place_from_slug(slug), int(clicks)) for slug, clicks in wire
        )
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"counts must be [[place, clicks], ...]: {exc}") from None


def _item_view(session: SessionState, block_place: Place | None) -> dict | None:
    item = session.active_item(block_place)
    if item is None:
        return None
    question = item.question
    return {
        "id": question.id,
        "source": item.source,
        "block_place": item.block_place.slug if item.block_place else None,
        "index": item.index,
        "number": question.number,
        "places": [p.slug for p in question.decomposition.places],
    }


def _progress_view(session: SessionState) -> dict | None:
    if session.phase is Phase.PRACTICE:
        return {
            "done": {p.slug: n for p, n in session.practice_done.items()},
            "per_block": PRACTICE_PER_PLACE,
        }
    kind = TEST_PHASES.get(session.phase)
    if kind is None:
        return None
    return {"answered": len(session.answers[kind]), "total": ITEMS_PER_TEST}


def create_app(study: Study, admin_clock: bool = False) -> FastAPI:
    """Wire the routes around one Study. ``admin_clock`` exposes
    POST /admin/clock and only makes sense with a SimulatedClock."""
    app = FastAPI(title="placetutor", docs_url=None, redoc_url=None)
    lock = threading.Lock()

    @app.exception_handler(PlaceTutorError)
    async def _domain_error(_request: Request, exc: PlaceTutorError):
        return JSONResponse(
            status_code=_STATUS_BY_CODE.get(exc.code, _DEFAULT_ERROR_STATUS),
            content={"code": exc.code, "message": str(exc), "detail": exc.detail},
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "sessions": len(study.sessions)}

    @app.post("/students", status_code=201)
    def create_student():
        return {"student_id": f"s-{uuid.uuid4().hex[:12]}"}

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionBody):
        try:
            cohort = Cohort(body.cohort)
        except ValueError:
            raise ValidationError(
                f"cohort must be 'app' or 'traditional', got {body.cohort!r}"
            ) from None
        with lock:
            session = study.create_session(body.student_id, cohort)
        return {"session_id": session.student_id, "session": session.snapshot()}

    def _session(session_id: str) -> SessionState:
        if session_id not in study.sessions:
            raise NotFoundError(f"unknown session {session_id!r}")
        return study.sessions[session_id]

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        with lock:
            session = _session(session_id)
            return {
                "session_id": session_id,
                "phase": session.phase.value,
                "item": _item_view(session, None),
                "session": session.snapshot(),
            }

    @app.get("/sessions/{session_id}/next")
    def get_next(session_id: str, block_place: Optional[str] = None):
        with lock:
            session = _session(session_id)
            return {
                "session_id": session_id,
                "phase": session.phase.value,
                "item": _item_view(session, _parse_place(block_place)),
                "progress": _progress_view(session),
            }

    @app.post("/sessions/{session_id}/clicks")
    def post_click(session_id: str, body: ClickBody):
        with lock:
            state = study.record_click(
                session_id, place_from_slug(body.place), _parse_place(body.block_place)
            )
        return {
            "place": state.place.slug,
            "running_count": state.running_count,
            "display": state.display,
        }

    @app.post("/sessions/{session_id}/answer")
    def post_answer(session_id: str, body: AnswerBody):
        with lock:
            verdict = study.submit_answer(
                session_id,
                _parse_counts(body.counts),
                submission_id=body.submission_id,
                block_place=_parse_place(body.block_place),
            )
        return {
            "outcome": verdict.outcome.value,
            "correct": verdict.is_correct,
            "narration_events": list(verdict.narration_events),
        }

    @app.post("/sessions/{session_id}/satisfaction")
    def post_satisfaction(session_id: str, body: SatisfactionBody):
        with lock:
            study.submit_satisfaction(session_id, tuple(body.ratings))
        return {"recorded": True}

    @app.post("/sessions/{session_id}/advance")
    def post_advance(session_id: str):
        with lock:
            phase = study.advance_phase(session_id)
        return {"session_id": session_id, "phase": phase.value}

    @app.post("/import/traditional")
    async def import_traditional(request: Request):
        text = (await request.body()).decode("utf-8")
        rows = parse_traditional_csv(text)
        with lock:
            imported = study.import_traditional(rows)
        return {"imported": imported}

    @app.post("/ratings/expert", status_code=201)
    def post_expert(body: ExpertBody):
        with lock:
            count = study.record_expert_rating(tuple(body.ratings))
        return {"experts": count}

    @app.get("/reports/table/{table_id}")
    def get_table(
        table_id: int,
        format: str = "text",
        tails: str = "one",
        total_sd: str = "respondent",
    ):
        if format not in ("text", "csv"):
            raise ValidationError(f"format must be 'text' or 'csv', got {format!r}")
        if tails not in ("one", "two"):
            raise ValidationError(f"tails must be 'one' or 'two', got {tails!r}")
        if total_sd not in ("respondent", "item_mean"):
            raise ValidationError(
                f"total_sd must be 'respondent' or 'item_mean', got {total_sd!r}"
            )
        with lock:
            text = export_table(study, table_id, format, tails=tails, total_sd=total_sd)
        media = "text/plain" if format == "text" else "text/csv"
        return PlainTextResponse(text, media_type=media)

    if admin_clock:

        @app.post("/admin/clock")
        def admin_clock_endpoint(body: ClockBody):
            clock = study.clock
            if not isinstance(clock, SimulatedClock):
                raise ValidationError("clock control requires --clock simulated")
            with lock:
                if body.set:
                    from datetime import datetime

                    clock.set(datetime.fromisoformat(body.set))
                if body.advance_days or body.advance_seconds:
                    clock.advance(days=body.advance_days, seconds=body.advance_seconds)
                return {"now": clock.now().isoformat()}

    return app
