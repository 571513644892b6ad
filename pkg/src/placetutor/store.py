"""Append-only event log plus the study aggregate built from it.

Every state change is one UTF-8 JSON line: seq, ISO-8601 timestamp, session
id (null for store-level events), kind, payload. Live operation and replay
run the identical transition code, so replaying a log reconstructs the exact
live state; all analyses are recomputable from the log alone.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterator

from .clock import RealClock
from .engine import (
    Cohort,
    CountState,
    Phase,
    Score,
    SessionState,
    TestKind,
)
from .errors import (
    ConflictError,
    CorruptLogError,
    ImportAbortedError,
    NotFoundError,
    ValidationError,
)
from .places import Place, PlaceCount, Verdict, place_from_slug
from .rng import derive_seed

EVENT_KINDS = (
    "SessionCreated",
    "PhaseAdvanced",
    "ClickRecorded",
    "AnswerSubmitted",
    "SatisfactionSubmitted",
    "ScoresImported",
    "ExpertRatingRecorded",
)

TRADITIONAL_CSV_HEADER = "student_id,pretest,during,posttest,retention"


@dataclass(slots=True)
class TraditionalScoreRow:
    student_id: str
    pretest: int
    during: int
    posttest: int
    retention: int | None  # absent until their 2-week test happens


class EventLog:
    """Single-writer newline-delimited record log."""

    def __init__(self, path: Path, fsync: bool = False):
        self.path = Path(path)
        self.fsync = fsync
        self.seq = 0
        self._fh: io.TextIOWrapper | None = None

    def open_append(self) -> None:
        self._fh = open(self.path, "a", encoding="utf-8")

    def append(self, ts: str, session_id: str | None, kind: str, payload: dict) -> int:
        if self._fh is None:
            self.open_append()
        self.seq += 1
        record = {
            "seq": self.seq,
            "ts": ts,
            "session_id": session_id,
            "kind": kind,
            "payload": payload,
        }
        self._fh.write(json.dumps(record, separators=(",", ":"), ensure_ascii=False))
        self._fh.write("\n")
        self._fh.flush()
        if self.fsync:
            os.fsync(self._fh.fileno())
        return self.seq

    def close(self) -> None:
        if self._fh is not None:
            self._fh.flush()
            os.fsync(self._fh.fileno())
            self._fh.close()
            self._fh = None

    @staticmethod
    def read(path: Path) -> Iterator[tuple[int, dict]]:
        """Yield (line_number, record); raises CorruptLogError naming the
        first bad line."""
        last_seq = 0
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorruptLogError(
                        f"line {lineno}: unparseable record ({exc.msg})"
                    ) from None
                if not isinstance(record, dict) or record.get("kind") not in EVENT_KINDS:
                    raise CorruptLogError(
                        f"line {lineno}: unknown event kind {record.get('kind')!r}"
                    )
                seq = record.get("seq")
                if not isinstance(seq, int) or seq <= last_seq:
                    raise CorruptLogError(
                        f"line {lineno}: sequence number {seq!r} not increasing"
                    )
                last_seq = seq
                yield lineno, record


def _counts_to_wire(counts: tuple[PlaceCount, ...]) -> list[list]:
    return [[c.place.slug, c.clicks] for c in counts]


def _counts_from_wire(wire: list) -> tuple[PlaceCount, ...]:
    return tuple(PlaceCount(place_from_slug(slug), int(clicks)) for slug, clicks in wire)


class Study:
    """The aggregate: all sessions, imported traditional scores, and expert
    ratings, maintained live and reconstructible by replay."""

    def __init__(self, log: EventLog | None, clock=None, base_seed: int = 0):
        self.log = log
        self.clock = clock or RealClock()
        self.base_seed = base_seed
        self.sessions: dict[str, SessionState] = {}
        self.traditional: dict[str, TraditionalScoreRow] = {}
        self.expert_ratings: list[tuple[int, ...]] = []

    # -- lifecycle -------------------------------------------------------

    @classmethod
    def open(
        cls,
        data_dir: Path,
        clock=None,
        base_seed: int = 0,
        fsync: bool = False,
    ) -> "Study":
        """Open (creating if needed) the study in ``data_dir``; an existing
        log is replayed before new events are accepted."""
        data_dir = Path(data_dir)
        data_dir.mkdir(parents=True, exist_ok=True)
        log = EventLog(data_dir / "events.log", fsync=fsync)
        study = cls(log, clock=clock, base_seed=base_seed)
        if log.path.exists():
            for _, record in EventLog.read(log.path):
                study._apply_record(record)
                log.seq = record["seq"]
        log.open_append()
        return study

    @classmethod
    def replay(cls, log_path: Path) -> "Study":
        """Read-only reconstruction from a log file."""
        study = cls(log=None)
        for _, record in EventLog.read(Path(log_path)):
            study._apply_record(record)
        return study

    def close(self) -> None:
        if self.log is not None:
            self.log.close()

    # -- event machinery ---------------------------------------------------

    def _emit(self, session_id: str | None, kind: str, payload: dict):
        ts = self.clock.now().isoformat()
        result = self._apply(kind, session_id, payload, ts)
        if self.log is not None:
            self.log.append(ts, session_id, kind, payload)
        return result

    def _apply_record(self, record: dict):
        try:
            return self._apply(
                record["kind"], record["session_id"], record["payload"], record["ts"]
            )
        except (KeyError, TypeError) as exc:
            raise CorruptLogError(
                f"record {record.get('seq')}: malformed payload ({exc})"
            ) from None

    def _apply(self, kind: str, session_id: str | None, payload: dict, ts: str):
        when = datetime.fromisoformat(ts)
        if kind == "SessionCreated":
            if session_id in self.sessions:
                raise ConflictError(f"session {session_id!r} already exists")
            session = SessionState.create(
                payload["student_id"], Cohort(payload["cohort"]), payload["seed"]
            )
            self.sessions[session_id] = session
            return session
        if kind == "ScoresImported":
            return self._apply_import(payload["rows"])
        if kind == "ExpertRatingRecorded":
            ratings = tuple(payload["ratings"])
            if len(ratings) != 6 or any(
                not isinstance(r, int) or not 1 <= r <= 5 for r in ratings
            ):
                raise ValidationError(
                    f"expert ratings must be 6 integers in 1..5, got {ratings}"
                )
            self.expert_ratings.append(ratings)
            return len(self.expert_ratings)
        session = self._session(session_id)
        if kind == "PhaseAdvanced":
            target = session.peek_advance(when)
            if target.value != payload["to"]:
                raise CorruptLogError(
                    f"logged advance to {payload['to']!r} but protocol order "
                    f"requires {target.value!r}"
                )
            return session.advance(when)
        if kind == "ClickRecorded":
            return session.record_click(
                place_from_slug(payload["place"]),
                self._opt_place(payload.get("block_place")),
                when,
            )
        if kind == "AnswerSubmitted":
            return session.submit_answer(
                _counts_from_wire(payload["counts"]),
                payload.get("submission_id"),
                self._opt_place(payload.get("block_place")),
                when,
            )
        if kind == "SatisfactionSubmitted":
            session.submit_satisfaction(tuple(payload["ratings"]), when)
            return None
        raise CorruptLogError(f"unhandled event kind {kind!r}")

    @staticmethod
    def _opt_place(slug: str | None) -> Place | None:
        return place_from_slug(slug) if slug else None

    def _session(self, session_id: str | None) -> SessionState:
        if session_id is None or session_id not in self.sessions:
            raise NotFoundError(f"unknown session {session_id!r}")
        return self.sessions[session_id]

    # -- public operations ---------------------------------------------------

    def create_session(self, student_id: str, cohort: Cohort) -> SessionState:
        seed = derive_seed(self.base_seed, "session", student_id)
        return self._emit(
            student_id,
            "SessionCreated",
            {"student_id": student_id, "cohort": cohort.value, "seed": seed},
        )

    def record_click(
        self, session_id: str, place: Place, block_place: Place | None = None
    ) -> CountState:
        self._session(session_id)
        return self._emit(
            session_id,
            "ClickRecorded",
            {
                "place": place.slug,
                "block_place": block_place.slug if block_place else None,
            },
        )

    def submit_answer(
        self,
        session_id: str,
        counts: tuple[PlaceCount, ...],
        submission_id: str | None = None,
        block_place: Place | None = None,
    ) -> Verdict:
        session = self._session(session_id)
        if submission_id is not None and submission_id in session.submissions:
            return session.submissions[submission_id]  # idempotent re-send
        return self._emit(
            session_id,
            "AnswerSubmitted",
            {
                "counts": _counts_to_wire(counts),
                "submission_id": submission_id,
                "block_place": block_place.slug if block_place else None,
            },
        )

    def submit_satisfaction(self, session_id: str, ratings: tuple[int, ...]) -> None:
        self._session(session_id)
        self._emit(session_id, "SatisfactionSubmitted", {"ratings": list(ratings)})

    def advance_phase(self, session_id: str) -> Phase:
        session = self._session(session_id)
        # Validate against the live state first so the logged target phase is
        # the one actually entered.
        target = session.peek_advance(self.clock.now())
        return self._emit(session_id, "PhaseAdvanced", {"to": target.value})

    def record_expert_rating(self, ratings: tuple[int, ...]) -> int:
        return self._emit(None, "ExpertRatingRecorded", {"ratings": list(ratings)})

    def import_traditional(self, rows: list[TraditionalScoreRow]) -> int:
        payload_rows = [
            {
                "student_id": r.student_id,
                "pretest": r.pretest,
                "during": r.during,
                "posttest": r.posttest,
                "retention": r.retention,
            }
            for r in rows
        ]
        self._validate_import(payload_rows)  # abort before anything is logged
        return self._emit(None, "ScoresImported", {"rows": payload_rows})

    # -- traditional import validation ------------------------------------

    def _validate_import(self, rows: list[dict]) -> None:
        errors = []
        seen: set[str] = set()
        for i, row in enumerate(rows, start=1):
            sid = row["student_id"]
            if not sid:
                errors.append(f"row {i}: empty student_id")
            elif sid in seen:
                errors.append(f"row {i}: duplicate student_id {sid!r} in file")
            elif sid in self.traditional:
                errors.append(f"row {i}: student_id {sid!r} already imported")
            seen.add(sid)
            for field_name in ("pretest", "during", "posttest", "retention"):
                value = row[field_name]
                if value is None and field_name == "retention":
                    continue
                if not isinstance(value, int) or not 0 <= value <= 60:
                    errors.append(
                        f"row {i}: {field_name} {value!r} outside [0, 60]"
                    )
        if errors:
            raise ImportAbortedError(
                f"import aborted, {len(errors)} invalid row(s)",
                detail={"errors": errors},
            )

    def _apply_import(self, rows: list[dict]) -> int:
        self._validate_import(rows)
        for row in rows:
            self.traditional[row["student_id"]] = TraditionalScoreRow(
                student_id=row["student_id"],
                pretest=row["pretest"],
                during=row["during"],
                posttest=row["posttest"],
                retention=row["retention"],
            )
        return len(rows)

    # -- queries -----------------------------------------------------------

    def app_sessions(self) -> list[SessionState]:
        return [s for s in self.sessions.values() if s.cohort is Cohort.APP]

    def scores(self, kind: TestKind) -> list[Score]:
        return [
            s.score(kind) for s in self.app_sessions() if s.test_complete(kind)
        ]

    def snapshot(self) -> dict:
        """Field-by-field view of the whole aggregate (replay equality)."""
        return {
            "sessions": {sid: s.snapshot() for sid, s in self.sessions.items()},
            "traditional": {
                sid: {
                    "pretest": r.pretest,
                    "during": r.during,
                    "posttest": r.posttest,
                    "retention": r.retention,
                }
                for sid, r in self.traditional.items()
            },
            "expert_ratings": [list(r) for r in self.expert_ratings],
        }


def parse_traditional_csv(text: str) -> list[TraditionalScoreRow]:
    """Parse the traditional-cohort score file.

    Header must be ``student_id,pretest,during,posttest,retention``;
    retention may be empty. Any bad row aborts the whole parse with the
    offending row numbers.
    """
    import csv

    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        return []
    if [h.strip() for h in header] != TRADITIONAL_CSV_HEADER.split(","):
        raise ImportAbortedError(
            f"bad header {','.join(header)!r}; expected {TRADITIONAL_CSV_HEADER!r}"
        )
    rows: list[TraditionalScoreRow] = []
    errors: list[str] = []
    for i, fields in enumerate(reader, start=2):  # header is line 1
        if not fields or fields == [""]:
            continue
        if len(fields) != 5:
            errors.append(f"line {i}: expected 5 fields, got {len(fields)}")
            continue
        sid, pre, during, post, retention = (f.strip() for f in fields)
        try:
            rows.append(
                TraditionalScoreRow(
                    student_id=sid,
                    pretest=int(pre),
                    during=int(during),
                    posttest=int(post),
                    retention=int(retention) if retention else None,
                )
            )
        except ValueError:
            errors.append(f"line {i}: non-integer score")
    if errors:
        raise ImportAbortedError(
            f"import aborted, {len(errors)} unparseable row(s)",
            detail={"errors": errors},
        )
    return rows
