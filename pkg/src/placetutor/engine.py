"""One student's traversal of the study protocol.

The protocol is a fixed phase sequence: pretest, app training, practice,
during-lesson test, extra knowledge, end-of-subject test, satisfaction
questionnaire, posttest, a 14-day wait, retention test, done. Phases never
skip or reorder; the retention test is unreachable until 14 full days after
the posttest was completed.

Test papers hold exactly 60 items stratified over the seven places
(9,9,9,9,8,8,8 from ones to millions); the practice schedule holds 20 items
per place, 140 in total. In practice a wrong answer re-presents the same item
with counts reset; in test phases the first submission is final.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import NamedTuple

from .errors import (
    IncompleteError,
    InvalidPlaceError,
    NotDueError,
    ProtocolError,
    ValidationError,
)
from .places import (
    CountResponse,
    Outcome,
    Place,
    PlaceCount,
    Question,
    Verdict,
    all_places,
    evaluate_response,
    generate_question,
)
from .rng import SplitMix64, derive_seed

ITEMS_PER_TEST = 60
TEST_COMPOSITION = (9, 9, 9, 9, 8, 8, 8)  # ones..millions, sums to 60
PRACTICE_PER_PLACE = 20
RETENTION_WAIT = timedelta(days=14)


class Cohort(enum.Enum):
    APP = "app"
    TRADITIONAL = "traditional"


class Phase(enum.Enum):
    PRETEST = "pretest"
    APP_TRAINING = "app_training"
    PRACTICE = "practice"
    DURING_LESSON_TEST = "during_lesson_test"
    EXTRA_KNOWLEDGE = "extra_knowledge"
    END_OF_SUBJECT_TEST = "end_of_subject_test"
    SATISFACTION = "satisfaction"
    POSTTEST = "posttest"
    RETENTION_WAIT = "retention_wait"
    RETENTION_TEST = "retention_test"
    DONE = "done"


PHASE_ORDER = tuple(Phase)
_NEXT_PHASE = {p: PHASE_ORDER[i + 1] for i, p in enumerate(PHASE_ORDER[:-1])}


class TestKind(enum.Enum):
    PRETEST = "pretest"
    DURING_LESSON = "during_lesson"
    END_OF_SUBJECT = "end_of_subject"
    POSTTEST = "posttest"
    RETENTION = "retention"


#: The four instruments that feed the analyses (the end-of-subject paper is
#: protocol-only and never enters a table).
BATTERY_KINDS = (
    TestKind.PRETEST,
    TestKind.DURING_LESSON,
    TestKind.POSTTEST,
    TestKind.RETENTION,
)

TEST_PHASES = {
    Phase.PRETEST: TestKind.PRETEST,
    Phase.DURING_LESSON_TEST: TestKind.DURING_LESSON,
    Phase.END_OF_SUBJECT_TEST: TestKind.END_OF_SUBJECT,
    Phase.POSTTEST: TestKind.POSTTEST,
    Phase.RETENTION_TEST: TestKind.RETENTION,
}

#: Phases with no on-platform content: advancing out of them needs nothing.
MARKER_PHASES = {Phase.APP_TRAINING, Phase.EXTRA_KNOWLEDGE}


@dataclass(slots=True)
class TestPaper:
    kind: TestKind
    seed: int
    items: tuple[Question, ...]  # exactly 60


@dataclass(slots=True)
class PracticeSchedule:
    seed: int
    blocks: dict[Place, tuple[Question, ...]]  # 7 blocks x 20, ascending place

    @property
    def total(self) -> int:
        return sum(len(b) for b in self.blocks.values())


def build_test(kind: TestKind, seed: int) -> TestPaper:
    """A 60-item paper, deterministic in (kind, seed); item order shuffled."""
    rng = SplitMix64(derive_seed(seed, "paper", kind.value))
    items: list[Question] = []
    for place, n in zip(all_places(), TEST_COMPOSITION):
        items.extend(generate_question(place, rng) for _ in range(n))
    rng.shuffle(items)
    for index, question in enumerate(items):
        question.id = f"{kind.value}:{index:02d}"
    return TestPaper(kind, seed, tuple(items))


def build_practice_schedule(seed: int) -> PracticeSchedule:
    """Seven practice blocks of 20 questions each, one per place."""
    rng = SplitMix64(derive_seed(seed, "practice"))
    blocks: dict[Place, tuple[Question, ...]] = {}
    for place in all_places():
        blocks[place] = tuple(
            generate_question(place, rng, id_=f"practice:{place.slug}:{i:02d}")
            for i in range(PRACTICE_PER_PLACE)
        )
    return PracticeSchedule(seed, blocks)


@dataclass(slots=True)
class Score:
    correct: int
    max: int = ITEMS_PER_TEST

    @property
    def percent(self) -> float:
        return self.correct / self.max * 100.0


@dataclass(slots=True)
class CountState:
    """Server acknowledgment of one click: the red running-count numeral and
    its narration cue."""

    place: Place
    running_count: int
    display: str  # cue id, e.g. "count_3"


class RecordedAnswer(NamedTuple):
    counts: tuple[PlaceCount, ...]
    outcome: Outcome
    ts: str  # ISO-8601, as written to the log


class ActiveItem(NamedTuple):
    source: str  # test kind value or "practice"
    block_place: Place | None  # practice only
    index: int
    question: Question


def _practice_ctx(place: Place) -> str:
    return f"practice:{place.slug}"


@dataclass
class SessionState:
    """Full state of one student's session; every mutation happens through
    the transition methods so live operation and log replay share one code
    path."""

    student_id: str
    cohort: Cohort
    seed: int
    phase: Phase
    papers: dict[TestKind, TestPaper]
    practice: PracticeSchedule | None
    answers: dict[TestKind, list[RecordedAnswer]] = field(
        default_factory=lambda: {kind: [] for kind in TestKind}
    )
    practice_done: dict[Place, int] = field(
        default_factory=lambda: {p: 0 for p in all_places()}
    )
    clicks: dict[str, dict[Place, int]] = field(default_factory=dict)
    posttest_completed_at: datetime | None = None
    satisfaction: tuple[int, int, int] | None = None
    submissions: dict[str, Verdict] = field(default_factory=dict)

    @classmethod
    def create(cls, student_id: str, cohort: Cohort, seed: int) -> "SessionState":
        papers = {kind: build_test(kind, seed) for kind in TestKind}
        practice = build_practice_schedule(seed) if cohort is Cohort.APP else None
        return cls(
            student_id=student_id,
            cohort=cohort,
            seed=seed,
            phase=Phase.PRETEST,
            papers=papers,
            practice=practice,
        )

    # -- item addressing ------------------------------------------------

    def _practice_question(self, block_place: Place) -> Question | None:
        assert self.practice is not None
        done = self.practice_done[block_place]
        block = self.practice.blocks[block_place]
        return block[done] if done < len(block) else None

    def active_item(self, block_place: Place | None = None) -> ActiveItem | None:
        """The item a click or answer would apply to, or None when the
        current phase has nothing left to answer."""
        if self.phase is Phase.PRACTICE:
            if self.cohort is not Cohort.APP:
                return None
            if block_place is None:
                # next block, low place first, with items remaining
                for place in all_places():
                    if self.practice_done[place] < PRACTICE_PER_PLACE:
                        block_place = place
                        break
                else:
                    return None
            question = self._practice_question(block_place)
            if question is None:
                return None
            return ActiveItem(
                "practice", block_place, self.practice_done[block_place], question
            )
        kind = TEST_PHASES.get(self.phase)
        if kind is None:
            return None
        index = len(self.answers[kind])
        if index >= ITEMS_PER_TEST:
            return None
        return ActiveItem(kind.value, None, index, self.papers[kind].items[index])

    def _require_item(self, block_place: Place | None) -> tuple[ActiveItem, str]:
        if self.phase is Phase.PRACTICE:
            if self.cohort is not Cohort.APP:
                raise ProtocolError("traditional cohort has no practice items")
            if block_place is None:
                raise ProtocolError("practice operations must name a block place")
            question = self._practice_question(block_place)
            if question is None:
                raise ProtocolError(
                    f"practice block {block_place.slug} is already complete"
                )
            item = ActiveItem(
                "practice", block_place, self.practice_done[block_place], question
            )
            return item, _practice_ctx(block_place)
        kind = TEST_PHASES.get(self.phase)
        if kind is None:
            raise ProtocolError(f"no active item in phase {self.phase.value}")
        if block_place is not None:
            raise ProtocolError("block place is a practice-only field")
        item = self.active_item()
        if item is None:
            raise ProtocolError(
                f"{kind.value} paper is complete; advance the session"
            )
        return item, kind.value

    # -- transitions -----------------------------------------------------

    def record_click(
        self, place: Place, block_place: Place | None, when: datetime
    ) -> CountState:
        item, ctx = self._require_item(block_place)
        if place not in item.question.decomposition.places:
            raise InvalidPlaceError(
                f"{place.slug} is not a countable place of {item.question.number}"
            )
        counts = self.clicks.setdefault(ctx, {})
        counts[place] = running = counts.get(place, 0) + 1
        return CountState(place, running, f"count_{running}")

    def submit_answer(
        self,
        counts: tuple[PlaceCount, ...],
        submission_id: str | None,
        block_place: Place | None,
        when: datetime,
    ) -> Verdict:
        item, ctx = self._require_item(block_place)
        verdict = evaluate_response(item.question, CountResponse(counts))
        self.clicks.pop(ctx, None)  # retry and completion both reset the counter
        if item.source == "practice":
            if verdict.is_correct:
                self.practice_done[item.block_place] += 1
        else:
            kind = TestKind(item.source)
            self.answers[kind].append(
                RecordedAnswer(counts, verdict.outcome, when.isoformat())
            )
            if kind is TestKind.POSTTEST and len(self.answers[kind]) == ITEMS_PER_TEST:
                self.posttest_completed_at = when
        if submission_id is not None:
            self.submissions[submission_id] = verdict
        return verdict

    def submit_satisfaction(self, ratings: tuple[int, ...], when: datetime) -> None:
        if self.phase is not Phase.SATISFACTION:
            raise ProtocolError(
                f"satisfaction questionnaire not open in phase {self.phase.value}"
            )
        if self.cohort is not Cohort.APP:
            raise ProtocolError("satisfaction instrument applies to the app cohort")
        if len(ratings) != 3:
            raise ValidationError(f"expected 3 ratings, got {len(ratings)}")
        if any(not isinstance(r, int) or not 1 <= r <= 3 for r in ratings):
            raise ValidationError(f"ratings must be integers in 1..3, got {ratings}")
        self.satisfaction = tuple(ratings)

    def peek_advance(self, now: datetime) -> Phase:
        """Validate the advance and return the phase it would enter."""
        self._check_advance(now)
        return _NEXT_PHASE[self.phase]

    def advance(self, now: datetime) -> Phase:
        self.phase = self.peek_advance(now)
        return self.phase

    def _check_advance(self, now: datetime) -> None:
        phase = self.phase
        if phase is Phase.DONE:
            raise ProtocolError("session is already done")
        if phase in MARKER_PHASES:
            return
        if phase is Phase.RETENTION_WAIT:
            elapsed = now - self.posttest_completed_at
            if elapsed < RETENTION_WAIT:
                remaining = RETENTION_WAIT - elapsed
                raise NotDueError(
                    "retention test opens 14 days after the posttest; "
                    f"{remaining.days} days {remaining.seconds // 3600} hours remain",
                    detail={"remaining_seconds": int(remaining.total_seconds())},
                )
            return
        if self.cohort is Cohort.TRADITIONAL and phase in (
            Phase.PRACTICE,
            Phase.SATISFACTION,
        ):
            return  # off-platform for the traditional cohort
        if phase is Phase.PRACTICE:
            remaining = sum(
                PRACTICE_PER_PLACE - n for n in self.practice_done.values()
            )
            if remaining:
                raise ProtocolError(f"practice incomplete: {remaining} items remain")
            return
        if phase is Phase.SATISFACTION:
            if self.satisfaction is None:
                raise ProtocolError("satisfaction questionnaire not yet submitted")
            return
        kind = TEST_PHASES[phase]
        answered = len(self.answers[kind])
        if answered < ITEMS_PER_TEST:
            raise ProtocolError(
                f"{kind.value} incomplete: {answered} of {ITEMS_PER_TEST} answered"
            )

    # -- queries ----------------------------------------------------------

    def score(self, kind: TestKind) -> Score:
        answered = self.answers[kind]
        if len(answered) < ITEMS_PER_TEST:
            raise IncompleteError(
                f"{kind.value} has {len(answered)} of {ITEMS_PER_TEST} answers"
            )
        correct = sum(1 for a in answered if a.outcome is Outcome.CORRECT)
        return Score(correct)

    def test_complete(self, kind: TestKind) -> bool:
        return len(self.answers[kind]) >= ITEMS_PER_TEST

    def snapshot(self) -> dict:
        """JSON-able view of every live field; used for replay equality
        checks and the session GET endpoint."""
        return {
            "student_id": self.student_id,
            "cohort": self.cohort.value,
            "seed": self.seed,
            "phase": self.phase.value,
            "answers": {
                kind.value: [
                    {
                        "counts": [[c.place.slug, c.clicks] for c in a.counts],
                        "outcome": a.outcome.value,
                        "ts": a.ts,
                    }
                    for a in answers
                ]
                for kind, answers in self.answers.items()
            },
            "practice_done": {p.slug: n for p, n in self.practice_done.items()},
            "clicks": {
                ctx: {p.slug: n for p, n in counts.items()}
                for ctx, counts in self.clicks.items()
            },
            "posttest_completed_at": (
                self.posttest_completed_at.isoformat()
                if self.posttest_completed_at
                else None
            ),
            "satisfaction": list(self.satisfaction) if self.satisfaction else None,
            "submissions": {
                sid: verdict.outcome.value for sid, verdict in self.submissions.items()
            },
        }
