"""Synthetic cohort generator: drives n students through the whole protocol
using the real session engine and store operations, never shortcuts.

Learner model is deliberately minimal: each student has a pretest accuracy,
a practice-induced gain (posttest accuracy = pretest + gain), and a retention
decay (retention accuracy = posttest - decay), all truncated to [0, 1]. The
during-lesson paper is answered at posttest accuracy. mean/spread parameters
describe uniform draws on [mean - spread, mean + spread], so the population
sd is spread / sqrt(3).

Everything is a pure function of the model seed, so identical flags produce
byte-identical event logs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .clock import SimulatedClock
from .engine import Cohort, Phase, SessionState
from .errors import ValidationError
from .places import PlaceCount, Question, correct_response
from .rng import SplitMix64, derive_seed
from .store import Study, TraditionalScoreRow

#: P(rating 1), P(rating 2), P(rating 3) per satisfaction item.
DEFAULT_SATISFACTION = (
    (0.0, 0.35, 0.65),
    (0.0, 0.08, 0.92),
    (0.0, 0.03, 0.97),
)

#: P(rating 1..5) used for every expert item.
EXPERT_RATING_WEIGHTS = (0.0, 0.0, 0.0, 0.25, 0.75)


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{name} must be in [0, 1], got {value}")


@dataclass(slots=True)
class SimulationModel:
    n_students: int = 400
    seed: int = 42
    pre_accuracy: tuple[float, float] = (0.53, 0.29)  # mean, spread
    gain: tuple[float, float] = (0.405, 0.08)
    retention_decay: float = 0.003
    satisfaction_profile: tuple[tuple[float, float, float], ...] = DEFAULT_SATISFACTION
    practice_retry_rate: float = 0.15  # chance a practice item is first answered wrong
    traditional_gain_factor: float = 0.45  # fraction of the app gain, off-platform
    n_experts: int = 5

    def __post_init__(self):
        if self.n_students < 1:
            raise ValidationError(f"n_students must be >= 1, got {self.n_students}")
        for name, (mean, spread) in (
            ("pre_accuracy", self.pre_accuracy),
            ("gain", self.gain),
        ):
            _check_unit(f"{name} mean", mean)
            if spread < 0:
                raise ValidationError(f"{name} spread must be >= 0, got {spread}")
        _check_unit("retention_decay", self.retention_decay)
        _check_unit("practice_retry_rate", self.practice_retry_rate)
        _check_unit("traditional_gain_factor", self.traditional_gain_factor)
        if len(self.satisfaction_profile) != 3:
            raise ValidationError("satisfaction_profile needs one row per item (3)")
        for row in self.satisfaction_profile:
            if len(row) != 3 or any(p < 0 for p in row) or abs(sum(row) - 1) > 1e-9:
                raise ValidationError(
                    f"satisfaction row must be 3 probabilities summing to 1, got {row}"
                )


@dataclass(slots=True)
class Learner:
    pre: float
    post: float
    retention: float


def _clamp(x: float) -> float:
    return min(1.0, max(0.0, x))


def _draw(rng: SplitMix64, mean: float, spread: float) -> float:
    return mean + (2.0 * rng.uniform() - 1.0) * spread


def sample_learner(model: SimulationModel, rng: SplitMix64, gain_factor: float = 1.0) -> Learner:
    pre = _clamp(_draw(rng, *model.pre_accuracy))
    gain = _draw(rng, *model.gain) * gain_factor
    post = _clamp(pre + gain)
    return Learner(pre=pre, post=post, retention=_clamp(post - model.retention_decay))


def _wrong_counts(question: Question) -> tuple[PlaceCount, ...]:
    # Right places, first count off by one: structurally valid, graded retry.
    counts = list(correct_response(question).counts)
    first = counts[0]
    counts[0] = PlaceCount(first.place, first.clicks + 1)
    return tuple(counts)


def _answer_item(
    study: Study, session: SessionState, rng: SplitMix64, accuracy: float
) -> None:
    item = session.active_item()
    counts = (
        correct_response(item.question).counts
        if rng.uniform() < accuracy
        else _wrong_counts(item.question)
    )
    study.submit_answer(session.student_id, counts)


def _run_test(
    study: Study, session: SessionState, rng: SplitMix64, accuracy: float
) -> None:
    while session.active_item() is not None:
        _answer_item(study, session, rng, accuracy)
    study.advance_phase(session.student_id)


def _run_practice(study: Study, session: SessionState, rng: SplitMix64, retry_rate: float):
    sid = session.student_id
    while True:
        item = session.active_item()
        if item is None:
            break
        if retry_rate and rng.uniform() < retry_rate:
            study.submit_answer(
                sid, _wrong_counts(item.question), block_place=item.block_place
            )
        study.submit_answer(
            sid,
            correct_response(item.question).counts,
            block_place=item.block_place,
        )
    study.advance_phase(sid)


def _sample_rating(rng: SplitMix64, weights) -> int:
    return rng.choice_weighted(list(weights)) + 1


@dataclass(slots=True)
class SimulationSummary:
    students: int
    traditional: int
    experts: int
    events: int
    means: dict = field(default_factory=dict)  # test kind value -> mean score


def run_simulation(
    study: Study,
    model: SimulationModel,
    include_traditional: bool = True,
    include_experts: bool = True,
) -> SimulationSummary:
    """Populate ``study`` with a full synthetic cohort.

    The study's clock must be a SimulatedClock: the 14-day retention gate is
    crossed by jumping the clock, which a real clock cannot do.
    """
    clock = study.clock
    if not isinstance(clock, SimulatedClock):
        raise ValidationError("simulation requires a simulated clock")

    sessions: list[tuple[SessionState, SplitMix64, Learner]] = []
    for i in range(model.n_students):
        sid = f"app-{i:04d}"
        rng = SplitMix64(derive_seed(model.seed, "sim", sid))
        learner = sample_learner(model, rng)
        session = study.create_session(sid, Cohort.APP)
        sessions.append((session, rng, learner))

        _run_test(study, session, rng, learner.pre)  # pretest
        study.advance_phase(sid)  # app training is a walkthrough only
        _run_practice(study, session, rng, model.practice_retry_rate)
        _run_test(study, session, rng, learner.post)  # during-lesson
        study.advance_phase(sid)  # extra knowledge
        _run_test(study, session, rng, learner.post)  # end-of-subject
        ratings = tuple(
            _sample_rating(rng, row) for row in model.satisfaction_profile
        )
        study.submit_satisfaction(sid, ratings)
        study.advance_phase(sid)
        _run_test(study, session, rng, learner.post)  # posttest -> retention wait

    # Cross the retention gate for everyone at once.
    clock.advance(days=14, seconds=3600)
    for session, rng, learner in sessions:
        study.advance_phase(session.student_id)
        _run_test(study, session, rng, learner.retention)
        assert session.phase is Phase.DONE

    n_traditional = 0
    if include_traditional:
        rows = traditional_rows(model)
        n_traditional = study.import_traditional(rows)

    n_experts = 0
    if include_experts:
        for i in range(model.n_experts):
            rng = SplitMix64(derive_seed(model.seed, "expert", i))
            ratings = tuple(
                _sample_rating(rng, EXPERT_RATING_WEIGHTS) for _ in range(6)
            )
            study.record_expert_rating(ratings)
            n_experts += 1

    from .engine import TestKind

    means = {}
    for kind in TestKind:
        scores = study.scores(kind)
        if scores:
            means[kind.value] = sum(s.correct for s in scores) / len(scores)
    return SimulationSummary(
        students=model.n_students,
        traditional=n_traditional,
        experts=n_experts,
        events=study.log.seq if study.log else 0,
        means=means,
    )


def _binomial_score(rng: SplitMix64, accuracy: float, items: int = 60) -> int:
    return sum(1 for _ in range(items) if rng.uniform() < accuracy)


def traditional_rows(model: SimulationModel) -> list[TraditionalScoreRow]:
    """The off-platform comparison cohort: same learner population, gain
    damped by traditional_gain_factor, delivered as score rows only."""
    rows = []
    for i in range(model.n_students):
        sid = f"trad-{i:04d}"
        rng = SplitMix64(derive_seed(model.seed, "trad", sid))
        learner = sample_learner(model, rng, gain_factor=model.traditional_gain_factor)
        rows.append(
            TraditionalScoreRow(
                student_id=sid,
                pretest=_binomial_score(rng, learner.pre),
                during=_binomial_score(rng, learner.post),
                posttest=_binomial_score(rng, learner.post),
                retention=_binomial_score(rng, learner.retention),
            )
        )
    return rows


def traditional_csv(model: SimulationModel) -> str:
    """The same rows as traditional_rows, in import-file form."""
    from .store import TRADITIONAL_CSV_HEADER

    lines = [TRADITIONAL_CSV_HEADER]
    for r in traditional_rows(model):
        lines.append(
            f"{r.student_id},{r.pretest},{r.during},{r.posttest},{r.retention}"
        )
    return "\n".join(lines) + "\n"
