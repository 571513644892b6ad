from collections import Counter
from datetime import timedelta

import pytest

from placetutor.clock import SIM_EPOCH
from placetutor.engine import (
    BATTERY_KINDS,
    ITEMS_PER_TEST,
    PRACTICE_PER_PLACE,
    TEST_COMPOSITION,
    Cohort,
    Phase,
    SessionState,
    TestKind,
    build_practice_schedule,
    build_test,
)
from placetutor.errors import (
    IncompleteError,
    InvalidPlaceError,
    NotDueError,
    ProtocolError,
    ValidationError,
)
from placetutor.places import (
    Place,
    PlaceCount,
    all_places,
    correct_response,
)

T0 = SIM_EPOCH


def new_session(cohort=Cohort.APP, seed=7):
    return SessionState.create("s1", cohort, seed)


def answer_active(session, correct=True, when=T0):
    item = session.active_item()
    counts = list(correct_response(item.question).counts)
    if not correct:
        counts[0] = PlaceCount(counts[0].place, counts[0].clicks + 1)
    return session.submit_answer(
        tuple(counts), None, item.block_place, when
    )


def finish_paper(session, n_correct=ITEMS_PER_TEST, when=T0):
    for i in range(ITEMS_PER_TEST):
        answer_active(session, correct=i < n_correct, when=when)
    session.advance(when)


def finish_practice(session, when=T0):
    while session.active_item() is not None:
        answer_active(session, when=when)
    session.advance(when)


# -- paper construction --------------------------------------------------------


def test_papers_have_60_items_stratified_over_places():
    paper = build_test(TestKind.PRETEST, seed=3)
    assert len(paper.items) == ITEMS_PER_TEST == sum(TEST_COMPOSITION)
    by_place = Counter(q.target_place for q in paper.items)
    assert [by_place[p] for p in all_places()] == list(TEST_COMPOSITION)
    assert sorted(q.id for q in paper.items) == [
        f"pretest:{i:02d}" for i in range(60)
    ]


def test_paper_order_is_shuffled_not_blocked():
    paper = build_test(TestKind.POSTTEST, seed=3)
    powers = [q.target_place.power for q in paper.items]
    assert powers != sorted(powers)


def test_papers_are_deterministic_per_kind_and_seed():
    a = build_test(TestKind.PRETEST, seed=3)
    b = build_test(TestKind.PRETEST, seed=3)
    assert [q.number for q in a.items] == [q.number for q in b.items]
    other_kind = build_test(TestKind.POSTTEST, seed=3)
    other_seed = build_test(TestKind.PRETEST, seed=4)
    assert [q.number for q in other_kind.items] != [q.number for q in a.items]
    assert [q.number for q in other_seed.items] != [q.number for q in a.items]


def test_battery_excludes_the_end_of_subject_paper():
    assert TestKind.END_OF_SUBJECT not in BATTERY_KINDS
    assert len(BATTERY_KINDS) == 4


def test_practice_schedule_is_20_per_place():
    schedule = build_practice_schedule(seed=3)
    assert list(schedule.blocks) == list(all_places())
    assert all(len(b) == PRACTICE_PER_PLACE for b in schedule.blocks.values())
    assert schedule.total == 140
    ones = schedule.blocks[Place.ONES]
    assert ones[0].id == "practice:ones:00"
    assert all(1 <= q.number <= 9 for q in ones)


# -- protocol walk ----------------------------------------------------------------


def test_full_app_protocol_walk():
    session = new_session()
    assert session.phase is Phase.PRETEST
    with pytest.raises(ProtocolError):
        session.advance(T0)  # 0 of 60 answered

    finish_paper(session, n_correct=31)
    assert session.phase is Phase.APP_TRAINING
    session.advance(T0)  # marker phase, nothing required
    assert session.phase is Phase.PRACTICE

    with pytest.raises(ProtocolError):
        session.advance(T0)  # 140 items remain
    finish_practice(session)
    assert session.phase is Phase.DURING_LESSON_TEST

    finish_paper(session, n_correct=52)
    assert session.phase is Phase.EXTRA_KNOWLEDGE
    session.advance(T0)
    assert session.phase is Phase.END_OF_SUBJECT_TEST

    finish_paper(session, n_correct=50)
    assert session.phase is Phase.SATISFACTION
    with pytest.raises(ProtocolError):
        session.advance(T0)  # questionnaire not submitted
    session.submit_satisfaction((3, 2, 3), T0)
    session.advance(T0)
    assert session.phase is Phase.POSTTEST

    finish_paper(session, n_correct=54)
    assert session.phase is Phase.RETENTION_WAIT
    assert session.posttest_completed_at == T0

    early = T0 + timedelta(days=13, hours=23)
    with pytest.raises(NotDueError) as exc:
        session.advance(early)
    assert exc.value.detail["remaining_seconds"] == 3600

    due = T0 + timedelta(days=14)
    session.advance(due)
    assert session.phase is Phase.RETENTION_TEST
    finish_paper(session, n_correct=53, when=due)
    assert session.phase is Phase.DONE
    with pytest.raises(ProtocolError):
        session.advance(due)

    assert session.score(TestKind.PRETEST).correct == 31
    assert session.score(TestKind.POSTTEST).correct == 54
    assert session.score(TestKind.RETENTION).correct == 53


def test_traditional_cohort_skips_on_platform_phases():
    session = new_session(cohort=Cohort.TRADITIONAL)
    assert session.practice is None
    finish_paper(session)
    session.advance(T0)  # app training
    assert session.phase is Phase.PRACTICE
    assert session.active_item() is None  # nothing to practice
    session.advance(T0)  # practice auto-passes
    finish_paper(session)  # during lesson
    session.advance(T0)  # extra knowledge
    finish_paper(session)  # end of subject
    assert session.phase is Phase.SATISFACTION
    with pytest.raises(ProtocolError):
        session.submit_satisfaction((3, 3, 3), T0)  # app-cohort instrument
    session.advance(T0)  # satisfaction auto-passes
    assert session.phase is Phase.POSTTEST


def test_satisfaction_validation():
    session = new_session()
    with pytest.raises(ProtocolError):
        session.submit_satisfaction((3, 3, 3), T0)  # wrong phase
    finish_paper(session)
    session.advance(T0)
    finish_practice(session)
    finish_paper(session)
    session.advance(T0)
    finish_paper(session)
    assert session.phase is Phase.SATISFACTION
    with pytest.raises(ValidationError):
        session.submit_satisfaction((3, 3), T0)
    with pytest.raises(ValidationError):
        session.submit_satisfaction((3, 3, 4), T0)
    with pytest.raises(ValidationError):
        session.submit_satisfaction((3, 3, 0), T0)
    session.submit_satisfaction((1, 2, 3), T0)
    assert session.satisfaction == (1, 2, 3)


# -- answering and clicking ---------------------------------------------------------


def test_test_answers_are_final_and_ordered():
    session = new_session()
    first = session.active_item()
    assert (first.source, first.index) == ("pretest", 0)
    answer_active(session, correct=False)  # wrong answers still advance tests
    second = session.active_item()
    assert second.index == 1
    assert session.answers[TestKind.PRETEST][0].outcome.value == "retry"


def test_practice_wrong_answer_repeats_the_item():
    session = new_session()
    finish_paper(session)
    session.advance(T0)
    assert session.phase is Phase.PRACTICE
    item = session.active_item()
    assert (item.source, item.block_place, item.index) == ("practice", Place.ONES, 0)
    answer_active(session, correct=False)
    again = session.active_item()
    assert again.index == 0
    assert again.question.number == item.question.number
    answer_active(session, correct=True)
    assert session.active_item().index == 1
    assert session.practice_done[Place.ONES] == 1


def test_practice_requires_block_place():
    session = new_session()
    finish_paper(session)
    session.advance(T0)
    item = session.active_item()
    with pytest.raises(ProtocolError):
        session.submit_answer(
            correct_response(item.question).counts, None, None, T0
        )


def test_block_place_is_rejected_outside_practice():
    session = new_session()
    item = session.active_item()
    with pytest.raises(ProtocolError):
        session.submit_answer(
            correct_response(item.question).counts, None, Place.ONES, T0
        )


def test_clicks_count_up_and_reset_on_submission():
    session = new_session()
    item = session.active_item()
    place = item.question.decomposition.places[0]
    first = session.record_click(place, None, T0)
    second = session.record_click(place, None, T0)
    assert (first.running_count, second.running_count) == (1, 2)
    assert second.display == "count_2"
    assert session.clicks["pretest"][place] == 2
    answer_active(session, correct=False)
    assert "pretest" not in session.clicks  # reset even on retry


def test_click_on_foreign_place_is_invalid():
    session = new_session()
    # Find an item that does not use every place (ones-place items never do).
    while len(session.active_item().question.decomposition.places) == 7:
        answer_active(session)
    item = session.active_item()
    absent = next(p for p in all_places() if p not in item.question.decomposition.places)
    with pytest.raises(InvalidPlaceError):
        session.record_click(absent, None, T0)


def test_click_without_active_item_is_protocol_error():
    session = new_session()
    finish_paper(session)
    assert session.phase is Phase.APP_TRAINING
    with pytest.raises(ProtocolError):
        session.record_click(Place.ONES, None, T0)


def test_completed_paper_rejects_further_answers():
    session = new_session()
    for _ in range(ITEMS_PER_TEST):
        answer_active(session)
    assert session.active_item() is None
    q = build_test(TestKind.PRETEST, 1).items[0]
    with pytest.raises(ProtocolError):
        session.submit_answer(correct_response(q).counts, None, None, T0)


def test_score_requires_complete_paper():
    session = new_session()
    answer_active(session)
    with pytest.raises(IncompleteError):
        session.score(TestKind.PRETEST)
    assert not session.test_complete(TestKind.PRETEST)


def test_sessions_with_same_seed_get_same_papers():
    a = SessionState.create("a", Cohort.APP, 123)
    b = SessionState.create("b", Cohort.APP, 123)
    c = SessionState.create("c", Cohort.APP, 124)
    for kind in TestKind:
        assert [q.number for q in a.papers[kind].items] == [
            q.number for q in b.papers[kind].items
        ]
    assert [q.number for q in a.papers[TestKind.PRETEST].items] != [
        q.number for q in c.papers[TestKind.PRETEST].items
    ]


def test_snapshot_shape():
    session = new_session()
    answer_active(session, correct=True)
    snap = session.snapshot()
    assert snap["phase"] == "pretest"
    assert snap["cohort"] == "app"
    assert len(snap["answers"]["pretest"]) == 1
    assert snap["answers"]["pretest"][0]["outcome"] == "correct"
    assert snap["posttest_completed_at"] is None
    assert snap["practice_done"]["ones"] == 0
