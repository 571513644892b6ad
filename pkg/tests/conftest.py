import pytest

from placetutor.clock import SimulatedClock

# One verdict line per acceptance criterion, printed as a summary section.
_acceptance_results: dict[str, bool] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    label = name.removeprefix("test_").replace("_", " ")
    _acceptance_results[label] = report.passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in _acceptance_results.items():
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label}")
from placetutor.engine import ITEMS_PER_TEST, Cohort, TestKind, TestPaper
from placetutor.places import PlaceCount, Question, correct_response
from placetutor.store import Study

# Domain names that look like test classes to the collector.
TestKind.__test__ = False
TestPaper.__test__ = False


@pytest.fixture
def study(tmp_path):
    st = Study.open(tmp_path / "data", clock=SimulatedClock(), base_seed=11)
    yield st
    st.close()


def wrong_counts(question: Question) -> tuple[PlaceCount, ...]:
    counts = list(correct_response(question).counts)
    counts[0] = PlaceCount(counts[0].place, counts[0].clicks + 1)
    return tuple(counts)


def submit_active(study, session, correct=True, submission_id=None):
    """Answer the session's current item through the store."""
    item = session.active_item()
    counts = (
        correct_response(item.question).counts
        if correct
        else wrong_counts(item.question)
    )
    return study.submit_answer(
        session.student_id,
        counts,
        submission_id=submission_id,
        block_place=item.block_place,
    )


def finish_paper(study, session, n_correct=ITEMS_PER_TEST):
    """Answer the active 60-item paper with exactly n_correct right answers,
    then advance out of the phase."""
    for i in range(ITEMS_PER_TEST):
        submit_active(study, session, correct=i < n_correct)
    study.advance_phase(session.student_id)


def finish_practice(study, session):
    while session.active_item() is not None:
        submit_active(study, session)
    study.advance_phase(session.student_id)


def drive_app_session(
    study,
    sid,
    pre=40,
    during=50,
    end_of_subject=50,
    post=55,
    retention=54,
    satisfaction=(3, 3, 3),
):
    """One student, whole protocol, with exact per-paper scores."""
    study.create_session(sid, Cohort.APP)
    session = study.sessions[sid]
    finish_paper(study, session, pre)
    study.advance_phase(sid)  # app training
    finish_practice(study, session)
    finish_paper(study, session, during)
    study.advance_phase(sid)  # extra knowledge
    finish_paper(study, session, end_of_subject)
    study.submit_satisfaction(sid, satisfaction)
    study.advance_phase(sid)
    finish_paper(study, session, post)  # posttest -> retention wait
    study.clock.advance(days=14, seconds=60)
    study.advance_phase(sid)
    finish_paper(study, session, retention)
    return session
