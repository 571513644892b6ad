"""Place-value arithmetic and pedagogy core.

Everything here is a pure function: decomposing a number into nonzero
(digit, place) parts, scripting the explanation page, generating questions
whose leading digit sits in a chosen place, and judging a click-count answer.
The zero-skipping rule is global: a place holding digit 0 never appears in a
decomposition and is never counted.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DegenerateInputError, MalformedResponseError, OutOfRangeError
from .rng import SplitMix64

MAX_NUMBER = 9_999_999

CUE_CORRECT = "correct"
CUE_RETRY = "retry"


class Place(enum.Enum):
    """The seven decimal places, ones (10^0) through millions (10^6)."""

    ONES = 0
    TENS = 1
    HUNDREDS = 2
    THOUSANDS = 3
    TEN_THOUSANDS = 4
    HUNDRED_THOUSANDS = 5
    MILLIONS = 6

    @property
    def power(self) -> int:
        return self.value

    @property
    def unit(self) -> int:
        return _UNITS[self.value]

    @property
    def slug(self) -> str:
        """Stable wire name, e.g. ``ten_thousands``."""
        return self.name.lower()

    @property
    def label(self) -> str:
        """Human label, e.g. ``ten-thousands``."""
        return self.name.lower().replace("_", "-")

    @property
    def cue(self) -> str:
        """Narration cue fired when the place's menu icon is hovered."""
        return f"place_{self.slug}"


_UNITS = tuple(10**i for i in range(7))
_PLACES = tuple(Place)
_PLACE_BY_SLUG = {p.slug: p for p in _PLACES}


def all_places() -> tuple[Place, ...]:
    """The seven places in ascending power order."""
    return _PLACES


def place_from_slug(slug: str) -> Place:
    try:
        return _PLACE_BY_SLUG[slug]
    except KeyError:
        raise OutOfRangeError(f"unknown place {slug!r}") from None


class Part(NamedTuple):
    digit: int  # 1..9, never 0
    place: Place


@dataclass(slots=True)
class NumberDecomposition:
    """A number split into its nonzero (digit, place) parts, ascending by
    power. Zero places are skipped, so sum(digit * unit) == value exactly."""

    value: int
    parts: tuple[Part, ...]

    @property
    def places(self) -> tuple[Place, ...]:
        return tuple(part.place for part in self.parts)


def _digit_parts(n: int, power_offset: int) -> tuple[Part, ...]:
    parts = []
    power = power_offset
    m = n
    while m:
        m, digit = divmod(m, 10)
        if digit:
            parts.append(Part(digit, _PLACES[power]))
        power += 1
    return tuple(parts)


# decompose() is on the hot path of the exhaustive sweep and of 400-student
# simulations, so the digit extraction is precomputed: parts for the low four
# digits and the high three digits are table lookups joined by one concat.
_LOW_PARTS = tuple(_digit_parts(n, 0) for n in range(10_000))
_HIGH_PARTS = tuple(_digit_parts(n, 4) for n in range(1_000))


def decompose(n: int) -> NumberDecomposition:
    """Zero-skipping decomposition of ``n`` (0 <= n <= 9,999,999)."""
    if n < 0 or n > MAX_NUMBER:
        raise OutOfRangeError(f"number {n} outside [0, {MAX_NUMBER}]")
    high, low = divmod(n, 10_000)
    parts = _LOW_PARTS[low] + _HIGH_PARTS[high] if high else _LOW_PARTS[low]
    return NumberDecomposition(n, parts)


class ExplanationLine(NamedTuple):
    place: Place
    digit: int
    contribution: int  # digit * unit
    skipped: bool  # True exactly when digit == 0 (no clicks required)


@dataclass(slots=True)
class ExplanationScript:
    """One line per place from ones up to the number's leading place."""

    number: int
    lines: tuple[ExplanationLine, ...]


def explanation(n: int) -> ExplanationScript:
    """The how-to-count script for ``n`` (1 <= n <= 9,999,999).

    Zero digits produce skipped lines (clicking not required); nonzero
    digits produce a count instruction with the digit's contribution.
    """
    if n < 1 or n > MAX_NUMBER:
        if n == 0:
            raise DegenerateInputError("0 has no leading place to explain")
        raise OutOfRangeError(f"number {n} outside [1, {MAX_NUMBER}]")
    lines = []
    m = n
    power = 0
    while m:
        m, digit = divmod(m, 10)
        lines.append(
            ExplanationLine(_PLACES[power], digit, digit * _UNITS[power], digit == 0)
        )
        power += 1
    return ExplanationScript(n, tuple(lines))


@dataclass(slots=True)
class Question:
    """One randomized exercise: the leading digit of ``number`` sits in
    ``target_place``, so number is uniform over [unit, 10*unit - 1]."""

    id: str
    target_place: Place
    number: int
    decomposition: NumberDecomposition
    seed_trace: int  # generator state before the draw; replays the question


def generate_question(place: Place, rng: SplitMix64, id_: str = "") -> Question:
    state_before = rng.state
    unit = place.unit
    number = rng.randint(unit, 10 * unit - 1)
    return Question(
        id=id_ or f"{place.slug}:{number}:{state_before:016x}",
        target_place=place,
        number=number,
        decomposition=decompose(number),
        seed_trace=state_before,
    )


class PlaceCount(NamedTuple):
    place: Place
    clicks: int  # >= 0


@dataclass(slots=True)
class CountResponse:
    """Per-place click counts, one entry per nonzero place of the question's
    number, ascending by power (the same order as the decomposition)."""

    counts: tuple[PlaceCount, ...]


class Outcome(enum.Enum):
    CORRECT = "correct"
    RETRY = "retry"


@dataclass(slots=True)
class Verdict:
    outcome: Outcome
    narration_events: tuple[str, ...]

    @property
    def is_correct(self) -> bool:
        return self.outcome is Outcome.CORRECT


def evaluate_response(question: Question, response: CountResponse) -> Verdict:
    """Judge a click-count answer against the question's decomposition.

    A response whose places do not exactly match the decomposition (missing,
    extra, or reordered places, or a negative count) is a malformed-response
    error: the screen fixes the response structure, so a mismatch means a
    client bug, not a wrong answer. A structurally valid response is Correct
    iff every per-place count equals the digit.
    """
    parts = question.decomposition.parts
    counts = response.counts
    if len(counts) != len(parts) or any(
        count.place is not part.place for count, part in zip(counts, parts)
    ):
        raise MalformedResponseError(
            f"response places {[c.place.slug for c in counts]} do not match "
            f"question places {[p.place.slug for p in parts]}",
            detail={"question": question.id},
        )
    if any(count.clicks < 0 for count in counts):
        raise MalformedResponseError("negative click count")

    events: list[str] = []
    correct = True
    for count, part in zip(counts, parts):
        events.extend(f"count_{i}" for i in range(1, count.clicks + 1))
        if count.clicks != part.digit:
            correct = False
    events.append(CUE_CORRECT if correct else CUE_RETRY)
    return Verdict(
        outcome=Outcome.CORRECT if correct else Outcome.RETRY,
        narration_events=tuple(events),
    )


def correct_response(question: Question) -> CountResponse:
    """The response a perfectly counting student would submit."""
    return CountResponse(
        tuple(PlaceCount(part.place, part.digit) for part in question.decomposition.parts)
    )
