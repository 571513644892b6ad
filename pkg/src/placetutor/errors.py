"""Exception hierarchy shared by every layer.

Each error carries a stable machine-readable ``code`` so the HTTP layer can
map engine failures one-to-one onto wire errors without string matching.
"""

from __future__ import annotations


class PlaceTutorError(Exception):
    """Base class; ``code`` is a stable identifier, never reworded."""

    code = "internal"

    def __init__(self, message: str, detail: dict | None = None):
        super().__init__(message)
        self.detail = detail


class OutOfRangeError(PlaceTutorError):
    """Number outside [0, 9_999_999] or value outside its documented domain."""

    code = "out_of_range"


class DegenerateInputError(PlaceTutorError):
    """Input is in range but has no defined result (e.g. explaining 0)."""

    code = "degenerate_input"


class MalformedResponseError(PlaceTutorError):
    """Submitted counts do not structurally match the question (client bug,
    not a pedagogical retry)."""

    code = "malformed_response"


class InvalidPlaceError(PlaceTutorError):
    """Click on a place that is not part of the active question."""

    code = "invalid_place"


class ProtocolError(PlaceTutorError):
    """Operation not legal in the session's current phase/state."""

    code = "protocol_error"


class NotDueError(PlaceTutorError):
    """Retention test attempted before the 14-day wait has elapsed."""

    code = "retention_not_due"


class ConflictError(PlaceTutorError):
    """Duplicate session / duplicate student id."""

    code = "conflict"


class ValidationError(PlaceTutorError):
    """Rating or payload value outside its scale."""

    code = "validation"


class IncompleteError(PlaceTutorError):
    """Scoring requested before all items of a paper were answered."""

    code = "incomplete"


class EmptyInputError(PlaceTutorError):
    """Statistic requested on an empty data set."""

    code = "empty_input"


class PairingError(PlaceTutorError):
    """Paired test called with mismatched sample lengths."""

    code = "pairing_mismatch"


class StatsDomainError(PlaceTutorError):
    """Statistical input outside the function's domain (df = 0, mean off-scale)."""

    code = "stats_domain"


class ShapeError(PlaceTutorError):
    """Ragged rating matrix."""

    code = "ragged_matrix"


class MissingDataError(PlaceTutorError):
    """A report table cannot be built from the data at hand."""

    code = "missing_data"


class CorruptLogError(PlaceTutorError):
    """Event log record failed to parse or validate; detail names the line."""

    code = "corrupt_log"


class ImportAbortedError(PlaceTutorError):
    """Traditional-score import failed validation; nothing was stored."""

    code = "import_aborted"


class NotFoundError(PlaceTutorError):
    """Unknown session or resource id."""

    code = "not_found"
