"""Place-value tutoring platform and its study-evaluation pipeline."""

from .engine import (
    BATTERY_KINDS,
    ITEMS_PER_TEST,
    PRACTICE_PER_PLACE,
    Cohort,
    Phase,
    SessionState,
    TestKind,
    build_practice_schedule,
    build_test,
)
from .errors import PlaceTutorError
from .places import (
    MAX_NUMBER,
    CountResponse,
    NumberDecomposition,
    Outcome,
    Place,
    PlaceCount,
    Question,
    Verdict,
    decompose,
    evaluate_response,
    explanation,
    generate_question,
)
from .report import Report, build_report, export_table
from .rng import SplitMix64, derive_seed
from .simulate import SimulationModel, run_simulation
from .stats import (
    EfficiencyResult,
    Scale,
    TTestResult,
    efficiency,
    independent_t,
    interpret,
    paired_t,
    rating_summary,
    t_upper_tail,
)
from .store import Study

__all__ = [
    "BATTERY_KINDS",
    "ITEMS_PER_TEST",
    "MAX_NUMBER",
    "PRACTICE_PER_PLACE",
    "Cohort",
    "CountResponse",
    "EfficiencyResult",
    "NumberDecomposition",
    "Outcome",
    "Phase",
    "Place",
    "PlaceCount",
    "PlaceTutorError",
    "Question",
    "Report",
    "Scale",
    "SessionState",
    "SimulationModel",
    "SplitMix64",
    "Study",
    "TTestResult",
    "TestKind",
    "Verdict",
    "build_practice_schedule",
    "build_report",
    "build_test",
    "decompose",
    "derive_seed",
    "efficiency",
    "evaluate_response",
    "explanation",
    "export_table",
    "generate_question",
    "independent_t",
    "interpret",
    "paired_t",
    "rating_summary",
    "run_simulation",
    "t_upper_tail",
]
