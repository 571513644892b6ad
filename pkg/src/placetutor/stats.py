"""Study statistics: descriptives, E1/E2 efficiency against the 80/80
standard, paired and independent t-tests with one-tailed significance, and
Likert-scale summaries with interpretation bands.

The t-distribution tail is computed from scratch via the regularized
incomplete beta function (continued fraction, modified Lentz); the test
suite checks it against direct numerical integration of the density, so
the two routes stay independent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from math import exp, inf, isfinite, lgamma, log, log1p, sqrt

from .errors import (
    EmptyInputError,
    PairingError,
    ShapeError,
    StatsDomainError,
)

ALPHA = 0.05
EFFICIENCY_STANDARD = (80.0, 80.0)


# -- descriptive ----------------------------------------------------------


@dataclass(slots=True)
class DescriptiveStats:
    n: int
    mean: float
    sd: float  # sample standard deviation (n-1); 0 by convention when n = 1

    @property
    def sd_degenerate(self) -> bool:
        return self.n < 2


def descriptive(values: list[float]) -> DescriptiveStats:
    n = len(values)
    if n == 0:
        raise EmptyInputError("descriptive statistics need at least one value")
    mean = sum(values) / n
    if n == 1:
        return DescriptiveStats(1, mean, 0.0)
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return DescriptiveStats(n, mean, sqrt(var))


# -- efficiency -----------------------------------------------------------


@dataclass(slots=True)
class EfficiencyResult:
    e1: float  # process efficiency: mean during-lesson percent
    e2: float  # product efficiency: mean posttest percent
    standard: tuple[float, float] = EFFICIENCY_STANDARD

    @property
    def meets(self) -> bool:
        return self.e1 >= self.standard[0] and self.e2 >= self.standard[1]


def efficiency(during_scores, post_scores) -> EfficiencyResult:
    """E1/E2 from during-lesson and posttest Score lists (same cohort)."""
    if not during_scores or not post_scores:
        raise EmptyInputError("efficiency needs scores from both instruments")
    e1 = sum(s.percent for s in during_scores) / len(during_scores)
    e2 = sum(s.percent for s in post_scores) / len(post_scores)
    return EfficiencyResult(e1, e2)


# -- t distribution --------------------------------------------------------

_LENTZ_TINY = 1e-300
_LENTZ_EPS = 3e-16


def _beta_continued_fraction(x: float, a: float, b: float) -> float:
    """Continued fraction for the incomplete beta, evaluated by the modified
    Lentz method; converges fast for x < (a+1)/(a+b+2)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _LENTZ_TINY:
        d = _LENTZ_TINY
    d = 1.0 / d
    h = d
    for m in range(1, 400):
        m2 = 2 * m
        coeff = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + coeff * d
        if abs(d) < _LENTZ_TINY:
            d = _LENTZ_TINY
        c = 1.0 + coeff / c
        if abs(c) < _LENTZ_TINY:
            c = _LENTZ_TINY
        d = 1.0 / d
        h *= d * c
        coeff = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + coeff * d
        if abs(d) < _LENTZ_TINY:
            d = _LENTZ_TINY
        c = 1.0 + coeff / c
        if abs(c) < _LENTZ_TINY:
            c = _LENTZ_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _LENTZ_EPS:
            return h
    raise StatsDomainError(f"incomplete beta failed to converge (x={x}, a={a}, b={b})")


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """I_x(a, b), accurate to ~1e-14 over the domains used here."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        lgamma(a + b) - lgamma(a) - lgamma(b) + a * log(x) + b * log1p(-x)
    )
    front = exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(x, a, b) / a
    return 1.0 - front * _beta_continued_fraction(1.0 - x, b, a) / b


def t_upper_tail(t: float, df: int) -> float:
    """P(T_df > t), the one-tailed upper probability."""
    if df < 1:
        raise StatsDomainError(f"degrees of freedom must be >= 1, got {df}")
    if t != t:  # NaN
        raise StatsDomainError("t statistic is NaN")
    if t == inf:
        return 0.0
    if t == -inf:
        return 1.0
    x = df / (df + t * t)
    half_two_sided = 0.5 * regularized_incomplete_beta(x, df / 2.0, 0.5)
    return half_two_sided if t >= 0 else 1.0 - half_two_sided


def two_tailed(p_one_tailed: float) -> float:
    return 2.0 * min(p_one_tailed, 1.0 - p_one_tailed)


# -- t tests ----------------------------------------------------------------


class TTestKind(enum.Enum):
    PAIRED = "paired"
    INDEPENDENT = "independent"


@dataclass(slots=True)
class TTestResult:
    t: float
    df: int
    p_one_tailed: float
    kind: TTestKind

    @property
    def significant_at_05(self) -> bool:
        return self.p_one_tailed < ALPHA

    @property
    def p_two_tailed(self) -> float:
        return two_tailed(self.p_one_tailed)


def paired_t(pre: list[float], post: list[float]) -> TTestResult:
    """t on per-student differences post - pre; df = n - 1; one-tailed upper
    p, so large positive t (post above pre) means significant gain."""
    if len(pre) != len(post):
        raise PairingError(
            f"paired samples differ in length ({len(pre)} vs {len(post)})"
        )
    n = len(pre)
    if n < 2:
        raise EmptyInputError("paired t needs at least 2 pairs")
    diffs = [b - a for a, b in zip(pre, post)]
    stats = descriptive(diffs)
    if stats.sd == 0.0:
        t = 0.0 if stats.mean == 0.0 else (inf if stats.mean > 0 else -inf)
    else:
        t = stats.mean / (stats.sd / sqrt(n))
    return TTestResult(t, n - 1, t_upper_tail(t, n - 1), TTestKind.PAIRED)


def independent_t(a: list[float], b: list[float]) -> TTestResult:
    """Pooled-variance two-sample t; positive when mean(a) > mean(b)."""
    if len(a) < 2 or len(b) < 2:
        raise EmptyInputError("independent t needs at least 2 values per group")
    sa = descriptive(a)
    sb = descriptive(b)
    return _independent_from_summary(
        sa.mean, sa.sd, sa.n, sb.mean, sb.sd, sb.n
    )


def independent_t_summary(
    mean_a: float, sd_a: float, n_a: int, mean_b: float, sd_b: float, n_b: int
) -> TTestResult:
    """Pooled-variance t from summary statistics alone."""
    if n_a < 2 or n_b < 2:
        raise EmptyInputError("independent t needs at least 2 values per group")
    return _independent_from_summary(mean_a, sd_a, n_a, mean_b, sd_b, n_b)


def _independent_from_summary(mean_a, sd_a, n_a, mean_b, sd_b, n_b) -> TTestResult:
    df = n_a + n_b - 2
    pooled_var = ((n_a - 1) * sd_a**2 + (n_b - 1) * sd_b**2) / df
    denom = sqrt(pooled_var * (1.0 / n_a + 1.0 / n_b))
    diff = mean_a - mean_b
    if denom == 0.0:
        t = 0.0 if diff == 0.0 else (inf if diff > 0 else -inf)
    else:
        t = diff / denom
    return TTestResult(t, df, t_upper_tail(t, df), TTestKind.INDEPENDENT)


# -- Likert scales -----------------------------------------------------------


class Scale(enum.Enum):
    FIVE_POINT = "five_point"  # expert quality review
    THREE_POINT = "three_point"  # child satisfaction

    @property
    def range(self) -> tuple[float, float]:
        return (1.0, 5.0) if self is Scale.FIVE_POINT else (1.0, 3.0)


# Band tables: (lower edge, label), checked top-down; lower edges inclusive.
_BANDS = {
    Scale.FIVE_POINT: (
        (4.50, "Highest"),
        (3.50, "High"),
        (2.50, "Moderate"),
        (1.50, "Low"),
        (1.00, "Lowest"),
    ),
    Scale.THREE_POINT: (
        (2.34, "high"),
        (1.67, "moderate"),
        (1.00, "low"),
    ),
}


def interpret(mean: float, scale: Scale) -> str:
    """The verbal band for a mean rating; a monotone step function."""
    lo, hi = scale.range
    if not lo <= mean <= hi:
        raise StatsDomainError(f"mean {mean} outside scale range [{lo}, {hi}]")
    for edge, label in _BANDS[scale]:
        if mean >= edge:
            return label
    return _BANDS[scale][-1][1]


@dataclass(slots=True)
class ItemSummary:
    label: str
    stats: DescriptiveStats
    band: str


@dataclass(slots=True)
class RatingSummary:
    scale: Scale
    per_item: tuple[ItemSummary, ...]
    total: ItemSummary  # stats over per-respondent mean scores
    notes: tuple[str, ...] = ()


def rating_summary(
    matrix: list[list[float]],
    scale: Scale,
    item_labels: list[str] | None = None,
    total_sd: str = "respondent",
    expected_items: int | None = None,
) -> RatingSummary:
    """Per-item and total descriptives for a respondents x items matrix.

    The total row averages per-respondent mean scores (its mean equals the
    mean of item means; its sd reflects between-respondent spread).
    ``total_sd="item_mean"`` switches the total sd to the mean of the item
    sds, the other convention seen in published tables.
    """
    if not matrix:
        raise EmptyInputError("rating summary needs at least one respondent")
    n_items = len(matrix[0])
    if n_items == 0:
        raise EmptyInputError("rating summary needs at least one item")
    if any(len(row) != n_items for row in matrix):
        raise ShapeError("rating matrix is ragged")
    if expected_items is not None and n_items != expected_items:
        raise ShapeError(f"expected {expected_items} items, got {n_items}")
    lo, hi = scale.range
    for row in matrix:
        for value in row:
            if not lo <= value <= hi:
                raise StatsDomainError(f"rating {value} outside scale [{lo}, {hi}]")
    if item_labels is None:
        item_labels = [f"Item {j + 1}" for j in range(n_items)]
    if total_sd not in ("respondent", "item_mean"):
        raise StatsDomainError(f"unknown total_sd convention {total_sd!r}")

    per_item = tuple(
        ItemSummary(label, stats, interpret(stats.mean, scale))
        for label, stats in (
            (item_labels[j], descriptive([row[j] for row in matrix]))
            for j in range(n_items)
        )
    )
    respondent_means = [sum(row) / n_items for row in matrix]
    total_stats = descriptive(respondent_means)
    if total_sd == "item_mean":
        total_stats = DescriptiveStats(
            total_stats.n,
            total_stats.mean,
            sum(item.stats.sd for item in per_item) / n_items,
        )
    notes = ()
    if len(matrix) == 1:
        notes = ("single respondent: standard deviations are 0 by convention",)
    return RatingSummary(
        scale=scale,
        per_item=per_item,
        total=ItemSummary("Total", total_stats, interpret(total_stats.mean, scale)),
        notes=notes,
    )


# -- printed-number policy ----------------------------------------------------


def round_half_up(x: float, places: int) -> float:
    """Round half away from zero at the given decimal place (the convention
    used for every printed mean, sd, t and p)."""
    if not isfinite(x):
        return x  # inf/nan pass through; a zero-sd paired t renders as "inf"
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def format_number(x: float, places: int = 2) -> str:
    return f"{round_half_up(x, places):.{places}f}"


def format_p(p: float) -> str:
    """p to 4 decimals; extreme tails print as 0.0000 / 1.0000."""
    return f"{round_half_up(p, 4):.4f}"
