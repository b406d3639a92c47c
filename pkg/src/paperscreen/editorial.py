"""Editorial-duration series and shrinkage changepoint detection.

A journal whose submission-to-acceptance durations collapse abruptly
(papers accepted in days instead of months) is an integrity signal.
Durations are heavy-tailed, so everything here is rank/median based:
binary segmentation splitting where the two-sample rank-sum statistic is
most extreme, with the same test as the significance gate.  Only
shrinkage is alerted; lengthening reviews are not suspicious.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

from scipy import stats as sps

from paperscreen.corpus import Corpus

DEFAULT_MIN_SEGMENT = 10
DEFAULT_ALPHA = 0.01
DEFAULT_RATIO_CEILING = 0.6

STATUS_OK = "ok"
STATUS_INSUFFICIENT = "insufficient data"


@dataclass(frozen=True)
class DurationSeries:
    journal: str
    points: tuple[tuple[object, int], ...]  # (accepted_date, duration_days), sorted
    excluded: int  # records of this journal lacking one of the two dates

    def durations(self) -> list[int]:
        return [d for _, d in self.points]

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class Changepoint:
    index: int
    date: object
    median_before: float
    median_after: float
    shrinkage_ratio: float
    significance: float


@dataclass(frozen=True)
class ChangepointScan:
    journal: str
    status: str
    changepoints: tuple[Changepoint, ...]


def build_series(corpus: Corpus, journal: str) -> DurationSeries:
    """Submission-to-acceptance durations for one journal, date-sorted."""
    points = []
    excluded = 0
    for doc in corpus:
        if doc.journal != journal:
            continue
        if doc.submitted is None or doc.accepted is None:
            excluded += 1
            continue
        points.append((doc.accepted, (doc.accepted - doc.submitted).days))
    points.sort()  # by date, then duration: total order, input-order independent
    return DurationSeries(journal=journal, points=tuple(points), excluded=excluded)


def _median(values) -> float:
    return statistics.median(values)


def _mad(values, center: float) -> float:
    return statistics.median([abs(v - center) for v in values])


def _split_pvalue(left, right) -> float:
    if min(left) == max(left) == min(right) == max(right):
        return 1.0  # all values identical: the rank test is undefined
    return float(sps.mannwhitneyu(left, right, alternative="two-sided").pvalue)


def _best_split(values, min_segment: int):
    """Split index minimizing the rank-sum p-value.

    Medians are step functions whose gap plateaus around a regime change;
    the rank statistic is what actually localizes the boundary, so it is
    used both to place the split and (by the caller) to gate acceptance.
    Returns (p_value, index, median_before, median_after).
    """
    best = None
    for i in range(min_segment, len(values) - min_segment + 1):
        left = values[:i]
        right = values[i:]
        p = _split_pvalue(left, right)
        if best is None or p < best[0]:
            best = (p, i, _median(left), _median(right))
    return best


def detect_changepoints(
    series: DurationSeries,
    min_segment: int = DEFAULT_MIN_SEGMENT,
    alpha: float = DEFAULT_ALPHA,
    ratio_ceiling: float = DEFAULT_RATIO_CEILING,
) -> ChangepointScan:
    """Recursive binary segmentation; alerts only on median shrinkage.

    A significant split partitions the series and both sides are searched
    again, but a changepoint is emitted only when the after/before median
    ratio is below the ceiling.
    """
    values = series.durations()
    if len(values) < 2 * min_segment:
        return ChangepointScan(journal=series.journal, status=STATUS_INSUFFICIENT, changepoints=())

    found: list[Changepoint] = []

    def recurse(lo: int, hi: int) -> None:
        segment = values[lo:hi]
        if len(segment) < 2 * min_segment:
            return
        best = _best_split(segment, min_segment)
        if best is None:
            return
        p, i, ml, mr = best
        if p >= alpha:
            return
        ratio = mr / ml if ml > 0 else (1.0 if mr == 0 else math.inf)
        if ratio < ratio_ceiling:
            found.append(
                Changepoint(
                    index=lo + i,
                    date=series.points[lo + i][0],
                    median_before=ml,
                    median_after=mr,
                    shrinkage_ratio=ratio,
                    significance=p,
                )
            )
        recurse(lo, lo + i)
        recurse(lo + i, hi)

    recurse(0, len(values))
    found.sort(key=lambda c: c.index)
    return ChangepointScan(journal=series.journal, status=STATUS_OK, changepoints=tuple(found))


def monthly_summary(series: DurationSeries) -> list[tuple[str, int, float]]:
    """(year-month, count, median duration) per calendar acceptance month."""
    buckets: dict[str, list[int]] = {}
    for date, duration in series.points:
        key = f"{date.year:04d}-{date.month:02d}"
        buckets.setdefault(key, []).append(duration)
    return [(month, len(vals), _median(vals)) for month, vals in sorted(buckets.items())]
