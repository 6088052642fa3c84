"""Behavioral measures for 90-day, 12-intervention stringency schedules.

A schedule is an integer grid with one row per day and one column per
intervention policy (IP); entry (t, k) is the stringency level of IP k on
day t, bounded by a per-IP ceiling. Ceilings sum to 34, so the total
stringency of any single day lies in [0, 34]. The measures summarize how
a schedule behaves over time: overall range (swing), two-phase structure
(separability), breadth of IPs used (focus), day-to-day change (agility),
and how much of that change repeats weekly (periodicity).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InputDomainError

NUM_DAYS = 90
NUM_IPS = 12
TOTAL_DAILY_MAX = 34


@dataclass(frozen=True)
class IpMaxima:
    """Per-IP stringency ceilings; must cover all 12 IPs and sum to 34."""

    levels: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "levels", tuple(int(v) for v in self.levels))
        if len(self.levels) != NUM_IPS:
            raise InputDomainError(f"need {NUM_IPS} ceilings, got {len(self.levels)}")
        if any(v < 1 for v in self.levels):
            raise InputDomainError("every ceiling must be >= 1")
        if sum(self.levels) != TOTAL_DAILY_MAX:
            raise InputDomainError(
                f"ceilings must sum to {TOTAL_DAILY_MAX}, got {sum(self.levels)}"
            )


# Defaults in the standard IP listing order; only the sum is pinned by the
# domain, so the vector itself stays configurable.
DEFAULT_IP_MAXIMA = IpMaxima((3, 3, 2, 4, 2, 3, 2, 4, 2, 3, 2, 4))


class Schedule:
    """Validated 90-by-12 integer stringency grid."""

    __slots__ = ("grid",)

    def __init__(
        self,
        grid: np.ndarray | Iterable[Iterable[int]],
        maxima: IpMaxima = DEFAULT_IP_MAXIMA,
    ):
        arr = np.asarray(grid)
        if arr.shape != (NUM_DAYS, NUM_IPS):
            raise InputDomainError(
                f"schedule must be {NUM_DAYS}x{NUM_IPS}, got shape {arr.shape}"
            )
        if not np.issubdtype(arr.dtype, np.integer):
            try:
                whole = np.all(np.equal(np.mod(arr, 1), 0))
            except TypeError:
                whole = False
            if not whole:
                raise InputDomainError("schedule entries must be integers")
        arr = arr.astype(np.int64)
        if arr.min() < 0:
            raise InputDomainError("schedule entries must be non-negative")
        ceilings = np.asarray(maxima.levels)
        if (arr > ceilings[None, :]).any():
            day, ip = np.argwhere(arr > ceilings[None, :])[0]
            raise InputDomainError(
                f"entry {arr[day, ip]} on day {day} exceeds ceiling {ceilings[ip]} for IP {ip}"
            )
        arr.flags.writeable = False
        self.grid = arr


def daily_cost(schedule: Schedule) -> np.ndarray:
    """Total stringency per day, summed over IPs; 90 values in [0, 34]."""
    return schedule.grid.sum(axis=1)


def swing(schedule: Schedule) -> int:
    """Largest difference in total daily stringency between any two days."""
    totals = daily_cost(schedule)
    return int(totals.max() - totals.min())


def separability(schedule: Schedule) -> float:
    """Best two-phase contrast: split the days at every boundary and compare phase means.

    For each split t in [1, 89], the contrast is the absolute difference of
    the two phase means divided by their average. A split where both phases
    are all-zero contributes 0. Returns the maximum over splits.
    """
    totals = daily_cost(schedule).astype(np.float64)
    prefix = np.cumsum(totals)
    t = np.arange(1, NUM_DAYS)
    mean_head = prefix[:-1] / t
    mean_tail = (prefix[-1] - prefix[:-1]) / (NUM_DAYS - t)
    midpoint = (mean_head + mean_tail) / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        contrast = np.where(midpoint > 0, np.abs(mean_head - mean_tail) / midpoint, 0.0)
    return float(contrast.max())


def mean_reduce(schedule: Schedule) -> np.ndarray:
    """Per-IP mean stringency across the 90 days; 12 values."""
    return schedule.grid.mean(axis=0)


def focus(schedule: Schedule) -> int:
    """12 minus the number of IPs ever used; higher when fewer IPs carry the schedule."""
    return NUM_IPS - int(np.count_nonzero(mean_reduce(schedule) > 0))


def agility(schedule: Schedule) -> int:
    """Largest per-IP count of day-over-day level changes."""
    changes = (schedule.grid[1:] != schedule.grid[:-1]).sum(axis=0)
    return int(changes.max())


def periodicity(schedule: Schedule) -> float:
    """Fraction of an IP's day-over-day changes explained by a weekly cycle.

    Per IP, compares the count of lag-1 changes on days 1..82 with the
    count of lag-7 changes on days 7..89; an IP with no lag-1 changes in
    that window contributes 0. The result is the largest per-IP ratio,
    clamped below at 0.
    """
    grid = schedule.grid
    lag1 = (grid[1:83] != grid[0:82]).sum(axis=0).astype(np.float64)
    lag7 = (grid[7:90] != grid[0:83]).sum(axis=0).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(lag1 > 0, (lag1 - lag7) / lag1, 0.0)
    return float(max(0.0, ratio.max()))


def all_measures(schedule: Schedule) -> dict[str, float | int]:
    """All five measures keyed by name, in the output-schema order."""
    return {
        "swing": swing(schedule),
        "separability": separability(schedule),
        "focus": focus(schedule),
        "agility": agility(schedule),
        "periodicity": periodicity(schedule),
    }


SCHEDULE_CSV_COLUMNS = ["id"] + [f"ip{k + 1}" for k in range(NUM_IPS)]
MEASURES_CSV_COLUMNS = ["id", "swing", "separability", "focus", "agility", "periodicity"]


def write_measures_csv(
    path: str,
    rows: Iterable[tuple[str, dict[str, float | int]]],
    header_comment: str | None = None,
) -> None:
    """Write one measures row per (schedule id, measures dict)."""
    lines = []
    if header_comment is not None:
        lines.append(header_comment)
    lines.append(",".join(MEASURES_CSV_COLUMNS))
    for sid, measures in rows:
        cells = [sid] + [
            repr(float(measures[name])) if isinstance(measures[name], float) else str(measures[name])
            for name in MEASURES_CSV_COLUMNS[1:]
        ]
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_schedules_csv(
    path: str, maxima: IpMaxima = DEFAULT_IP_MAXIMA
) -> list[tuple[str, Schedule]]:
    """Read stacked schedules: an id column plus 12 IP columns, 90 rows per id.

    Rows for one schedule must be consecutive and in day order. Raises
    ``InputDomainError`` naming the offending schedule id on malformed input.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        try:
            header = next(reader)
        except StopIteration:
            raise InputDomainError(f"{path}: empty schedules file") from None
        if header != SCHEDULE_CSV_COLUMNS:
            raise InputDomainError(
                f"{path}: expected header {','.join(SCHEDULE_CSV_COLUMNS)}, got {','.join(header)}"
            )
        blocks: list[tuple[str, list[list[int]]]] = []
        for row in reader:
            if not row:
                continue
            if len(row) != NUM_IPS + 1:
                raise InputDomainError(
                    f"{path}: row for schedule {row[0]!r} has {len(row) - 1} IP cells"
                )
            sid = row[0]
            try:
                levels = [int(cell) for cell in row[1:]]
            except ValueError as exc:
                raise InputDomainError(f"{path}: schedule {sid!r}: non-integer cell ({exc})") from exc
            if not blocks or blocks[-1][0] != sid:
                blocks.append((sid, []))
            blocks[-1][1].append(levels)
    seen: set[str] = set()
    schedules: list[tuple[str, Schedule]] = []
    for sid, rows in blocks:
        if sid in seen:
            raise InputDomainError(f"{path}: schedule {sid!r} rows are not consecutive")
        seen.add(sid)
        if len(rows) != NUM_DAYS:
            raise InputDomainError(
                f"{path}: schedule {sid!r} has {len(rows)} rows, expected {NUM_DAYS}"
            )
        try:
            schedules.append((sid, Schedule(rows, maxima)))
        except InputDomainError as exc:
            raise InputDomainError(f"{path}: schedule {sid!r}: {exc}") from exc
    return schedules
