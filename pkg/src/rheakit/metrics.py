"""Pareto-front comparison toolkit on minimized objective pairs.

All functions here work on points (c, a) where *both* coordinates are
minimized; c is read as a cost, a as a case-like second objective.
Maximize-utility results from the policy domain enter through
``deficit_points``, which converts utility u into the deficit
``max_utility - u`` so that smaller is better on both axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import InputDomainError


class Point2(NamedTuple):
    """One solution's objective pair; both coordinates minimized."""

    c: float
    a: float


class Front:
    """A mutually nondominated set of points, stored sorted by cost.

    Construct via ``pareto_filter``; direct construction validates the
    nondomination invariant and rejects duplicates.
    """

    __slots__ = ("points",)

    def __init__(self, points: Iterable[Point2]):
        pts = tuple(sorted(Point2(float(p[0]), float(p[1])) for p in points))
        for i, p in enumerate(pts):
            for q in pts[i + 1 :]:
                if p == q:
                    raise InputDomainError(f"duplicate front point {p}")
                if dominates(p, q) or dominates(q, p):
                    raise InputDomainError(f"front points {p} and {q} are not mutually nondominated")
        self.points = pts

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, point: object) -> bool:
        return point in self.points

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Front):
            return NotImplemented
        return self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return f"Front({list(self.points)!r})"


def dominates(s1: Sequence[float], s2: Sequence[float]) -> bool:
    """True iff s1 is at least as good on both objectives and better on one."""
    c1, a1 = s1
    c2, a2 = s2
    return (c1 < c2 and a1 <= a2) or (c1 <= c2 and a1 < a2)


def pareto_filter(points: Iterable[Sequence[float]]) -> Front:
    """Maximal nondominated subset; duplicate points collapse to one."""
    pts = {Point2(float(p[0]), float(p[1])) for p in points}
    return Front(p for p in pts if not any(dominates(q, p) for q in pts))


def deficit_points(
    utility_cost_pairs: Iterable[Sequence[float]], max_utility: float
) -> list[Point2]:
    """Convert maximize-utility (utility, cost) pairs into minimized (c, a) points."""
    return [Point2(float(cost), float(max_utility) - float(u)) for u, cost in utility_cost_pairs]


def hypervolume(front: Front, reference: Point2) -> float:
    """Area dominated between the front and a reference point.

    Every front point must dominate the reference. Computed by a single
    sweep over the points sorted by cost: for a nondominated set the second
    coordinate is strictly decreasing, so each point contributes the box
    between its own cost and the next point's cost (or the reference).
    """
    ref = Point2(*reference)
    pts = sorted(front.points)
    for p in pts:
        if not dominates(p, ref):
            raise InputDomainError(f"front point {p} does not dominate reference {ref}")
    area = 0.0
    for i, (c, a) in enumerate(pts):
        next_c = pts[i + 1][0] if i + 1 < len(pts) else ref.c
        area += (next_c - c) * (ref.a - a)
    return area


def hvi(front: Front, reference_front: Front, reference_point: Point2) -> float:
    """Hypervolume improvement of ``front`` over ``reference_front``."""
    return hypervolume(front, reference_point) - hypervolume(reference_front, reference_point)


def _as_points(front_or_points: Front | Iterable[Sequence[float]]) -> tuple[Point2, ...]:
    """Points of a Front, or a raw point collection taken as given (no filtering)."""
    if isinstance(front_or_points, Front):
        return front_or_points.points
    return tuple(sorted(Point2(float(p[0]), float(p[1])) for p in front_or_points))


def domination_rate(
    front: Front | Iterable[Sequence[float]],
    reference_front: Front | Iterable[Sequence[float]],
) -> float:
    """Fraction of reference points dominated by some point of ``front``.

    Reference points are counted exactly as given; a redundant reference
    point dominated from within its own set still counts toward the total.
    """
    own = _as_points(front)
    reference = _as_points(reference_front)
    if not reference:
        raise InputDomainError("reference front must be non-empty")
    dominated = sum(1 for s0 in reference if any(dominates(s, s0) for s in own))
    return dominated / len(reference)


def mcr(
    front: Front | Iterable[Sequence[float]],
    reference_front: Front | Iterable[Sequence[float]],
) -> float:
    """Maximum second-objective reduction over dominated reference points.

    Over all pairs (s0 in reference, s in front) with s dominating s0,
    the largest a0 - a. Returns 0 when no such pair exists, keeping batch
    comparisons total.
    """
    best = 0.0
    for c0, a0 in _as_points(reference_front):
        for s in _as_points(front):
            if dominates(s, (c0, a0)):
                best = max(best, a0 - s[1])
    return best


def _owner_segments(
    method_fronts: Mapping[str, Front], c_min: float, c_max: float
) -> list[tuple[Point2, list[str], float, float]]:
    """Nearest-cost ownership segments of [c_min, c_max] per combined-front point.

    The combined front is the dominated-filtered union of all fronts. Each
    of its points owns the cost interval closer to it than to any other
    combined point (boundaries at midpoints between adjacent costs, clipped
    to [c_min, c_max]). A point shared by several methods lists them all.
    """
    if not c_min < c_max:
        raise InputDomainError(f"need c_min < c_max, got [{c_min}, {c_max}]")
    if all(len(front) == 0 for front in method_fronts.values()):
        raise InputDomainError("all fronts are empty")
    combined = pareto_filter(p for front in method_fronts.values() for p in front.points)
    memberships = {
        method: set(front.points) for method, front in method_fronts.items()
    }
    pts = list(combined.points)  # sorted by c; costs are pairwise distinct
    segments = []
    for i, point in enumerate(pts):
        lo = c_min if i == 0 else max(c_min, (pts[i - 1].c + point.c) / 2.0)
        hi = c_max if i + 1 == len(pts) else min(c_max, (point.c + pts[i + 1].c) / 2.0)
        owners = [method for method in method_fronts if point in memberships[method]]
        segments.append((point, owners, lo, hi))
    return segments


def run_metric(
    method_fronts: Mapping[str, Front], c_min: float, c_max: float
) -> dict[str, float]:
    """Share of the cost interval whose nearest combined-front point belongs to each method.

    A uniform cost preference is assumed. Points shared by several methods
    split their interval's credit equally, so the returned values always
    sum to 1.
    """
    credit = {method: 0.0 for method in method_fronts}
    for _, owners, lo, hi in _owner_segments(method_fronts, c_min, c_max):
        length = max(0.0, hi - lo)
        for method in owners:
            credit[method] += length / len(owners)
    span = c_max - c_min
    return {method: value / span for method, value in credit.items()}


@dataclass(frozen=True)
class KdeModel:
    """Gaussian kernel density estimate of scalar cost preferences.

    Bandwidth is the sample standard deviation scaled by n**(-1/5), the
    one-dimensional default rule of thumb.
    """

    samples: tuple[float, ...]
    bandwidth: float

    def __post_init__(self) -> None:
        if self.bandwidth <= 0:
            raise InputDomainError(f"bandwidth must be positive, got {self.bandwidth}")


def kde_fit(samples: Iterable[float]) -> KdeModel:
    """Fit a Gaussian KDE; needs at least two samples with nonzero spread."""
    xs = tuple(float(x) for x in samples)
    n = len(xs)
    if n < 2:
        raise InputDomainError(f"KDE needs at least 2 samples, got {n}")
    mean = sum(xs) / n
    variance = sum((x - mean) ** 2 for x in xs) / (n - 1)
    if variance <= 0:
        raise InputDomainError("KDE samples have zero spread")
    return KdeModel(xs, math.sqrt(variance) * n ** (-0.2))


def kde_eval(model: KdeModel, c: float) -> float:
    """Density at ``c``: mean of Gaussian kernels centred on the samples."""
    h = model.bandwidth
    total = sum(math.exp(-0.5 * ((c - x) / h) ** 2) for x in model.samples)
    return total / (len(model.samples) * h * math.sqrt(2.0 * math.pi))


def kde_interval_mass(model: KdeModel, lo: float, hi: float) -> float:
    """Exact probability mass of the estimate on [lo, hi] via Gaussian CDFs."""
    h = model.bandwidth
    inv = 1.0 / (h * math.sqrt(2.0))
    total = 0.0
    for x in model.samples:
        total += 0.5 * (math.erf((hi - x) * inv) - math.erf((lo - x) * inv))
    return total / len(model.samples)


def rem(
    method_fronts: Mapping[str, Front],
    model: KdeModel | None,
    c_min: float,
    c_max: float,
) -> dict[str, float]:
    """Preference-weighted variant of ``run_metric``.

    Each ownership segment is credited with the probability mass the cost
    preference estimate puts on it. Passing ``model=None`` selects the
    explicit uniform-density mode over [c_min, c_max], which reproduces
    ``run_metric`` exactly.
    """
    span = c_max - c_min
    credit = {method: 0.0 for method in method_fronts}
    for _, owners, lo, hi in _owner_segments(method_fronts, c_min, c_max):
        if model is None:
            mass = max(0.0, hi - lo) / span
        else:
            mass = kde_interval_mass(model, lo, hi) if hi > lo else 0.0
        for method in owners:
            credit[method] += mass / len(owners)
    return credit
