"""Non-evolutionary expert-combination baselines, plus the unseeded-evolution alias.

Two classic ways of combining the bundled experts are evaluated exhaustively:
mixing expert behavior per context (mixture of experts) and applying one
weighted blend of all experts everywhere (weighted ensembling). Both are
restricted to behaviors the experts already exhibit, which is exactly what
keeps them away from parts of the optimal front.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator, Sequence

from .domain import (
    Action,
    DomainConfig,
    OutcomePair,
    Prescriptor,
    evaluate,
    nondominated,
    utility,
)
from .errors import InputDomainError
from .evolve import EvolveConfig, EvolveResult, evolve


@dataclass(frozen=True)
class WeightVector:
    """Expert mixing weights on the probability simplex plus a vote threshold."""

    weights: tuple[Fraction, ...]
    threshold: Fraction

    def __post_init__(self) -> None:
        weights = tuple(Fraction(w) for w in self.weights)
        threshold = Fraction(self.threshold)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "threshold", threshold)
        if any(w < 0 or w > 1 for w in weights):
            raise InputDomainError("weights must lie in [0, 1]")
        total = sum(weights)
        if abs(float(total) - 1.0) > 1e-9:
            raise InputDomainError(f"weights must sum to 1, got {float(total)}")
        if not 0 < threshold <= 1:
            raise InputDomainError(f"threshold must be in (0, 1], got {threshold}")


def simplex_grid(count: int, resolution: int) -> Iterator[tuple[Fraction, ...]]:
    """All weight vectors with entries k/resolution summing to 1."""
    if count < 1 or resolution < 1:
        raise InputDomainError("need at least one expert and resolution >= 1")

    def rec(remaining: int, slots: int) -> Iterator[tuple[int, ...]]:
        if slots == 1:
            yield (remaining,)
            return
        for k in range(remaining + 1):
            for rest in rec(remaining - k, slots - 1):
                yield (k,) + rest

    for parts in rec(resolution, count):
        yield tuple(Fraction(k, resolution) for k in parts)


def moe_front(
    experts: Sequence[Prescriptor], domain: DomainConfig
) -> frozenset[OutcomePair]:
    """Pareto front reachable by choosing one expert's behavior per context.

    Candidate actions in each context are exactly the experts' prescriptions
    there (including the empty action when some expert prescribes nothing).
    Additivity over contexts makes the dominated-filtered Minkowski sum of
    the per-context nondominated options exact.
    """
    if not experts:
        raise InputDomainError("need at least one expert")
    total: frozenset[OutcomePair] = frozenset({OutcomePair(0, 0)})
    for context in range(domain.m):
        actions = {frozenset(expert(context)) for expert in experts}
        options = nondominated(
            OutcomePair(utility(context, action, domain), len(action))
            for action in actions
        )
        total = nondominated(
            OutcomePair(u1 + u2, c1 + c2) for (u1, c1) in total for (u2, c2) in options
        )
    return total


def ensemble_prescriptor(
    experts: Sequence[Prescriptor], weight_vector: WeightVector
) -> Prescriptor:
    """Global threshold vote: prescribe every intervention whose summed
    expert weight reaches the threshold in the given context."""
    if len(experts) != len(weight_vector.weights):
        raise InputDomainError(
            f"{len(weight_vector.weights)} weights for {len(experts)} experts"
        )

    def prescribe(context: int) -> Action:
        votes: dict[int, Fraction] = {}
        for weight, expert in zip(weight_vector.weights, experts):
            for a in expert(context):
                votes[a] = votes.get(a, Fraction(0)) + weight
        return frozenset(a for a, v in votes.items() if v >= weight_vector.threshold)

    return prescribe


def weighted_ensemble_front(
    experts: Sequence[Prescriptor],
    domain: DomainConfig,
    grid_resolution: int = 20,
    threshold: Fraction | float = Fraction(1, 2),
) -> frozenset[OutcomePair]:
    """Pareto front over all simplex-grid weightings of a global threshold vote.

    One weight vector applies in every context, so the ensemble cannot adapt
    its expert blend per context. Weight sums are compared to the threshold
    with exact rational arithmetic.
    """
    if grid_resolution < 1:
        raise InputDomainError(f"grid_resolution must be >= 1, got {grid_resolution}")
    tau = Fraction(threshold)
    points = set()
    for weights in simplex_grid(len(experts), grid_resolution):
        vector = WeightVector(weights, tau)
        points.add(evaluate(ensemble_prescriptor(experts, vector), domain))
    return nondominated(points)


def evolution_alone_config(config: EvolveConfig) -> EvolveConfig:
    """The unseeded configuration: random initialization, no expert reinjection."""
    return replace(config, init_mode="random", reinject_experts=False)


def evolution_alone(config: EvolveConfig, domain: DomainConfig) -> EvolveResult:
    """Run the same evolutionary search without any expert knowledge."""
    return evolve(evolution_alone_config(config), domain)
