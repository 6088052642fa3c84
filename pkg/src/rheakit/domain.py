"""Synthetic policy domain: contexts, interventions, utility, cost, oracle front.

A domain has ``m`` discrete contexts and ``n`` togglable interventions.
A policy action is a subset of the interventions; a prescriptor maps every
context to an action. Utility comes from an exact-match lookup table:
six specific (context, action) pairs score 1..5, one four-intervention
action scores 1 in *every* context, and everything else scores 0. Cost is
the number of prescribed interventions. Both objectives aggregate over
contexts by summation, which keeps them additive and lets the optimal
front be computed exactly context by context.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

from .errors import ConfigError, InputDomainError

Action = frozenset[int]
Prescriptor = Callable[[int], Action]

# The bundled generalist expert spans contexts 0..6 and the utility table
# references interventions 0..9, so smaller domains are rejected.
MIN_CONTEXTS = 7
MIN_INTERVENTIONS = 10


def action_set(*interventions: int) -> Action:
    """Convenience constructor for intervention subsets."""
    return frozenset(interventions)


# Context-specific utility cases, keyed by (context, exact action).
CONTEXT_CASES: dict[tuple[int, Action], int] = {
    (0, action_set(0, 1)): 1,
    (0, action_set(0, 1, 2, 3, 4)): 2,
    (0, action_set(0, 1, 2, 3, 4, 5)): 3,
    (1, action_set(0, 1, 2, 3, 4, 5)): 4,
    (1, action_set(0, 1, 2, 3, 5)): 5,
    (1, action_set(2, 3, 4)): 1,
}

# This exact action scores 1 regardless of context.
UNIVERSAL_ACTION: Action = action_set(6, 7, 8, 9)

# Every value the utility table can produce.
UTILITY_VALUES = frozenset({0, 1, 2, 3, 4, 5})


@dataclass(frozen=True)
class DomainConfig:
    """Domain sizes: ``m`` contexts and ``n`` available interventions."""

    m: int = MIN_CONTEXTS
    n: int = MIN_INTERVENTIONS

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or not isinstance(self.n, int):
            raise ConfigError(f"domain sizes must be integers, got m={self.m!r} n={self.n!r}")
        if self.m < MIN_CONTEXTS:
            raise ConfigError(f"m must be >= {MIN_CONTEXTS}, got {self.m}")
        if self.n < MIN_INTERVENTIONS:
            raise ConfigError(f"n must be >= {MIN_INTERVENTIONS}, got {self.n}")


class OutcomePair(NamedTuple):
    """Summed (utility, cost) of a prescriptor over all contexts."""

    utility: int
    cost: int


def _check_context(context: int, config: DomainConfig) -> None:
    if not 0 <= context < config.m:
        raise InputDomainError(f"context {context} out of range for m={config.m}")


def _check_action(action: Action, config: DomainConfig) -> None:
    for a in action:
        if not 0 <= a < config.n:
            raise InputDomainError(f"intervention {a} out of range for n={config.n}")


def utility(context: int, action: Iterable[int], config: DomainConfig) -> int:
    """Utility of taking ``action`` in ``context``; pure exact-match lookup."""
    act = frozenset(action)
    _check_context(context, config)
    _check_action(act, config)
    if act == UNIVERSAL_ACTION:
        return 1
    return CONTEXT_CASES.get((context, act), 0)


def action_cost(action: Iterable[int]) -> int:
    """Cost of an action: the number of prescribed interventions."""
    return len(frozenset(action))


def evaluate(prescribe: Prescriptor, config: DomainConfig) -> OutcomePair:
    """Summed utility and cost of a prescriptor over all ``m`` contexts."""
    total_utility = 0
    total_cost = 0
    for context in range(config.m):
        action = frozenset(prescribe(context))
        total_utility += utility(context, action, config)
        total_cost += len(action)
    return OutcomePair(total_utility, total_cost)


def dominates_outcome(p: OutcomePair, q: OutcomePair) -> bool:
    """True iff ``p`` beats ``q`` under maximize-utility / minimize-cost."""
    return (p[0] >= q[0] and p[1] <= q[1]) and (p[0] > q[0] or p[1] < q[1])


def nondominated(points: Iterable[OutcomePair]) -> frozenset[OutcomePair]:
    """Mutually nondominated subset of (utility, cost) points."""
    pts = {OutcomePair(*p) for p in points}
    return frozenset(
        p for p in pts if not any(dominates_outcome(q, p) for q in pts)
    )


def _context_candidates(context: int, config: DomainConfig) -> list[Action]:
    actions = [frozenset()]
    actions.extend(a for (c, a) in CONTEXT_CASES if c == context)
    actions.append(UNIVERSAL_ACTION)
    return actions


def optimal_front(config: DomainConfig) -> frozenset[OutcomePair]:
    """Exact Pareto-optimal set of summed (utility, cost) over all prescriptors.

    Per context, the only actions worth considering are the empty action and
    the named nonzero-utility actions valid in that context: any intervention
    outside a named action strictly increases cost without changing the
    (exact-match) utility, so every other action is dominated by one of
    these candidates. Because both objectives sum over contexts, the global
    front is the dominated-filtered Minkowski sum of the per-context
    nondominated option sets.
    """
    total: frozenset[OutcomePair] = frozenset({OutcomePair(0, 0)})
    for context in range(config.m):
        options = nondominated(
            OutcomePair(utility(context, action, config), len(action))
            for action in _context_candidates(context, config)
        )
        total = nondominated(
            OutcomePair(u1 + u2, c1 + c2)
            for (u1, c1) in total
            for (u2, c2) in options
        )
    return total
