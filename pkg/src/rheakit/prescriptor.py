"""Prescriptor representations, the bundled experts, and exact distillation.

Two evolvable/queryable representations are provided: ordered rule sets
(first matching rule fires) and tiny weight-one ReLU networks. Any
prescriptor can be flattened into a binary behavior table by querying it
over all contexts; the table is the single interchange format from which
both representations are reconstructed exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .domain import Action, DomainConfig, Prescriptor, evaluate
from .errors import InputDomainError

# Identity labels for the three bundled experts, in gather order. The two
# specialists each cover a single context; the generalist covers all seven.
EXPERT_LABELS: tuple[str, ...] = ("specialist-1", "specialist-2", "generalist")


@dataclass(frozen=True)
class Rule:
    """Maps a non-empty set of contexts to one action (possibly empty)."""

    contexts: frozenset[int]
    action: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "contexts", frozenset(self.contexts))
        object.__setattr__(self, "action", frozenset(self.action))
        if not self.contexts:
            raise InputDomainError("a rule must cover at least one context")


@dataclass(frozen=True)
class RuleSetPrescriptor:
    """Ordered list of rules; the first rule covering a context decides.

    Contexts covered by no rule get the empty action. Rules may overlap in
    general (mutation can produce that); rule order then matters.
    """

    rules: tuple[Rule, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))

    def apply(self, context: int) -> Action:
        for rule in self.rules:
            if context in rule.contexts:
                return rule.action
        return frozenset()

    def __call__(self, context: int) -> Action:
        return self.apply(context)

    def to_json(self) -> str:
        payload = [
            {"contexts": sorted(rule.contexts), "action": sorted(rule.action)}
            for rule in self.rules
        ]
        return json.dumps(payload, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "RuleSetPrescriptor":
        try:
            payload = json.loads(text)
            rules = tuple(
                Rule(frozenset(item["contexts"]), frozenset(item["action"]))
                for item in payload
            )
        except (TypeError, KeyError, json.JSONDecodeError) as exc:
            raise InputDomainError(f"malformed rule-set JSON: {exc}") from exc
        return cls(rules)


@dataclass(frozen=True)
class NeuralPrescriptor:
    """Weight-one ReLU network over one-hot context inputs, no biases.

    ``in_edges`` connect (context, hidden) pairs, ``out_edges`` connect
    (hidden, intervention) pairs. An intervention is prescribed when its
    output activation is positive.
    """

    hidden_count: int
    in_edges: frozenset[tuple[int, int]]
    out_edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "in_edges", frozenset(tuple(e) for e in self.in_edges))
        object.__setattr__(self, "out_edges", frozenset(tuple(e) for e in self.out_edges))
        for _, hidden in self.in_edges:
            if not 0 <= hidden < self.hidden_count:
                raise InputDomainError(f"in-edge hidden index {hidden} out of range")
        for hidden, _ in self.out_edges:
            if not 0 <= hidden < self.hidden_count:
                raise InputDomainError(f"out-edge hidden index {hidden} out of range")

    def apply(self, context: int) -> Action:
        # One-hot input: hidden activation is the count of in-edges from the
        # active context (ReLU is a no-op on non-negative sums).
        hidden = [0] * self.hidden_count
        for ctx, h in self.in_edges:
            if ctx == context:
                hidden[h] += 1
        outputs: dict[int, int] = {}
        for h, intervention in self.out_edges:
            outputs[intervention] = outputs.get(intervention, 0) + hidden[h]
        return frozenset(a for a, activation in outputs.items() if activation > 0)

    def __call__(self, context: int) -> Action:
        return self.apply(context)


class BehaviorTable:
    """Binary m-by-n grid: cell (c, a) is 1 iff intervention a is prescribed in context c."""

    __slots__ = ("grid",)

    def __init__(self, grid: np.ndarray | Iterable[Iterable[int]]):
        arr = np.asarray(grid)
        if arr.ndim != 2:
            raise InputDomainError(f"behavior table must be 2-D, got shape {arr.shape}")
        if not np.isin(arr, (0, 1)).all():
            raise InputDomainError("behavior table entries must be 0 or 1")
        arr = arr.astype(np.uint8)
        arr.flags.writeable = False
        self.grid = arr

    @property
    def m(self) -> int:
        return self.grid.shape[0]

    @property
    def n(self) -> int:
        return self.grid.shape[1]

    def row_action(self, context: int) -> Action:
        return frozenset(int(a) for a in np.flatnonzero(self.grid[context]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BehaviorTable):
            return NotImplemented
        return self.grid.shape == other.grid.shape and bool(
            (self.grid == other.grid).all()
        )

    def __hash__(self) -> int:
        return hash((self.grid.shape, self.grid.tobytes()))

    def __repr__(self) -> str:
        return f"BehaviorTable(m={self.m}, n={self.n}, ones={int(self.grid.sum())})"


def behavior_signature(prescribe: Prescriptor, config: DomainConfig) -> tuple[Action, ...]:
    """Per-context actions as a hashable tuple; equal iff behavior tables are equal."""
    return tuple(frozenset(prescribe(context)) for context in range(config.m))


def behavior_table(prescribe: Prescriptor, config: DomainConfig) -> BehaviorTable:
    """Query a prescriptor over all contexts and record its behavior grid."""
    grid = np.zeros((config.m, config.n), dtype=np.uint8)
    for context in range(config.m):
        for a in prescribe(context):
            if not 0 <= a < config.n:
                raise InputDomainError(f"prescribed intervention {a} out of range for n={config.n}")
            grid[context, a] = 1
    return BehaviorTable(grid)


def _action_groups(table: BehaviorTable) -> list[tuple[list[int], Action]]:
    """Contexts grouped by identical non-empty row action, ordered by first context."""
    groups: dict[Action, list[int]] = {}
    for context in range(table.m):
        action = table.row_action(context)
        if action:
            groups.setdefault(action, []).append(context)
    return sorted(((ctxs, action) for action, ctxs in groups.items()), key=lambda g: g[0][0])


def distill_to_rules(table: BehaviorTable) -> RuleSetPrescriptor:
    """Exact rule-set reconstruction: one rule per distinct non-empty row action.

    The resulting rules have pairwise-disjoint context sets, so their order
    is immaterial for behavior; they are sorted by smallest covered context
    for deterministic serialization.
    """
    rules = tuple(
        Rule(frozenset(contexts), action) for contexts, action in _action_groups(table)
    )
    return RuleSetPrescriptor(rules)


def distill_to_nn(table: BehaviorTable) -> NeuralPrescriptor:
    """Exact network reconstruction: one hidden node per distinct non-empty row action."""
    in_edges: set[tuple[int, int]] = set()
    out_edges: set[tuple[int, int]] = set()
    groups = _action_groups(table)
    for h, (contexts, action) in enumerate(groups):
        in_edges.update((context, h) for context in contexts)
        out_edges.update((h, a) for a in action)
    return NeuralPrescriptor(len(groups), frozenset(in_edges), frozenset(out_edges))


def gather_experts(config: DomainConfig) -> tuple[RuleSetPrescriptor, ...]:
    """The three bundled expert prescriptors, already in rule-set form.

    Two specialists cover one context each with a high-value action; the
    generalist applies the universal four-intervention action everywhere.
    Requires the default minimum domain sizes (enforced by ``DomainConfig``).
    """
    specialist_1 = RuleSetPrescriptor((Rule(frozenset({0}), frozenset({0, 1})),))
    specialist_2 = RuleSetPrescriptor((Rule(frozenset({1}), frozenset({2, 3, 4})),))
    generalist = RuleSetPrescriptor(
        (Rule(frozenset(range(7)), frozenset({6, 7, 8, 9})),)
    )
    return (specialist_1, specialist_2, generalist)


def expert_outcomes(config: DomainConfig) -> dict[str, tuple[int, int]]:
    """Evaluated (utility, cost) of each bundled expert, keyed by label."""
    return {
        label: evaluate(expert, config)
        for label, expert in zip(EXPERT_LABELS, gather_experts(config))
    }
