"""Seeded multi-objective evolution of rule-set prescriptors with full genealogy.

The search keeps a fixed-size population of rule-set genomes. Offspring
come from binary tournaments followed by whole-rule uniform crossover,
bitwise mutation, and two recombination helpers (cross-parent rule
transplant and intra-genome action merge) that let whole expert rules and
their action contents combine without waiting for random bit walks.
Selection merges offspring with the previous population, keeps at most one
individual per objective pair (newest first, with the bundled experts able
to reclaim their niches when re-injected), and truncates by nondominated
rank with crowding-distance tie-breaking. Every individual ever created is
recorded in a lineage log, from which ancestry and front-contribution
statistics are computed after the fact.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .domain import Action, DomainConfig, OutcomePair, evaluate
from .errors import ConfigError, InputDomainError, InvariantError
from .prescriptor import (
    EXPERT_LABELS,
    Rule,
    RuleSetPrescriptor,
    behavior_signature,
    gather_experts,
)

INIT_MODES = ("distilled", "random")


@dataclass(frozen=True)
class EvolveConfig:
    """Knobs for one evolution run; defaults are calibrated for reliable
    full-front recovery across intervention counts from 10 to 50.

    ``action_toggle_rate=None`` selects the adaptive per-bit rate 0.8/n, so
    an expected ~0.8 action bits flip per rule regardless of how many
    interventions exist. Rule add/transplant inflow is kept below the delete
    outflow so genome length stays small instead of drifting upward.
    """

    population_size: int = 100
    generations: int = 1500
    init_mode: str = "distilled"
    reinject_experts: bool = True
    action_toggle_rate: float | None = None
    context_toggle_rate: float = 0.03
    rule_add_rate: float = 0.20
    rule_delete_rate: float = 0.30
    rule_transplant_rate: float = 0.20
    action_merge_rate: float = 0.10
    seed: int = 0

    def __post_init__(self) -> None:
        if self.init_mode not in INIT_MODES:
            raise ConfigError(f"init_mode must be one of {INIT_MODES}, got {self.init_mode!r}")
        if self.population_size < 1:
            raise ConfigError(f"population_size must be >= 1, got {self.population_size}")
        if self.generations < 0:
            raise ConfigError(f"generations must be >= 0, got {self.generations}")
        for name in (
            "action_toggle_rate",
            "context_toggle_rate",
            "rule_add_rate",
            "rule_delete_rate",
            "rule_transplant_rate",
            "action_merge_rate",
        ):
            rate = getattr(self, name)
            if name == "action_toggle_rate" and rate is None:
                continue
            if not 0.0 <= rate <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {rate}")


def effective_action_toggle_rate(config: EvolveConfig, domain: DomainConfig) -> float:
    """Per-bit action toggle rate; the adaptive default scales as 0.8/n."""
    if config.action_toggle_rate is not None:
        return config.action_toggle_rate
    return min(0.5, 0.8 / domain.n)


class LineageRecord(NamedTuple):
    parents: tuple[int, ...]
    outcome: OutcomePair
    generation: int
    origin: str | None


class LineageLog:
    """Append-only id -> record store; parent ids always precede child ids."""

    __slots__ = ("_records",)

    def __init__(self) -> None:
        self._records: dict[int, LineageRecord] = {}

    def add(
        self,
        ind_id: int,
        parents: tuple[int, ...],
        outcome: OutcomePair,
        generation: int,
        origin: str | None,
    ) -> None:
        records = self._records
        if ind_id in records:
            raise InvariantError(f"duplicate lineage id {ind_id}")
        for p in parents:
            if p not in records:
                raise InvariantError(f"parent {p} of {ind_id} not yet recorded")
            if p >= ind_id:
                raise InvariantError(f"parent id {p} does not precede child id {ind_id}")
        records[ind_id] = LineageRecord(parents, outcome, generation, origin)

    def record(self, ind_id: int) -> LineageRecord:
        try:
            return self._records[ind_id]
        except KeyError:
            raise InputDomainError(f"unknown lineage id {ind_id}") from None

    def parents(self, ind_id: int) -> tuple[int, ...]:
        return self.record(ind_id).parents

    def ids(self) -> list[int]:
        return sorted(self._records)

    def initial_ids(self) -> list[int]:
        """All parentless ids: the initial population plus reinjected copies."""
        return [i for i in self.ids() if not self._records[i].parents]

    def __contains__(self, ind_id: object) -> bool:
        return ind_id in self._records

    def __len__(self) -> int:
        return len(self._records)

    def items(self) -> Iterator[tuple[int, LineageRecord]]:
        return iter(sorted(self._records.items()))

    def to_json_lines(self) -> str:
        lines = []
        for ind_id, rec in self.items():
            lines.append(
                json.dumps(
                    {
                        "id": ind_id,
                        "parents": list(rec.parents),
                        "generation": rec.generation,
                        "utility": rec.outcome.utility,
                        "cost": rec.outcome.cost,
                        "origin": rec.origin,
                    },
                    sort_keys=True,
                    separators=(",", ":"),
                )
            )
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass(slots=True)
class Individual:
    """A genome with identity, parentage, and cached evaluation."""

    id: int
    genome: RuleSetPrescriptor
    parents: tuple[int, ...]
    outcome: OutcomePair
    generation: int
    origin: str | None


@dataclass(frozen=True)
class EvolveResult:
    population: tuple[Individual, ...]
    front: tuple[Individual, ...]
    front_points: frozenset[OutcomePair]
    log: LineageLog
    front_history: tuple[frozenset[OutcomePair], ...]


# ---------------------------------------------------------------------------
# Selection machinery
# ---------------------------------------------------------------------------


def non_dominated_sort(points: Sequence[OutcomePair]) -> np.ndarray:
    """Rank each point: 0 for the nondominated set, k for the set that becomes
    nondominated once ranks < k are removed. Maximize utility, minimize cost."""
    count = len(points)
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    u = np.array([p[0] for p in points], dtype=np.float64)
    c = np.array([p[1] for p in points], dtype=np.float64)
    beats = (
        (u[:, None] >= u[None, :])
        & (c[:, None] <= c[None, :])
        & ((u[:, None] > u[None, :]) | (c[:, None] < c[None, :]))
    )
    ranks = np.full(count, -1, dtype=np.int64)
    remaining = np.ones(count, dtype=bool)
    rank = 0
    while remaining.any():
        dominated = (beats & remaining[:, None]).any(axis=0)
        current = remaining & ~dominated
        if not current.any():
            raise InvariantError("non-dominated sort failed to peel a front")
        ranks[current] = rank
        remaining &= ~current
        rank += 1
    return ranks


def crowding_distances(points: Sequence[OutcomePair], ranks: np.ndarray) -> np.ndarray:
    """Per-point crowding distance within its rank, for diversity-aware truncation."""
    count = len(points)
    dist = np.zeros(count, dtype=np.float64)
    values = np.array([[p[0], p[1]] for p in points], dtype=np.float64)
    for rank in np.unique(ranks):
        members = np.flatnonzero(ranks == rank)
        if len(members) <= 2:
            dist[members] = np.inf
            continue
        for axis in (0, 1):
            vals = values[members, axis]
            order = np.argsort(vals, kind="stable")
            lo, hi = vals[order[0]], vals[order[-1]]
            dist[members[order[0]]] = np.inf
            dist[members[order[-1]]] = np.inf
            if hi == lo:
                continue
            gaps = (vals[order[2:]] - vals[order[:-2]]) / (hi - lo)
            dist[members[order[1:-1]]] += gaps
    return dist


def _select(
    individuals: list[Individual], keep: int
) -> tuple[list[Individual], np.ndarray]:
    """Truncate to ``keep`` by (rank, crowding distance); returns ranks aligned
    with the surviving population."""
    points = [ind.outcome for ind in individuals]
    ranks = non_dominated_sort(points)
    crowd = crowding_distances(points, ranks)
    order = sorted(range(len(individuals)), key=lambda i: (ranks[i], -crowd[i], i))
    chosen = order[:keep]
    return [individuals[i] for i in chosen], ranks[chosen]


def _tournament(
    population: list[Individual], ranks: np.ndarray, rng: np.random.Generator
) -> Individual:
    """Binary tournament: lower rank wins, then lower cost, then first pick."""
    i, j = rng.integers(0, len(population), size=2)
    return _tournament_pick(population, ranks, int(i), int(j))


def _tournament_pick(
    population: list[Individual], ranks: np.ndarray, i: int, j: int
) -> Individual:
    if ranks[j] < ranks[i] or (
        ranks[j] == ranks[i] and population[j].outcome.cost < population[i].outcome.cost
    ):
        return population[j]
    return population[i]


# ---------------------------------------------------------------------------
# Variation operators
# ---------------------------------------------------------------------------


def crossover(
    parent_a: RuleSetPrescriptor,
    parent_b: RuleSetPrescriptor,
    rng: np.random.Generator,
) -> RuleSetPrescriptor:
    """Whole-rule uniform crossover.

    Aligned rule slots pick from either parent with probability 1/2; each
    leftover tail rule of the longer parent is kept with probability 1/2,
    preserving order. Rules are copied intact, so parents' rules act as
    indivisible building blocks.
    """
    rules_a, rules_b = parent_a.rules, parent_b.rules
    shared = min(len(rules_a), len(rules_b))
    child = [
        rules_a[i] if rng.random() < 0.5 else rules_b[i] for i in range(shared)
    ]
    tail = rules_a[shared:] if len(rules_a) > len(rules_b) else rules_b[shared:]
    child.extend(rule for rule in tail if rng.random() < 0.5)
    return RuleSetPrescriptor(tuple(child))


def _random_rule(domain: DomainConfig, rng: np.random.Generator) -> Rule:
    context = int(rng.integers(0, domain.m))
    size = int(rng.integers(0, 4))
    action = rng.choice(domain.n, size=size, replace=False) if size else ()
    return Rule(frozenset({context}), frozenset(int(a) for a in action))


def random_genome(domain: DomainConfig, rng: np.random.Generator) -> RuleSetPrescriptor:
    """Sparse random genome: 0..3 rules, single random context each, every
    intervention included in the action independently with probability 0.2."""
    count = int(rng.integers(0, 4))
    rules = []
    for _ in range(count):
        context = int(rng.integers(0, domain.m))
        mask = rng.random(domain.n) < 0.2
        rules.append(Rule(frozenset({context}), frozenset(int(a) for a in np.flatnonzero(mask))))
    return RuleSetPrescriptor(tuple(rules))


def mutate(
    genome: RuleSetPrescriptor,
    config: EvolveConfig,
    domain: DomainConfig,
    rng: np.random.Generator,
) -> RuleSetPrescriptor:
    """Independent bitwise variation of each rule, plus rule add/delete.

    Every (rule, intervention) membership bit toggles with the action rate;
    every (rule, context) membership toggles with the context rate, except
    that a removal emptying the rule's context set is skipped. Then with the
    add rate one random single-context rule (action size <= 3) is appended,
    and with the delete rate one uniformly chosen rule is dropped.
    """
    action_rate = effective_action_toggle_rate(config, domain)
    rules = []
    for rule in genome.rules:
        action = set(rule.action)
        # Independent per-bit toggles, drawn as a count plus a uniform
        # position subset (the same joint distribution, far fewer draws).
        flips = int(rng.binomial(domain.n, action_rate))
        if flips:
            for a in rng.choice(domain.n, size=flips, replace=False):
                action.symmetric_difference_update((int(a),))
        contexts = set(rule.contexts)
        flips = int(rng.binomial(domain.m, config.context_toggle_rate))
        if flips:
            for ctx in sorted(int(c) for c in rng.choice(domain.m, size=flips, replace=False)):
                if ctx in contexts:
                    if len(contexts) > 1:
                        contexts.remove(ctx)
                else:
                    contexts.add(ctx)
        rules.append(Rule(frozenset(contexts), frozenset(action)))
    if rng.random() < config.rule_add_rate:
        rules.append(_random_rule(domain, rng))
    if rng.random() < config.rule_delete_rate and rules:
        del rules[int(rng.integers(0, len(rules)))]
    return RuleSetPrescriptor(tuple(rules))


def transplant_rule(
    child: RuleSetPrescriptor,
    parent_a: RuleSetPrescriptor,
    parent_b: RuleSetPrescriptor,
    rate: float,
    rng: np.random.Generator,
) -> RuleSetPrescriptor:
    """With the given rate, insert one uniformly chosen parent rule at a
    uniformly chosen position of the child.

    This is the only operator that grows a child beyond the longer parent,
    and it is what lets single-rule specialists combine into multi-rule
    policies in one mating instead of waiting for random rules to mutate
    into useful ones.
    """
    donors = parent_a.rules + parent_b.rules
    if donors and rng.random() < rate:
        rule = donors[int(rng.integers(0, len(donors)))]
        position = int(rng.integers(0, len(child.rules) + 1))
        rules = list(child.rules)
        rules.insert(position, rule)
        return RuleSetPrescriptor(tuple(rules))
    return child


def merge_actions(
    genome: RuleSetPrescriptor, rate: float, rng: np.random.Generator
) -> RuleSetPrescriptor:
    """With the given rate, union one rule's action into another rule.

    Picks two rule indices uniformly; when they differ, the first rule's
    action becomes the union of both actions (contexts unchanged). This
    recombines action contents across rules, which bit toggles alone reach
    only through long low-fitness detours.
    """
    if len(genome.rules) >= 2 and rng.random() < rate:
        i = int(rng.integers(0, len(genome.rules)))
        j = int(rng.integers(0, len(genome.rules)))
        if i != j:
            rules = list(genome.rules)
            rules[i] = Rule(rules[i].contexts, rules[i].action | rules[j].action)
            return RuleSetPrescriptor(tuple(rules))
    return genome


# ---------------------------------------------------------------------------
# The generation loop
# ---------------------------------------------------------------------------


def evolve(config: EvolveConfig, domain: DomainConfig) -> EvolveResult:
    """Run one seeded evolution; deterministic given (config, domain).

    With ``init_mode='distilled'`` the population starts from the bundled
    experts plus random genomes; with ``reinject_experts`` fresh parentless
    copies of the experts rejoin the pool every generation (skipped while an
    individual with the same objective pair is present). Offspring are bred
    by tournament selection, whole-rule crossover, rule transplant, action
    merge, and bitwise mutation. Selection keeps at most one individual per
    objective pair, preferring the newest candidate, so every achievable
    outcome acts as a niche and dominated stepping stones stay available;
    in particular no two survivors ever share a behavior table.
    """
    experts: list[RuleSetPrescriptor] = []
    if config.init_mode == "distilled" or config.reinject_experts:
        experts = list(gather_experts(domain))
    if config.init_mode == "distilled" and config.population_size < len(experts):
        raise ConfigError(
            f"population_size {config.population_size} below expert count {len(experts)}"
        )

    rng = np.random.default_rng(config.seed)
    log = LineageLog()
    counter = itertools.count()

    def spawn(
        genome: RuleSetPrescriptor,
        parents: tuple[int, ...],
        generation: int,
        origin: str | None,
    ) -> Individual:
        ind_id = next(counter)
        outcome = evaluate(genome, domain)
        log.add(ind_id, parents, outcome, generation, origin)
        return Individual(ind_id, genome, parents, outcome, generation, origin)

    population: list[Individual] = []
    seen: set[tuple[Action, ...]] = set()
    if config.init_mode == "distilled":
        for label, expert in zip(EXPERT_LABELS, experts):
            population.append(spawn(expert, (), 0, label))
            seen.add(behavior_signature(expert, domain))
    attempts = 0
    while len(population) < config.population_size:
        attempts += 1
        if attempts > 1000 * config.population_size:
            raise InvariantError("could not fill the initial population with distinct behaviors")
        genome = random_genome(domain, rng)
        ind_signature = behavior_signature(genome, domain)
        if ind_signature in seen:
            continue
        seen.add(ind_signature)
        population.append(spawn(genome, (), 0, None))

    ranks = non_dominated_sort([ind.outcome for ind in population])
    front_history = [_front_points(population, ranks)]

    for generation in range(1, config.generations + 1):
        offspring = []
        entrants = rng.integers(0, len(population), size=(config.population_size, 4))
        for row in entrants:
            parent_a = _tournament_pick(population, ranks, int(row[0]), int(row[1]))
            parent_b = _tournament_pick(population, ranks, int(row[2]), int(row[3]))
            genome = mutate(crossover(parent_a.genome, parent_b.genome, rng), config, domain, rng)
            # Transplant and merge run after mutation so freshly assembled
            # rule combinations reach selection uncorrupted.
            genome = transplant_rule(
                genome, parent_a.genome, parent_b.genome, config.rule_transplant_rate, rng
            )
            genome = merge_actions(genome, config.action_merge_rate, rng)
            offspring.append(spawn(genome, (parent_a.id, parent_b.id), generation, None))

        # Reinject any expert no longer behaviorally present. Reinjected
        # copies go first in the dedup stream so an expert can always
        # reclaim its objective niche from a same-outcome impostor;
        # otherwise its rule content could go extinct for good.
        reinjected: list[Individual] = []
        if config.reinject_experts:
            candidates = offspring + population
            for label, expert in zip(EXPERT_LABELS, experts):
                expert_outcome = evaluate(expert, domain)
                expert_signature = behavior_signature(expert, domain)
                present = any(
                    ind.outcome == expert_outcome
                    and behavior_signature(ind.genome, domain) == expert_signature
                    for ind in candidates
                )
                if not present:
                    reinjected.append(spawn(expert, (), generation, label))

        # One survivor candidate per objective pair; offspring precede the
        # old population so niche representatives keep turning over
        # instead of fossilizing.
        merged: list[Individual] = []
        taken: set[OutcomePair] = set()
        for ind in itertools.chain(reinjected, offspring, population):
            if ind.outcome not in taken:
                taken.add(ind.outcome)
                merged.append(ind)

        population, ranks = _select(merged, config.population_size)
        front_history.append(_front_points(population, ranks))

    front = tuple(ind for ind, rank in zip(population, ranks) if rank == 0)
    return EvolveResult(
        population=tuple(population),
        front=front,
        front_points=frozenset(ind.outcome for ind in front),
        log=log,
        front_history=tuple(front_history),
    )


def _front_points(population: list[Individual], ranks: np.ndarray) -> frozenset[OutcomePair]:
    return frozenset(ind.outcome for ind, rank in zip(population, ranks) if rank == 0)


def evolve_variant(config: EvolveConfig, **overrides) -> EvolveConfig:
    """Copy an ``EvolveConfig`` with some fields replaced."""
    return replace(config, **overrides)


# ---------------------------------------------------------------------------
# Ancestry and front-contribution accounting
# ---------------------------------------------------------------------------


def ancestors(ind_id: int, log: LineageLog) -> set[int]:
    """All transitive parents of an individual; empty for parentless ones."""
    result: set[int] = set()
    stack = list(log.parents(ind_id))
    while stack:
        current = stack.pop()
        if current not in result:
            result.add(current)
            stack.extend(log.parents(current))
    return result


def origin_fractions(
    ind_id: int, log: LineageLog, _cache: dict[int, dict[int, float]] | None = None
) -> dict[int, float]:
    """Fraction of an individual's ancestry attributable to each parentless id.

    A parentless individual is its own sole origin with fraction 1; a child
    averages its parents' fraction maps. Fractions always sum to 1.
    """
    cache: dict[int, dict[int, float]] = {} if _cache is None else _cache

    def compute(current: int) -> dict[int, float]:
        hit = cache.get(current)
        if hit is not None:
            return hit
        parents = log.parents(current)
        if not parents:
            result = {current: 1.0}
        else:
            share = 1.0 / len(parents)
            result = {}
            for p in parents:
                for origin, fraction in compute(p).items():
                    result[origin] = result.get(origin, 0.0) + share * fraction
        cache[current] = result
        return result

    # Resolve iteratively enough for deep logs: walk parents first.
    pending = [ind_id]
    while pending:
        current = pending[-1]
        if current in cache:
            pending.pop()
            continue
        missing = [p for p in log.parents(current) if p not in cache]
        if missing:
            pending.extend(missing)
        else:
            compute(current)
            pending.pop()
    return cache[ind_id]


def a_percent(ancestor_id: int, ind_id: int, log: LineageLog) -> float:
    """Share of ``ind_id``'s ancestry due to ``ancestor_id``.

    Equals 1 when the individual is parentless and is the queried id, 0 when
    parentless and different, and otherwise the mean over parents. Only
    parentless individuals can carry a nonzero share.
    """
    if log.parents(ancestor_id):
        log.record(ind_id)  # still validate the other id
        return 0.0
    return origin_fractions(ind_id, log).get(ancestor_id, 0.0)


def pc_count(ind_id: int, log: LineageLog, front_ids: Iterable[int]) -> int:
    """Number of front members that have ``ind_id`` as an ancestor."""
    log.record(ind_id)
    return sum(1 for f in front_ids if ind_id in ancestors(f, log))


def pc_percent(ind_id: int, log: LineageLog, front_ids: Iterable[int]) -> float:
    """Mean ancestry share of ``ind_id`` over the front members."""
    members = list(front_ids)
    if not members:
        raise InputDomainError("front must be non-empty")
    cache: dict[int, dict[int, float]] = {}
    if log.parents(ind_id):
        for f in members:
            log.record(f)
        return 0.0
    total = sum(origin_fractions(f, log, cache).get(ind_id, 0.0) for f in members)
    return total / len(members)


def origin_contributions(
    log: LineageLog, front_ids: Iterable[int]
) -> dict[str | None, float]:
    """Total front ancestry share grouped by origin label.

    Parentless individuals labelled with the same origin (the bundled
    experts and their reinjected copies) pool their shares; unlabeled random
    initials pool under ``None``. Values sum to 1 over a non-empty front.
    """
    members = list(front_ids)
    if not members:
        raise InputDomainError("front must be non-empty")
    cache: dict[int, dict[int, float]] = {}
    totals: dict[str | None, float] = {}
    for f in members:
        for origin_id, fraction in origin_fractions(f, log, cache).items():
            label = log.record(origin_id).origin
            totals[label] = totals.get(label, 0.0) + fraction / len(members)
    return totals
