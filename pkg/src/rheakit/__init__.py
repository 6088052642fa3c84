"""Expert-seeded multi-objective policy evolution on a synthetic intervention domain.

Pipeline surface: define the domain (``domain``), gather and distill expert
policies (``prescriptor``), evolve rule-set genomes with full genealogy
(``evolve``), compare against non-evolutionary baselines (``baselines``),
score fronts (``metrics``), and analyze stringency schedules (``schedule``).
The ``cli`` module wraps everything as a batch experiment runner.
"""

from .baselines import (
    WeightVector,
    evolution_alone,
    moe_front,
    simplex_grid,
    weighted_ensemble_front,
)
from .domain import (
    Action,
    DomainConfig,
    OutcomePair,
    action_cost,
    evaluate,
    nondominated,
    optimal_front,
    utility,
)
from .errors import ConfigError, InputDomainError, InvariantError, RheakitError
from .evolve import (
    EvolveConfig,
    EvolveResult,
    Individual,
    LineageLog,
    a_percent,
    ancestors,
    crossover,
    effective_action_toggle_rate,
    evolve,
    merge_actions,
    mutate,
    non_dominated_sort,
    origin_contributions,
    pc_count,
    pc_percent,
    random_genome,
    transplant_rule,
)
from .metrics import (
    Front,
    KdeModel,
    Point2,
    deficit_points,
    dominates,
    domination_rate,
    hvi,
    hypervolume,
    kde_eval,
    kde_fit,
    kde_interval_mass,
    mcr,
    pareto_filter,
    rem,
    run_metric,
)
from .prescriptor import (
    EXPERT_LABELS,
    BehaviorTable,
    NeuralPrescriptor,
    Rule,
    RuleSetPrescriptor,
    behavior_table,
    distill_to_nn,
    distill_to_rules,
    gather_experts,
)
from .schedule import (
    DEFAULT_IP_MAXIMA,
    IpMaxima,
    Schedule,
    agility,
    all_measures,
    daily_cost,
    focus,
    mean_reduce,
    periodicity,
    separability,
    swing,
)

__version__ = "0.1.0"
