"""Batch experiment runner and I/O surface.

Subcommands:
  run        one evolution run plus baseline fronts and metrics
  scaling    trial sweeps over intervention counts and modes
  compare    Pareto metrics for fronts read from CSV files
  schedules  behavioral measures for stringency schedules from CSV

All tabular output is UTF-8 CSV with a header row; the first line is a
``# config: {...}`` comment carrying the fully resolved configuration.
JSON outputs are pretty-printed with sorted keys. Exit codes: 0 success,
2 configuration/input error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .baselines import evolution_alone_config, moe_front, weighted_ensemble_front
from .domain import DomainConfig, OutcomePair, evaluate, nondominated, optimal_front
from .errors import ConfigError, InputDomainError, InvariantError
from .evolve import EvolveConfig, EvolveResult, evolve
from .metrics import (
    Front,
    KdeModel,
    Point2,
    deficit_points,
    domination_rate,
    hvi,
    hypervolume,
    kde_fit,
    mcr,
    pareto_filter,
    rem,
    run_metric,
)
from .prescriptor import EXPERT_LABELS, gather_experts
from .schedule import all_measures, read_schedules_csv, write_measures_csv

MODES: dict[str, dict[str, object]] = {
    "rhea": {"init_mode": "distilled", "reinject_experts": True},
    "evolution-alone": {"init_mode": "random", "reinject_experts": False},
}

FRONT_CSV_COLUMNS = ("method", "utility", "cost")
SCALING_CSV_COLUMNS = ("mode", "n", "trial", "recovered_fraction", "seconds")

_CONFIG_KEYS = {
    "m",
    "n",
    "n_sweep",
    "mode",
    "modes",
    "trials",
    "base_seed",
    "out_dir",
    "jobs",
    "metrics_reference",
    "ensemble_grid_resolution",
    "ensemble_threshold",
    "evolve",
}
_EVOLVE_KEYS = {
    "population_size",
    "generations",
    "action_toggle_rate",
    "context_toggle_rate",
    "rule_add_rate",
    "rule_delete_rate",
    "rule_transplant_rate",
    "action_merge_rate",
}


@dataclass
class ExperimentConfig:
    """Resolved experiment settings; JSON keys mirror the field names."""

    m: int = 7
    n: int = 10
    n_sweep: tuple[int, ...] = ()
    mode: str = "rhea"
    modes: tuple[str, ...] = ("rhea", "evolution-alone")
    trials: int = 1
    base_seed: int = 0
    out_dir: str = "results"
    jobs: int | None = None
    metrics_reference: str = "experts"
    ensemble_grid_resolution: int = 20
    ensemble_threshold: float = 0.5
    evolve: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.n_sweep = tuple(int(v) for v in self.n_sweep)
        self.modes = tuple(self.modes)
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        for value in self.n_sweep:
            if value < 10:
                raise ConfigError(f"n_sweep values must each be >= 10, got {value}")
        for mode in (self.mode, *self.modes):
            if mode not in MODES:
                raise ConfigError(f"unknown mode {mode!r}; choose from {sorted(MODES)}")
        unknown = set(self.evolve) - _EVOLVE_KEYS
        if unknown:
            raise ConfigError(
                f"unknown or reserved evolve override(s): {sorted(unknown)}; "
                f"allowed: {sorted(_EVOLVE_KEYS)}"
            )

    @classmethod
    def from_file(cls, path: str | None) -> "ExperimentConfig":
        if path is None:
            return cls()
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        unknown = set(raw) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config key(s) in {path}: {sorted(unknown)}")
        try:
            return cls(**raw)
        except TypeError as exc:
            raise ConfigError(f"config {path}: {exc}") from exc

    def evolve_config_for(self, mode: str, seed: int) -> EvolveConfig:
        base = EvolveConfig(seed=seed, **self.evolve)
        settings = MODES[mode]
        return dataclasses.replace(
            base,
            init_mode=settings["init_mode"],
            reinject_experts=settings["reinject_experts"],
        )

    def resolved(self) -> dict:
        data = dataclasses.asdict(self)
        data["n_sweep"] = list(self.n_sweep)
        data["modes"] = list(self.modes)
        data["evolve"] = dict(
            sorted({**dataclasses.asdict(EvolveConfig()), **self.evolve}.items())
        )
        for reserved in ("seed", "init_mode", "reinject_experts"):
            data["evolve"].pop(reserved, None)
        # Worker count is runtime parallelism; it never influences results,
        # so it stays out of the provenance embedded in outputs.
        data.pop("jobs", None)
        return dict(sorted(data.items()))


@dataclass(frozen=True)
class TrialResult:
    mode: str
    n: int
    trial: int
    recovered_fraction: float
    seconds: float
    front_points: tuple[OutcomePair, ...]


def _trial_worker(task: tuple) -> TrialResult:
    mode, m, n, trial, seed, overrides = task
    config = ExperimentConfig(m=m, n=n, evolve=dict(overrides))
    econf = config.evolve_config_for(mode, seed=seed)
    domain = DomainConfig(m, n)
    started = time.perf_counter()
    result = evolve(econf, domain)
    seconds = time.perf_counter() - started
    oracle = optimal_front(domain)
    recovered = len(result.front_points & oracle) / len(oracle)
    return TrialResult(
        mode, n, trial, recovered, seconds, tuple(sorted(result.front_points))
    )


def run_trials(
    config: ExperimentConfig,
    modes: Sequence[str],
    n_values: Sequence[int],
    jobs: int,
) -> list[TrialResult]:
    """All (mode, n, trial) runs, trial seed = base_seed + trial index."""
    tasks = [
        (mode, config.m, n, trial, config.base_seed + trial, config.evolve)
        for mode in modes
        for n in n_values
        for trial in range(config.trials)
    ]
    if jobs <= 1 or len(tasks) <= 1:
        return [_trial_worker(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_trial_worker, tasks, chunksize=1))


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------


def _config_comment(resolved: dict) -> str:
    return "# config: " + json.dumps(resolved, sort_keys=True, separators=(",", ":"))


def _fmt(value: float | int) -> str:
    if isinstance(value, bool):
        raise InvariantError("booleans do not belong in CSV cells")
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def write_front_csv(
    path: Path, fronts: Mapping[str, Iterable[OutcomePair]], resolved: dict
) -> None:
    lines = [_config_comment(resolved), ",".join(FRONT_CSV_COLUMNS)]
    for method in sorted(fronts):
        for utility, cost in sorted(fronts[method], key=lambda p: (p[1], p[0])):
            lines.append(f"{method},{_fmt(utility)},{_fmt(cost)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_front_csv(path: str) -> dict[str, set[OutcomePair]]:
    fronts: dict[str, set[OutcomePair]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        try:
            header = next(reader)
        except StopIteration:
            raise InputDomainError(f"{path}: empty front file") from None
        if tuple(header) != FRONT_CSV_COLUMNS:
            raise InputDomainError(
                f"{path}: expected header {','.join(FRONT_CSV_COLUMNS)}, got {','.join(header)}"
            )
        for row in reader:
            if not row:
                continue
            if len(row) != 3:
                raise InputDomainError(f"{path}: malformed row {row!r}")
            method, utility, cost = row
            try:
                point = OutcomePair(float(utility), float(cost))
            except ValueError as exc:
                raise InputDomainError(f"{path}: non-numeric row {row!r}") from exc
            fronts.setdefault(method, set()).add(point)
    return fronts


def write_scaling_csv(path: Path, results: Sequence[TrialResult], resolved: dict) -> None:
    lines = [_config_comment(resolved), ",".join(SCALING_CSV_COLUMNS)]
    for r in sorted(results, key=lambda r: (r.mode, r.n, r.trial)):
        lines.append(
            f"{r.mode},{r.n},{r.trial},{_fmt(r.recovered_fraction)},{r.seconds:.3f}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_kde_samples_csv(path: str) -> list[float]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        try:
            header = next(reader)
        except StopIteration:
            raise InputDomainError(f"{path}: empty samples file") from None
        if header != ["cost"]:
            raise InputDomainError(f"{path}: expected header 'cost', got {','.join(header)}")
        try:
            return [float(row[0]) for row in reader if row]
        except (ValueError, IndexError) as exc:
            raise InputDomainError(f"{path}: malformed sample row: {exc}") from exc


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Metrics report
# ---------------------------------------------------------------------------


def build_metrics_report(
    fronts_raw: Mapping[str, Iterable[OutcomePair]],
    reference: str,
    domain: DomainConfig,
    kde_model: KdeModel | None = None,
    warn=None,
) -> dict:
    """Per-method hv/hvi/dr/mcr/run/rem against a named reference method.

    Raw maximize-utility points are converted to minimized (cost, deficit)
    pairs using the oracle's maximum utility; the reference point sits at
    (m*n, maximum utility). The reference method's own hvi/dr/mcr are
    emitted as null since self-comparison is undefined.
    """
    if reference not in fronts_raw:
        raise ConfigError(
            f"reference method {reference!r} not among {sorted(fronts_raw)}"
        )
    oracle = optimal_front(domain)
    max_utility = max(u for u, _ in oracle)
    c_min, c_max = 0.0, float(domain.m * domain.n)
    fronts = {
        name: pareto_filter(deficit_points(points, max_utility))
        for name, points in fronts_raw.items()
    }
    reference_front = fronts[reference]
    reference_point = Point2(c_max, float(max_utility))
    runs = run_metric(fronts, c_min, c_max)
    rems = rem(fronts, kde_model, c_min, c_max)
    methods: dict[str, dict] = {}
    for name, front in fronts.items():
        entry: dict[str, float | None] = {
            "hv": hypervolume(front, reference_point),
            "run": runs[name],
            "rem": rems[name],
        }
        if name == reference:
            entry["hvi"] = None
            entry["dr"] = None
            entry["mcr"] = None
            if warn is not None:
                warn(
                    f"method {name!r} is the reference; hvi/dr/mcr are undefined "
                    "for self-comparison and emitted as null"
                )
        else:
            entry["hvi"] = hvi(front, reference_front, reference_point)
            entry["dr"] = domination_rate(front, reference_front)
            entry["mcr"] = mcr(front, reference_front)
        methods[name] = entry
    return {
        "c_min": c_min,
        "c_max": c_max,
        "max_utility": max_utility,
        "reference": reference,
        "kde": None if kde_model is None else {
            "bandwidth": kde_model.bandwidth,
            "sample_count": len(kde_model.samples),
        },
        "methods": methods,
    }


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _prepare_out(config: ExperimentConfig, args: argparse.Namespace) -> Path:
    out = Path(args.out if args.out is not None else config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _apply_overrides(config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    if args.seed is not None:
        config.base_seed = args.seed
    if args.jobs is not None:
        config.jobs = args.jobs
    return config


def _jobs(config: ExperimentConfig) -> int:
    if config.jobs is not None:
        if config.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {config.jobs}")
        return config.jobs
    return os.cpu_count() or 1


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def baseline_fronts(config: ExperimentConfig, domain: DomainConfig) -> dict[str, frozenset[OutcomePair]]:
    """Fronts of the non-evolutionary combination methods plus the raw experts."""
    experts = gather_experts(domain)
    return {
        "experts": nondominated(evaluate(expert, domain) for expert in experts),
        "moe": moe_front(experts, domain),
        "ensemble": weighted_ensemble_front(
            experts,
            domain,
            grid_resolution=config.ensemble_grid_resolution,
            threshold=config.ensemble_threshold,
        ),
    }


def cmd_run(args: argparse.Namespace) -> int:
    config = _apply_overrides(ExperimentConfig.from_file(args.config), args)
    out = _prepare_out(config, args)
    resolved = config.resolved()
    domain = DomainConfig(config.m, config.n)

    econf = config.evolve_config_for(config.mode, seed=config.base_seed)
    result: EvolveResult = evolve(econf, domain)

    fronts: dict[str, Iterable[OutcomePair]] = {config.mode: result.front_points}
    fronts.update(baseline_fronts(config, domain))
    write_front_csv(out / "front.csv", fronts, resolved)
    write_front_csv(out / "optimal.csv", {"optimal": optimal_front(domain)}, resolved)
    (out / "lineage.jsonl").write_text(result.log.to_json_lines(), encoding="utf-8")

    report = build_metrics_report(fronts, config.metrics_reference, domain, warn=_warn)
    report["config"] = resolved
    _write_json(out / "metrics.json", report)
    _write_json(out / "config.json", resolved)
    return 0


def cmd_scaling(args: argparse.Namespace) -> int:
    config = _apply_overrides(ExperimentConfig.from_file(args.config), args)
    if not config.n_sweep:
        raise ConfigError("scaling requires a non-empty n_sweep list in the config")
    out = _prepare_out(config, args)
    resolved = config.resolved()
    results = run_trials(config, config.modes, config.n_sweep, _jobs(config))
    write_scaling_csv(out / "scaling.csv", results, resolved)
    _write_json(out / "config.json", resolved)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    config = _apply_overrides(ExperimentConfig.from_file(args.config), args)
    out = _prepare_out(config, args)
    fronts: dict[str, set[OutcomePair]] = {}
    for path in args.fronts:
        for method, points in read_front_csv(path).items():
            fronts.setdefault(method, set()).update(points)
    if not fronts:
        raise InputDomainError("no front rows found in the given files")
    kde_model = None
    if args.kde_samples is not None:
        kde_model = kde_fit(read_kde_samples_csv(args.kde_samples))
    domain = DomainConfig(config.m, config.n)
    report = build_metrics_report(fronts, args.reference, domain, kde_model, warn=_warn)
    report["config"] = config.resolved()
    _write_json(out / "metrics.json", report)
    return 0


def cmd_schedules(args: argparse.Namespace) -> int:
    config = _apply_overrides(ExperimentConfig.from_file(args.config), args)
    out = _prepare_out(config, args)
    rows = [
        (sid, all_measures(schedule)) for sid, schedule in read_schedules_csv(args.schedules)
    ]
    write_measures_csv(
        str(out / "measures.csv"), rows, header_comment=_config_comment(config.resolved())
    )
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="JSON experiment config")
    parser.add_argument("--out", metavar="DIR", help="output directory (overrides config)")
    parser.add_argument("--seed", type=int, metavar="INT", help="base seed (overrides config)")
    parser.add_argument("--jobs", type=int, metavar="INT", help="parallel trial workers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rheakit",
        description="Expert-seeded multi-objective policy evolution experiments",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p_run = commands.add_parser("run", help="one evolution run plus baselines and metrics")
    _add_common_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_scaling = commands.add_parser("scaling", help="trial sweep over n values and modes")
    _add_common_flags(p_scaling)
    p_scaling.set_defaults(func=cmd_scaling)

    p_compare = commands.add_parser("compare", help="metrics for fronts read from CSVs")
    p_compare.add_argument("fronts", nargs="+", metavar="FRONTS.csv")
    p_compare.add_argument("--reference", required=True, metavar="LABEL")
    p_compare.add_argument("--kde-samples", metavar="PATH", help="cost-preference samples CSV")
    _add_common_flags(p_compare)
    p_compare.set_defaults(func=cmd_compare)

    p_schedules = commands.add_parser("schedules", help="behavioral measures for schedules CSV")
    p_schedules.add_argument("schedules", metavar="SCHEDULES.csv")
    _add_common_flags(p_schedules)
    p_schedules.set_defaults(func=cmd_schedules)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InputDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
