import json
import subprocess
import sys

import numpy as np
import pytest

NUM_DAYS, NUM_IPS = 90, 12


def run_rheakit(*args: str) -> None:
    subprocess.run(
        [sys.executable, "-m", "rheakit.cli", *args],
        check=True,
        capture_output=True,
        text=True,
    )


@pytest.fixture(scope="session")
def cli_outputs(tmp_path_factory):
    """Real CSV outputs produced through the rheakit command-line interface."""
    root = tmp_path_factory.mktemp("rheakit-outputs")

    run_config = root / "run.json"
    run_config.write_text(
        json.dumps(
            {"evolve": {"population_size": 20, "generations": 40}, "base_seed": 5}
        ),
        encoding="utf-8",
    )
    run_dir = root / "run"
    run_rheakit("run", "--config", str(run_config), "--out", str(run_dir))

    scaling_config = root / "scaling.json"
    scaling_config.write_text(
        json.dumps(
            {
                "evolve": {"population_size": 16, "generations": 30},
                "n_sweep": [10, 30],
                "trials": 3,
                "base_seed": 2,
            }
        ),
        encoding="utf-8",
    )
    scaling_dir = root / "scaling"
    run_rheakit(
        "scaling", "--config", str(scaling_config), "--out", str(scaling_dir), "--jobs", "2"
    )

    schedules_csv = root / "schedules.csv"
    lines = ["id," + ",".join(f"ip{k+1}" for k in range(NUM_IPS))]
    rng = np.random.default_rng(0)
    ceilings = np.array([3, 3, 2, 4, 2, 3, 2, 4, 2, 3, 2, 4])
    pattern = [0, 1, 2, 1, 0, 1, 2]
    for sid in ("zero", "weekly", "busy"):
        for t in range(NUM_DAYS):
            if sid == "zero":
                row = [0] * NUM_IPS
            elif sid == "weekly":
                row = [0] * NUM_IPS
                row[2] = pattern[t % 7]
            else:
                row = rng.integers(0, ceilings + 1).tolist()
            lines.append(sid + "," + ",".join(str(int(v)) for v in row))
    schedules_csv.write_text("\n".join(lines) + "\n", encoding="utf-8")
    measures_dir = root / "measures"
    run_rheakit("schedules", str(schedules_csv), "--out", str(measures_dir))

    return {
        "front_csv": run_dir / "front.csv",
        "optimal_csv": run_dir / "optimal.csv",
        "scaling_csv": scaling_dir / "scaling.csv",
        "measures_csv": measures_dir / "measures.csv",
    }


@pytest.fixture(scope="session")
def grouped_measures_csv(tmp_path_factory):
    """Synthetic measures table with several rows per group for violin shapes."""
    root = tmp_path_factory.mktemp("grouped")
    path = root / "measures.csv"
    rng = np.random.default_rng(3)
    lines = ["id,swing,separability,focus,agility,periodicity"]
    for group, scale in (("alpha", 1.0), ("beta", 2.0)):
        for _ in range(30):
            swing = round(float(rng.uniform(0, 10 * scale)), 3)
            separability = round(float(rng.uniform(0, 2)), 3)
            focus = int(rng.integers(0, 13))
            agility = int(rng.integers(0, 90))
            periodicity = 0.25  # constant column: degenerate violin case
            lines.append(f"{group},{swing},{separability},{focus},{agility},{periodicity}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
