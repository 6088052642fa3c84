import numpy as np
import pytest

from rheakit import (
    DEFAULT_IP_MAXIMA,
    InputDomainError,
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
from rheakit.schedule import NUM_DAYS, NUM_IPS, read_schedules_csv, write_measures_csv

from oracles import naive_measures


def make_schedule(grid) -> Schedule:
    return Schedule(np.asarray(grid, dtype=np.int64))


@pytest.fixture(scope="module")
def zero():
    return make_schedule(np.zeros((NUM_DAYS, NUM_IPS)))


@pytest.fixture(scope="module")
def weekly():
    # Repeating 7-day pattern on one IP; non-constant within the week.
    grid = np.zeros((NUM_DAYS, NUM_IPS), dtype=np.int64)
    pattern = [0, 1, 2, 1, 0, 1, 2]
    for t in range(NUM_DAYS):
        grid[t, 2] = pattern[t % 7]
    return make_schedule(grid)


@pytest.fixture(scope="module")
def two_phase():
    # First 45 days at total 10, last 45 at 0, spread over some IPs.
    grid = np.zeros((NUM_DAYS, NUM_IPS), dtype=np.int64)
    grid[:45, 0] = 3
    grid[:45, 1] = 3
    grid[:45, 3] = 4
    return make_schedule(grid)


@pytest.fixture(scope="module")
def alternating():
    grid = np.zeros((NUM_DAYS, NUM_IPS), dtype=np.int64)
    grid[:, 5] = [t % 2 for t in range(NUM_DAYS)]
    return make_schedule(grid)


def random_schedules(count, seed=0):
    rng = np.random.default_rng(seed)
    ceilings = np.array(DEFAULT_IP_MAXIMA.levels)
    for _ in range(count):
        yield make_schedule(rng.integers(0, ceilings + 1, size=(NUM_DAYS, NUM_IPS)))


class TestTypes:
    def test_default_maxima_sum(self):
        assert sum(DEFAULT_IP_MAXIMA.levels) == 34

    def test_bad_maxima_rejected(self):
        with pytest.raises(InputDomainError):
            IpMaxima((3,) * 12)

    def test_wrong_shape_rejected(self):
        with pytest.raises(InputDomainError):
            make_schedule(np.zeros((89, 12)))

    def test_ceiling_violation_rejected(self):
        grid = np.zeros((NUM_DAYS, NUM_IPS))
        grid[0, 2] = 3  # ceiling for IP 2 is 2
        with pytest.raises(InputDomainError):
            make_schedule(grid)

    def test_non_integer_rejected(self):
        grid = np.zeros((NUM_DAYS, NUM_IPS))
        grid[0, 0] = 0.5
        with pytest.raises(InputDomainError):
            Schedule(grid)


class TestDailyCost:
    def test_zero(self, zero):
        assert daily_cost(zero).sum() == 0

    def test_constant_single_ip(self):
        grid = np.zeros((NUM_DAYS, NUM_IPS), dtype=np.int64)
        grid[:, 2] = 2
        assert (daily_cost(make_schedule(grid)) == 2).all()

    def test_matches_resummation(self):
        for schedule in random_schedules(20, seed=3):
            expected = [int(schedule.grid[t].sum()) for t in range(NUM_DAYS)]
            assert daily_cost(schedule).tolist() == expected


class TestMeasureFixtures:
    def test_zero_schedule(self, zero):
        assert swing(zero) == 0
        assert separability(zero) == 0.0
        assert focus(zero) == 12
        assert agility(zero) == 0
        assert periodicity(zero) == 0.0

    def test_swing_single_spike(self):
        grid = np.zeros((NUM_DAYS, NUM_IPS), dtype=np.int64)
        grid[13, 3] = 4
        grid[13, 0] = 1
        assert swing(make_schedule(grid)) == 5

    def test_constant_nonzero_separability(self):
        grid = np.full((NUM_DAYS, NUM_IPS), 1, dtype=np.int64)
        assert separability(make_schedule(grid)) == 0.0

    def test_two_phase_separability(self, two_phase):
        assert separability(two_phase) == pytest.approx(2.0)

    def test_focus_counts(self, weekly, two_phase):
        assert focus(weekly) == 11
        assert focus(two_phase) == 9

    def test_full_usage_focus_zero(self):
        grid = np.ones((NUM_DAYS, NUM_IPS), dtype=np.int64)
        assert focus(make_schedule(grid)) == 0

    def test_alternating_agility(self, alternating):
        assert agility(alternating) == 89

    def test_weekly_periodicity_one(self, weekly):
        assert periodicity(weekly) == pytest.approx(1.0)

    def test_alternating_periodicity_zero(self, alternating):
        assert periodicity(alternating) == 0.0

    def test_mean_reduce(self, two_phase):
        means = mean_reduce(two_phase)
        assert means[0] == pytest.approx(1.5)
        assert means[11] == 0.0


class TestOracleEquality:
    def test_thousand_random_schedules(self):
        for schedule in random_schedules(1000, seed=42):
            expected = naive_measures(schedule.grid)
            got = all_measures(schedule)
            assert got["swing"] == expected["swing"]
            assert got["separability"] == pytest.approx(expected["separability"], abs=1e-12)
            assert got["focus"] == expected["focus"]
            assert got["agility"] == expected["agility"]
            assert got["periodicity"] == pytest.approx(expected["periodicity"], abs=1e-12)


class TestOrderSensitivity:
    def test_focus_and_swing_invariant_under_day_shuffle(self):
        rng = np.random.default_rng(9)
        for schedule in random_schedules(10, seed=5):
            permuted = make_schedule(schedule.grid[rng.permutation(NUM_DAYS)])
            assert focus(permuted) == focus(schedule)
            assert swing(permuted) == swing(schedule)

    def test_agility_changed_by_reordering(self):
        # Sorting each IP's levels minimizes day-over-day changes, so for a
        # busy random schedule the sorted variant has strictly lower agility.
        schedule = next(random_schedules(1, seed=8))
        sorted_grid = np.sort(schedule.grid, axis=0)
        assert agility(make_schedule(sorted_grid)) < agility(schedule)


class TestCsv:
    def test_round_trip(self, tmp_path, two_phase, weekly):
        path = tmp_path / "schedules.csv"
        lines = ["id," + ",".join(f"ip{k+1}" for k in range(NUM_IPS))]
        for sid, schedule in (("a", two_phase), ("b", weekly)):
            for t in range(NUM_DAYS):
                lines.append(sid + "," + ",".join(str(int(v)) for v in schedule.grid[t]))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        loaded = read_schedules_csv(str(path))
        assert [sid for sid, _ in loaded] == ["a", "b"]
        assert (loaded[0][1].grid == two_phase.grid).all()

    def test_malformed_block_names_id(self, tmp_path):
        path = tmp_path / "bad.csv"
        header = "id," + ",".join(f"ip{k+1}" for k in range(NUM_IPS))
        row = "broken," + ",".join("0" for _ in range(NUM_IPS))
        path.write_text(header + "\n" + row + "\n", encoding="utf-8")
        with pytest.raises(InputDomainError, match="broken"):
            read_schedules_csv(str(path))

    def test_measures_written(self, tmp_path, zero):
        out = tmp_path / "measures.csv"
        write_measures_csv(str(out), [("z", all_measures(zero))])
        text = out.read_text(encoding="utf-8").splitlines()
        assert text[0] == "id,swing,separability,focus,agility,periodicity"
        assert text[1] == "z,0,0.0,12,0,0.0"
