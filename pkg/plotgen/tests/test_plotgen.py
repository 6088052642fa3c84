import numpy as np
import pandas as pd
import pytest

from plotgen import ColumnError, plot_pareto, plot_scaling, plot_violins
from plotgen.cli import main


class TestPareto:
    def test_renders_with_four_methods(self, cli_outputs, tmp_path):
        out = tmp_path / "pareto.png"
        info = plot_pareto(cli_outputs["front_csv"], out, cli_outputs["optimal_csv"])
        assert out.exists()
        assert info.methods == ["ensemble", "experts", "moe", "rhea"]
        assert len(set(info.markers.values())) == 4

    def test_axes_cover_all_points(self, cli_outputs, tmp_path):
        info = plot_pareto(cli_outputs["front_csv"], tmp_path / "p.png")
        assert info.xlim[0] <= info.data_extrema["cost_min"]
        assert info.xlim[1] >= info.data_extrema["cost_max"]
        assert info.ylim[0] <= info.data_extrema["utility_min"]
        assert info.ylim[1] >= info.data_extrema["utility_max"]

    def test_single_method(self, tmp_path):
        csv = tmp_path / "one.csv"
        csv.write_text("method,utility,cost\nsolo,1,2\nsolo,5,5\n", encoding="utf-8")
        info = plot_pareto(csv, tmp_path / "one.png")
        assert info.methods == ["solo"]

    def test_missing_column_named(self, tmp_path):
        csv = tmp_path / "bad.csv"
        csv.write_text("method,utility\nx,1\n", encoding="utf-8")
        with pytest.raises(ColumnError, match="cost"):
            plot_pareto(csv, tmp_path / "bad.png")


class TestScaling:
    def test_panels_per_mode(self, cli_outputs, tmp_path):
        out = tmp_path / "scaling.png"
        info = plot_scaling(cli_outputs["scaling_csv"], out)
        assert out.exists()
        assert info.panels == 2
        assert info.methods == ["evolution-alone", "rhea"]

    def test_medians_match_data(self, cli_outputs, tmp_path):
        info = plot_scaling(cli_outputs["scaling_csv"], tmp_path / "s.png")
        frame = pd.read_csv(cli_outputs["scaling_csv"], comment="#")
        for mode, by_n in info.medians.items():
            for n, median in by_n.items():
                expected = frame[(frame["mode"] == mode) & (frame["n"] == n)][
                    "recovered_fraction"
                ].median()
                assert median == pytest.approx(float(expected))

    def test_single_box(self, tmp_path):
        csv = tmp_path / "s.csv"
        rows = ["mode,n,trial,recovered_fraction,seconds"]
        rows += [f"rhea,10,{t},{v},0.1" for t, v in enumerate((0.2, 0.4, 1.0, 1.0))]
        csv.write_text("\n".join(rows) + "\n", encoding="utf-8")
        info = plot_scaling(csv, tmp_path / "s.png")
        assert info.panels == 1
        assert info.medians["rhea"][10] == pytest.approx(0.7)


class TestViolins:
    def test_five_violins_per_group(self, grouped_measures_csv, tmp_path):
        out = tmp_path / "violins.png"
        info = plot_violins(grouped_measures_csv, out)
        assert out.exists()
        assert info.panels == 5
        assert info.methods == ["alpha", "beta"]

    def test_medians_match_recomputation(self, grouped_measures_csv, tmp_path):
        info = plot_violins(grouped_measures_csv, tmp_path / "v.png")
        frame = pd.read_csv(grouped_measures_csv)
        for measure, by_group in info.medians.items():
            for group, median in by_group.items():
                expected = frame[frame["id"] == group][measure].median()
                assert median == pytest.approx(float(expected))

    def test_constant_column_renders(self, grouped_measures_csv, tmp_path):
        # periodicity is constant in the fixture: zero-variance violin.
        info = plot_violins(grouped_measures_csv, tmp_path / "flat.png")
        assert all(v == pytest.approx(0.25) for v in info.medians["periodicity"].values())

    def test_per_schedule_groups_from_cli_output(self, cli_outputs, tmp_path):
        info = plot_violins(cli_outputs["measures_csv"], tmp_path / "m.png")
        assert info.methods == ["busy", "weekly", "zero"]

    def test_missing_group_column_named(self, grouped_measures_csv, tmp_path):
        with pytest.raises(ColumnError, match="nope"):
            plot_violins(grouped_measures_csv, tmp_path / "x.png", group_column="nope")


class TestDeterminismAndCli:
    @pytest.mark.parametrize("suffix", ["png", "svg"])
    def test_byte_identical_renders(self, grouped_measures_csv, tmp_path, suffix):
        a, b = tmp_path / f"a.{suffix}", tmp_path / f"b.{suffix}"
        plot_violins(grouped_measures_csv, a)
        plot_violins(grouped_measures_csv, b)
        assert a.read_bytes() == b.read_bytes()

    def test_cli_all_kinds(self, cli_outputs, tmp_path):
        assert main(
            [
                "--kind",
                "pareto",
                "--in",
                f"{cli_outputs['front_csv']},{cli_outputs['optimal_csv']}",
                "--out",
                str(tmp_path / "p.svg"),
            ]
        ) == 0
        assert main(
            ["--kind", "scaling", "--in", str(cli_outputs["scaling_csv"]), "--out", str(tmp_path / "s.png")]
        ) == 0
        assert main(
            ["--kind", "violins", "--in", str(cli_outputs["measures_csv"]), "--out", str(tmp_path / "v.png")]
        ) == 0

    def test_cli_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("method,utility\nx,1\n", encoding="utf-8")
        assert main(["--kind", "pareto", "--in", str(bad), "--out", str(tmp_path / "x.png")]) == 2
        assert "cost" in capsys.readouterr().err
