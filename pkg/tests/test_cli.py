import json
import math
import os

import numpy as np
import pytest

from qdl.cli import main, parse_grid

SIDECAR_KEYS = {"command", "params", "grids", "formula_path", "version"}


def read_csv(path):
    lines = path.read_text(encoding="utf-8").strip().split("\n")
    header = lines[0].split(",")
    rows = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    return header, rows


def run(tmp_path, *argv):
    cwd = os.getcwd()
    os.chdir(tmp_path)
    try:
        return main(list(argv))
    finally:
        os.chdir(cwd)


class TestParsing:
    def test_scalar(self):
        spec = parse_grid("1.5")
        assert spec.is_scalar and spec.start == 1.5

    def test_range(self):
        spec = parse_grid("0:6:61")
        assert spec.count == 61
        assert spec.values()[0] == 0.0 and spec.values()[-1] == 6.0

    def test_bad_range(self):
        import argparse

        with pytest.raises(argparse.ArgumentTypeError, match="ordered"):
            parse_grid("6:0:10")
        with pytest.raises(argparse.ArgumentTypeError, match="count"):
            parse_grid("0:6:1")


class TestSteady:
    def test_writes_csv_and_sidecar(self, tmp_path):
        assert run(tmp_path, "steady", "--omega", "1") == 0
        header, rows = read_csv(tmp_path / "steady.csv")
        record = dict(zip(header, rows[0]))
        assert record["inversion_w"] == pytest.approx(-1.0 / 3.0)
        assert record["rho_aa"] == pytest.approx(1.0 / 3.0)
        meta = json.loads((tmp_path / "steady.json").read_text())
        assert set(meta) == SIDECAR_KEYS

    def test_published_column_differs_for_thermal(self, tmp_path):
        run(tmp_path, "steady", "--omega", "1", "--nbar", "0.5")
        header, rows = read_csv(tmp_path / "steady.csv")
        record = dict(zip(header, rows[0]))
        assert record["inversion_w"] == pytest.approx(-1.0 / 3.0)
        assert record["inversion_w_published"] == pytest.approx(-1.0 / 6.0)


class TestFigures:
    def test_population_curves_bounded(self, tmp_path):
        assert run(tmp_path, "figure", "2") == 0
        header, rows = read_csv(tmp_path / "figure2.csv")
        assert header[0] == "Omega/gamma"
        values = rows[:, 1:]
        assert np.all(values >= 0.0) and np.all(values < 0.5)

    def test_inversion_surface_negative(self, tmp_path):
        assert run(tmp_path, "figure", "1") == 0
        header, rows = read_csv(tmp_path / "figure1.csv")
        assert rows.shape[0] == 61 * 21
        assert np.all(rows[:, 2] < 0.0)

    def test_g2_curves_start_at_zero(self, tmp_path):
        assert run(tmp_path, "figure", "6") == 0
        header, rows = read_csv(tmp_path / "figure6.csv")
        assert len(header) == 4  # tau plus three nbar curves
        np.testing.assert_allclose(rows[0, 1:], 0.0, atol=1e-12)

    def test_strict_paper_changes_inversion_surface(self, tmp_path):
        run(tmp_path, "figure", "1", "--out", "a.csv")
        run(tmp_path, "figure", "1", "--strict-paper", "--out", "b.csv")
        _, corrected = read_csv(tmp_path / "a.csv")
        _, published = read_csv(tmp_path / "b.csv")
        assert np.max(np.abs(corrected[:, 2] - published[:, 2])) > 0.05

    def test_out_of_range_number(self, tmp_path, capsys):
        assert run(tmp_path, "figure", "12") == 2

    def test_plot_renders_png(self, tmp_path):
        assert run(tmp_path, "figure", "4", "--plot") == 0
        png = tmp_path / "figure4.png"
        assert png.exists() and png.stat().st_size > 1000

    def test_squeezing_figure_has_negative_pockets_nowhere(self, tmp_path):
        # the nbar = 0.05..0.15 curves stay non-negative on both paths
        run(tmp_path, "figure", "9", "--out", "corr.csv")
        run(tmp_path, "figure", "9", "--strict-paper", "--out", "pub.csv")
        for name in ("corr.csv", "pub.csv"):
            _, rows = read_csv(tmp_path / name)
            assert np.min(rows[:, 1:]) >= -1e-12


class TestSweep:
    def test_grid_shape_and_order(self, tmp_path):
        assert (
            run(tmp_path, "sweep", "inversion_w", "--omega", "0:6:61", "--nbar", "0:1:21")
            == 0
        )
        header, rows = read_csv(tmp_path / "sweep.csv")
        assert rows.shape == (61 * 21, 4)
        # lexicographic order: omega outer, nbar inner
        assert rows[0, 0] == 0.0 and rows[20, 0] == 0.0 and rows[21, 0] == 0.1
        assert np.all(rows[:, 3] < 0.0)

    def test_var_x_sign_change_brackets_pocket_edge(self, tmp_path):
        run(tmp_path, "sweep", "var_x", "--omega", "0:1.5:301", "--nbar", "0")
        _, rows = read_csv(tmp_path / "sweep.csv")
        omegas, values = rows[:, 0], rows[:, 3]
        crossings = omegas[np.where(np.diff(np.sign(values)) > 0)[0]]
        assert crossings.size == 1
        assert abs(crossings[0] - 1.0 / math.sqrt(2.0)) < 0.01

    def test_fwhm_grows_with_decoherence(self, tmp_path):
        run(tmp_path, "sweep", "central_fwhm", "--omega", "5", "--nbar", "0.25:0.75:3")
        _, rows = read_csv(tmp_path / "sweep.csv")
        assert np.all(np.diff(rows[:, 3]) > 0)

    def test_unknown_observable(self, tmp_path):
        assert run(tmp_path, "sweep", "entropy", "--omega", "1") == 2

    def test_thread_cap_does_not_change_output(self, tmp_path):
        old = os.environ.get("QDL_THREADS")
        try:
            os.environ["QDL_THREADS"] = "1"
            run(tmp_path, "sweep", "rho_aa", "--omega", "0:4:9", "--nbar", "0:1:5",
                "--out", "serial.csv")
            os.environ["QDL_THREADS"] = "4"
            run(tmp_path, "sweep", "rho_aa", "--omega", "0:4:9", "--nbar", "0:1:5",
                "--out", "parallel.csv")
        finally:
            if old is None:
                os.environ.pop("QDL_THREADS", None)
            else:
                os.environ["QDL_THREADS"] = old
        assert (tmp_path / "serial.csv").read_bytes() == (
            tmp_path / "parallel.csv"
        ).read_bytes()


class TestCurves:
    def test_g2_command(self, tmp_path):
        assert run(tmp_path, "g2", "--omega", "5", "--nbar", "0.25") == 0
        header, rows = read_csv(tmp_path / "g2.csv")
        assert header == ["gamma*tau", "g2", "g2_strong_drive"]
        assert abs(rows[0, 1]) <= 1e-12
        meta = json.loads((tmp_path / "g2.json").read_text())
        assert meta["params"]["derived"]["antibunched"] is True

    def test_spectrum_command_with_window(self, tmp_path):
        assert (
            run(tmp_path, "spectrum", "--omega", "10", "--nbar", "0.5",
                "--omega-window", "20", "--points", "401") == 0
        )
        header, rows = read_csv(tmp_path / "spectrum.csv")
        assert rows.shape == (401, 2)
        assert np.all(rows[:, 1] >= -1e-10)
        meta = json.loads((tmp_path / "spectrum.json").read_text())
        assert meta["params"]["derived"]["coherent_weight"] >= 0.0

    def test_spectrum_strict_paper_column(self, tmp_path):
        run(tmp_path, "spectrum", "--omega", "10", "--strict-paper")
        header, _ = read_csv(tmp_path / "spectrum.csv")
        assert header[1] == "S_strong_drive [1/gamma]"

    def test_dynamics_command_decays_to_steady_state(self, tmp_path):
        assert run(tmp_path, "dynamics", "--omega", "0", "--tau-max", "16") == 0
        _, rows = read_csv(tmp_path / "dynamics.csv")
        assert rows[0, 3] == 1.0  # starts excited
        assert rows[-1, 3] == pytest.approx(-1.0, abs=1e-5)

    def test_squeezing_command_reports_pockets(self, tmp_path):
        assert run(tmp_path, "squeezing", "--nbar", "0") == 0
        meta = json.loads((tmp_path / "squeezing.json").read_text())
        pockets = meta["params"]["derived"]["squeezing_pockets"]
        assert len(pockets) == 1
        assert pockets[0][1] == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-6)

    def test_json_format_single_file(self, tmp_path):
        assert run(tmp_path, "g2", "--omega", "3", "--format", "json") == 0
        payload = json.loads((tmp_path / "g2.json").read_text())
        assert SIDECAR_KEYS <= set(payload)
        assert payload["columns"][0] == "gamma*tau"
        assert len(payload["rows"]) == 801


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ("figure", "4"),
            ("sweep", "rho_aa", "--omega", "0:5:11", "--nbar", "0:0.5:3"),
            ("g2", "--omega", "4", "--nbar", "0.5", "--points", "101"),
            ("spectrum", "--omega", "2.5", "--nbar", "0.25", "--points", "101"),
        ],
        ids=lambda a: a[0],
    )
    def test_byte_identical_reruns(self, tmp_path, argv):
        first = tmp_path / "first"
        second = tmp_path / "second"
        first.mkdir()
        second.mkdir()
        run(first, *argv)
        run(second, *argv)
        files = sorted(p.name for p in first.iterdir())
        assert files == sorted(p.name for p in second.iterdir())
        for name in files:
            assert (first / name).read_bytes() == (second / name).read_bytes(), name


class TestVerifyCommand:
    def test_quick_passes_fast(self, tmp_path, capsys):
        import time

        start = time.time()
        code = run(tmp_path, "verify", "--quick")
        elapsed = time.time() - start
        out = capsys.readouterr().out
        assert code == 0
        assert elapsed < 5.0
        assert "PASS transient-vs-rk4" in out
        assert "INFO inversion-formula" in out
        assert out.count("INFO ") == 5


class TestVerifyReport:
    def test_strict_paper_ratio_table(self):
        from qdl.verify import run_verify

        report = run_verify(quick=True, strict_paper=True)
        record = next(r for r in report.discrepancies if r.name == "inversion-formula")
        table = record.data["ratio_by_nbar"]
        # at Omega = gamma the corrected/published ratio is 3c^2/(c^2+2) with
        # c = 2*nbar+1; it equals c itself exactly at nbar = 0.5
        for nb, ratio in table.items():
            c = 2.0 * float(nb) + 1.0
            assert ratio == pytest.approx(3.0 * c**2 / (c**2 + 2.0), abs=1e-12)
        assert table["0.5"] == pytest.approx(2.0, abs=1e-12)
