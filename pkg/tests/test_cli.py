import json
import shutil
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from chebfolio.cli import main
from chebfolio.report import parse_matrix_csv


def run(*argv):
    return main([str(a) for a in argv])


def write_csv(path, prices, start_day=4):
    lines = ["date,close"] + [f"2021-01-{start_day + i:02d},{p}" for i, p in enumerate(prices)]
    path.write_text("\n".join(lines) + "\n")
    return path


class TestFit:
    def test_fixture_degree30(self, panel_files, tmp_path):
        assert run("fit", "--degree", 30, *panel_files, "-o", tmp_path) == 0
        coeff = sorted(tmp_path.glob("coeff_*.csv"))
        assert len(coeff) == 8
        for f in coeff:
            lines = f.read_text().splitlines()
            assert lines[0] == "index,coefficient"
            assert len(lines) == 1 + 31
        diag = json.loads((tmp_path / "fit_diagnostics.json").read_text())
        assert [d["degree"] for d in diag["per_asset"]] == [30] * 8
        assert diag["alignment"]["observations"] == 250

    def test_insufficient_samples(self, panel_files, tmp_path, capsys):
        out = tmp_path / "out"
        assert run("fit", "--degree", 400, *panel_files, "-o", out) == 2
        assert "insufficient samples" in capsys.readouterr().err
        assert not out.exists()

    def test_constant_degree0(self, tmp_path):
        f = write_csv(tmp_path / "FLAT.csv", [42.5] * 5)
        assert run("fit", "--degree", 0, f, "-o", tmp_path / "o") == 0
        lines = (tmp_path / "o" / "coeff_FLAT.csv").read_text().splitlines()
        index, value = lines[1].split(",")
        assert index == "0" and float(value) == pytest.approx(42.5, rel=1e-14)

    def test_parse_error_names_file_and_line(self, tmp_path, capsys):
        f = tmp_path / "BAD.csv"
        f.write_text("date,close\n2021-01-04,1\n2021-01-05,oops\n")
        assert run("fit", "--degree", 0, f, "-o", tmp_path / "o") == 2
        err = capsys.readouterr().err
        assert "BAD.csv:3" in err

    def test_missing_file(self, tmp_path):
        assert run("fit", tmp_path / "nope.csv", "-o", tmp_path / "o") == 2


class TestReport:
    def test_golden(self, panel_files, golden_dir, tmp_path):
        assert run("report", "--degree", 30, *panel_files, "-o", tmp_path) == 0
        for name in ("cosine.csv", "correlation.csv", "agreement.txt"):
            assert (tmp_path / name).read_bytes() == (golden_dir / name).read_bytes(), name

    def test_report_json(self, panel_files, tmp_path):
        run("report", "--degree", 30, *panel_files, "-o", tmp_path)
        rep = json.loads((tmp_path / "report.json").read_text())
        labels = [p.stem for p in panel_files]
        assert rep["cosine_matrix"]["labels"] == labels
        assert rep["correlation_matrix"]["labels"] == labels
        assert [a["asset_id"] for a in rep["per_asset"]] == labels
        assert rep["agreement"]["pair_count"] == 28
        assert rep["capm"] is None
        assert rep["config_echo"]["degree"] == 30
        stat = float((tmp_path / "agreement.txt").read_text())
        assert stat == pytest.approx(rep["agreement"]["statistic"], abs=1e-10)

    def test_reparsed_matrices_valid(self, panel_files, tmp_path):
        run("report", "--degree", 30, *panel_files, "-o", tmp_path)
        for name in ("cosine.csv", "correlation.csv"):
            parse_matrix_csv((tmp_path / name).read_text()).check(1e-12)

    def test_identical_inputs(self, panel_files, tmp_path, capsys):
        a = shutil.copy(panel_files[0], tmp_path / "ONE.csv")
        b = shutil.copy(panel_files[0], tmp_path / "TWO.csv")
        out = tmp_path / "o"
        assert run("report", "--degree", 10, a, b, "-o", out) == 0
        assert "degenerate: zero variance" in capsys.readouterr().err
        rep = json.loads((out / "report.json").read_text())
        assert np.array_equal(rep["cosine_matrix"]["entries"], np.ones((2, 2)))
        assert np.allclose(rep["correlation_matrix"]["entries"], 1.0, atol=1e-15)
        assert "degenerate: zero variance" in rep["agreement"]["error"]
        assert not (out / "agreement.txt").exists()

    def test_capm_table(self, panel_files, tmp_path):
        code = run("report", "--degree", 30, *panel_files, "--market-ticker", "MKT",
                   "--rf", 0.02, "--erm", 0.08, "-o", tmp_path)
        assert code == 0
        rep = json.loads((tmp_path / "report.json").read_text())
        rows = {r["asset_id"]: r for r in rep["capm"]}
        assert rows["MKT"]["phi"] == 1.0
        assert rows["MKT"]["beta"] == pytest.approx(1.0, abs=1e-12)
        assert rows["MKT"]["expected_return_phi"] == pytest.approx(0.08, abs=1e-15)
        assert rows["FOXT"]["beta"] == pytest.approx(1.840427849451673, abs=1e-12)
        assert (tmp_path / "capm.csv").read_text().startswith("asset_id,beta,phi")

    @pytest.mark.parametrize(
        "extra",
        [
            ["--market-ticker", "MKT"],
            ["--market-ticker", "MKT", "--rf", "0.02"],
            ["--rf", "0.02", "--erm", "0.08"],
            ["--market-ticker", "NOPE", "--rf", "0.02", "--erm", "0.08"],
        ],
    )
    def test_config_errors(self, panel_files, tmp_path, extra):
        out = tmp_path / "o"
        assert run("report", "--degree", 5, *panel_files, *extra, "-o", out) == 4
        assert not out.exists()

    def test_single_input_rejected(self, panel_files, tmp_path):
        assert run("report", "--degree", 5, panel_files[0], "-o", tmp_path / "o") == 2

    def test_heatmap(self, panel_files, tmp_path):
        svg = tmp_path / "maps" / "heat.svg"
        assert run("report", "--degree", 30, *panel_files, "--heatmap", svg, "-o", tmp_path / "o") == 0
        root = ET.parse(svg).getroot()
        rects = root.findall("{http://www.w3.org/2000/svg}rect")
        assert len(rects) == 2 * 64
        texts = [t.text for t in root.iter("{http://www.w3.org/2000/svg}text")]
        assert "MKT" in texts and "1.000" in texts

    def test_options(self, panel_files, tmp_path):
        args = ["--degree", 12, "--time-axis", "index", "--basis", "returns", "--drop-constant-term"]
        assert run("report", *args, *panel_files, "-o", tmp_path) == 0
        rep = json.loads((tmp_path / "report.json").read_text())
        assert rep["config_echo"]["basis"] == "returns"
        assert rep["config_echo"]["drop_constant_term"] is True
        parse_matrix_csv((tmp_path / "cosine.csv").read_text()).check()

    def test_manifest(self, panel_files, tmp_path):
        manifest = tmp_path / "m.json"
        manifest.write_text(json.dumps([
            {"ticker": p.stem, "path": str(p), "is_market": p.stem == "MKT"} for p in panel_files
        ]))
        out = tmp_path / "o"
        assert run("report", "--degree", 30, "--manifest", manifest, "--rf", 0.01, "--erm", 0.05, "-o", out) == 0
        rep = json.loads((out / "report.json").read_text())
        assert rep["config_echo"]["market_ticker"] == "MKT"
        assert {r["asset_id"]: r["phi"] for r in rep["capm"]}["MKT"] == 1.0

    def test_deterministic(self, panel_files, tmp_path):
        for d in ("a", "b"):
            run("report", "--degree", 30, *panel_files, "--market-ticker", "MKT",
                "--rf", 0.02, "--erm", 0.08, "-o", tmp_path / d)
        names = sorted(p.name for p in (tmp_path / "a").iterdir())
        assert names == sorted(p.name for p in (tmp_path / "b").iterdir())
        for n in names:
            assert (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes()


def test_console_entry_and_logging(panel_files, tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "chebfolio", "fit", "--degree", "226", *map(str, panel_files),
         "-o", str(tmp_path)],
        capture_output=True, text=True, env={"CHEBFOLIO_LOG": "warning", "PATH": ""},
    )
    assert proc.returncode == 0
    assert proc.stdout == ""
    # trading-day grids at 227 terms are ill-conditioned; the warning goes to stderr
    assert "condition" in proc.stderr
