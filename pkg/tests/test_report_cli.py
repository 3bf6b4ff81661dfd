import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

import zerodist.certify as certify_mod
from zerodist.certify import CertItem
from zerodist.cli import EXIT_CERT, EXIT_INPUT, EXIT_OK, main
from zerodist.families import digits_pi
from zerodist.poly import Polynomial, write_coeffs
from zerodist.report import (
    analyze_polynomial,
    canonical_json,
    ensemble_csv,
    ensemble_row,
    zeros_csv,
)

LOG_PLUS_CIRCLE_CONSTANT = 0.3230659472194505


@pytest.fixture()
def z2_file(tmp_path):
    path = tmp_path / "z2.json"
    write_coeffs(Polynomial([-1, 0, 1]), str(path))
    return str(path)


class TestAnalyzePipeline:
    def test_z2_minus_1_numbers(self):
        rep = analyze_polynomial(Polynomial([-1, 0, 1]), "z^2 - 1")
        assert rep.degree == 2
        assert rep.discrepancy["value"] == pytest.approx(1.0, abs=1e-12)
        assert rep.measures["h"] == pytest.approx(LOG_PLUS_CIRCLE_CONSTANT, abs=1e-8)
        assert rep.certificates.all_passed

    def test_deflation_reported(self):
        rep = analyze_polynomial(Polynomial([0, 0, -1, 0, 1]), "z^2 (z^2-1)")
        assert rep.deflation_order == 2
        assert rep.degree == 2
        assert rep.original_degree == 4

    def test_all_origin_roots_rejected(self):
        with pytest.raises(ValueError):
            analyze_polynomial(Polynomial([0, 0, 1]), "z^2")

    def test_json_round_trip_bytes(self):
        rep = analyze_polynomial(Polynomial([-1, 0, 1]), "z^2 - 1")
        text = canonical_json(rep.to_json_dict())
        assert canonical_json(json.loads(text)) == text

    def test_report_floats_finite(self):
        rep = analyze_polynomial(digits_pi(40), "digits_pi 40")
        def walk(x):
            if isinstance(x, dict):
                for v in x.values():
                    walk(v)
            elif isinstance(x, (list, tuple)):
                for v in x:
                    walk(v)
            elif isinstance(x, float):
                assert math.isfinite(x)
        walk(rep.to_json_dict())

    def test_zeros_csv_shape(self):
        rep = analyze_polynomial(Polynomial([-1, 0, 0, 0, 1]), "z^4 - 1")
        rows = list(csv.reader(io.StringIO(zeros_csv(rep))))
        assert rows[0] == ["rho", "theta", "multiplicity"]
        assert len(rows) == 5


class TestEnsemble:
    def test_row_matches_analyze(self):
        from zerodist.families import littlewood
        p = littlewood(24, 5)
        row = ensemble_row(p, 5)
        rep = analyze_polynomial(p, "littlewood")
        assert float(row[2]) == pytest.approx(rep.measures["h"], abs=1e-12)
        assert float(row[5]) == pytest.approx(rep.discrepancy["value"], abs=1e-12)
        bound = (8 / math.pi) * math.sqrt(24 * rep.measures["h"])
        assert float(row[6]) == pytest.approx(bound, rel=1e-12)

    def test_csv_footer_max_ratio(self):
        rows = [[1, 4, "0.1", "1.0", "0.0", "1.0", "2.0", "0.5", "ok"],
                [2, 4, "0.1", "1.0", "0.0", "1.5", "2.0", "0.75", "ok"]]
        text = ensemble_csv(rows, [])
        parsed = list(csv.reader(io.StringIO(text)))
        assert parsed[0][0] == "seed"
        assert parsed[-1][0] == "max_ratio"
        assert float(parsed[-1][7]) == 0.75

    def test_failures_flagged(self):
        text = ensemble_csv([], [(9, "boom")])
        parsed = list(csv.reader(io.StringIO(text)))
        assert parsed[1][0] == "9"
        assert parsed[1][-1].startswith("error:")


class TestCliAnalyze:
    def test_coeffs_file(self, z2_file, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["analyze", "--coeffs", z2_file, "--json", str(out),
                     "--kmax", "1"])
        assert code == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["schema_version"] == 1
        assert payload["discrepancy"]["value"] == pytest.approx(1.0, abs=1e-12)
        text = capsys.readouterr().out
        assert "2.5464" in text and "2.5619" in text and "0.9159" in text \
            and "1.4142" in text

    def test_family_lehmer_mahler(self, tmp_path, capsys):
        out = tmp_path / "lehmer.json"
        code = main(["analyze", "--family", "lehmer", "--json", str(out),
                     "--kmax", "1"])
        assert code == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["measures"]["mahler"] == pytest.approx(1.17628, abs=5e-5)

    def test_missing_input(self, capsys):
        assert main(["analyze"]) == EXIT_INPUT

    def test_both_inputs_rejected(self, z2_file):
        assert main(["analyze", "--coeffs", z2_file, "--family", "lehmer"]) == EXIT_INPUT

    def test_malformed_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        assert main(["analyze", "--coeffs", str(bad)]) == EXIT_INPUT

    def test_degenerate_polynomial(self, tmp_path):
        bad = tmp_path / "deg0.json"
        bad.write_text('{"coeffs": [[3.0, 0.0]]}')
        assert main(["analyze", "--coeffs", str(bad)]) == EXIT_INPUT

    def test_certificate_failure_exit_code(self, z2_file, monkeypatch):
        fail_item = CertItem("theorem1_radial", measured=2.0, bound=1.0,
                             tolerance=0.0)
        monkeypatch.setattr(certify_mod, "check_theorem1",
                            lambda P, R, quad_tol=1e-9, h=None: fail_item)
        assert main(["analyze", "--coeffs", z2_file, "--kmax", "1"]) == EXIT_CERT

    def test_coeffs_out_round_trip(self, tmp_path):
        out = tmp_path / "coeffs.json"
        code = main(["analyze", "--family", "lehmer", "--kmax", "1",
                     "--coeffs-out", str(out)])
        assert code == EXIT_OK
        payload = json.loads(out.read_text())
        assert len(payload["coeffs"]) == 11

    def test_zero_csv_emitted(self, z2_file, tmp_path):
        out = tmp_path / "zeros.csv"
        main(["analyze", "--coeffs", z2_file, "--csv", str(out), "--kmax", "1"])
        rows = list(csv.reader(io.StringIO(out.read_text())))
        assert rows[0] == ["rho", "theta", "multiplicity"]
        assert len(rows) == 3


class TestCliSvg:
    def test_svg_deterministic(self, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        src = tmp_path / "z4.json"
        write_coeffs(Polynomial([-1, 0, 0, 0, 1]), str(src))
        main(["analyze", "--coeffs", str(src), "--svg", str(a), "--kmax", "1"])
        main(["analyze", "--coeffs", str(src), "--svg", str(b), "--kmax", "1"])
        data = a.read_bytes()
        assert data == b.read_bytes()
        assert data.startswith(b"<?xml")
        assert b"svg11.dtd" in data  # SVG 1.1

    def test_plot_subcommand(self, tmp_path):
        src = tmp_path / "z4.json"
        report = tmp_path / "r.json"
        svg = tmp_path / "zeros.svg"
        write_coeffs(Polynomial([-1, 0, 0, 0, 1]), str(src))
        main(["analyze", "--coeffs", str(src), "--json", str(report), "--kmax", "1"])
        assert main(["plot", str(report), "--svg", str(svg)]) == EXIT_OK
        assert svg.read_bytes().startswith(b"<?xml")

    def test_plot_empty_roots_error(self, tmp_path):
        report = tmp_path / "bad.json"
        report.write_text(json.dumps({"roots": [], "input": "x"}))
        svg = tmp_path / "out.svg"
        assert main(["plot", str(report), "--svg", str(svg)]) == EXIT_INPUT


class TestCliEnsemble:
    def test_single_instance_matches_analyze(self, tmp_path):
        out = tmp_path / "e.csv"
        code = main(["ensemble", "--family", "littlewood", "--N", "20",
                     "--count", "1", "--seed-base", "3", "--csv", str(out)])
        assert code == EXIT_OK
        rows = list(csv.reader(io.StringIO(out.read_text())))
        assert rows[0][0] == "seed"
        from zerodist.families import littlewood
        rep = analyze_polynomial(littlewood(20, 3), "x")
        assert float(rows[1][2]) == pytest.approx(rep.measures["h"], abs=1e-12)

    def test_ratios_below_one(self, tmp_path):
        out = tmp_path / "e.csv"
        main(["ensemble", "--family", "littlewood", "--N", "30", "--count", "8",
              "--seed-base", "1", "--csv", str(out)])
        rows = list(csv.reader(io.StringIO(out.read_text())))
        body = [r for r in rows[1:] if r[0] != "max_ratio"]
        assert len(body) == 8
        assert all(float(r[7]) <= 1.0 for r in body)

    def test_jobs_do_not_change_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["ensemble", "--family", "littlewood", "--N", "16", "--count", "6",
                "--seed-base", "11"]
        main(args + ["--csv", str(a), "--jobs", "1"])
        main(args + ["--csv", str(b), "--jobs", "2"])
        assert a.read_bytes() == b.read_bytes()


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        src = tmp_path / "z2.json"
        write_coeffs(Polynomial([-1, 0, 1]), str(src))
        proc = subprocess.run(
            [sys.executable, "-m", "zerodist", "analyze", "--coeffs", str(src),
             "--kmax", "1"],
            capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0
        assert "certificates:" in proc.stdout
