import json
import math

import numpy as np
import pytest

from covariant_lab import heisenberg as hg
from covariant_lab import su11 as su
from covariant_lab.cli import (
    EXIT_CHECKS_FAILED,
    EXIT_OK,
    EXIT_PRECONDITION,
    EXIT_USAGE,
    ReportEnvelope,
    main,
    read_line_signal,
    write_circle_csv,
    write_line_csv,
)
from covariant_lab.numerics import GridFunction1D, RealGrid


@pytest.fixture()
def gauss_csv(tmp_path):
    grid = RealGrid(-8.0, 8.0, 2048)
    q = grid.points
    path = tmp_path / "gauss.csv"
    write_line_csv(str(path), GridFunction1D(grid, np.exp(-math.pi * q * q)))
    return str(path)


@pytest.fixture()
def fplus_csv(tmp_path):
    path = tmp_path / "fplus.csv"
    write_circle_csv(str(path), su.f_plus())
    return str(path)


def run_json(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr().out
    # some commands print a human-readable table before the envelope
    return rc, json.loads(out[out.index("{") :])


class TestFsbCommand:
    def test_gaussian_passes(self, tmp_path, capsys, gauss_csv):
        out = tmp_path / "field.csv"
        rc, env = run_json(capsys, ["fsb", gauss_csv, "--output", str(out)])
        assert rc == EXIT_OK
        assert env["pass"] is True
        assert env["results"]["cr_residual"] < 1e-4
        assert env["schema"] == "covariant-lab/1"
        header = out.read_text().splitlines()[0]
        assert header == "x,y,re,im"

    def test_empty_file(self, tmp_path):
        bad = tmp_path / "empty.csv"
        bad.write_text("")
        assert main(["fsb", str(bad)]) == EXIT_USAGE

    def test_non_decaying_signal(self, tmp_path):
        grid = RealGrid(-8.0, 8.0, 256)
        path = tmp_path / "flat.csv"
        write_line_csv(str(path), GridFunction1D(grid, np.ones(grid.n)))
        assert main(["fsb", str(path)]) == EXIT_PRECONDITION

    def test_tolerance_override_can_fail(self, tmp_path, capsys, gauss_csv):
        out = tmp_path / "field.csv"
        rc = main(
            ["fsb", gauss_csv, "--output", str(out), "--tolerance", "cr_residual=1e-9"]
        )
        capsys.readouterr()
        assert rc == EXIT_CHECKS_FAILED


class TestUncertaintyCommand:
    def test_gaussian_md(self, capsys, gauss_csv):
        rc, env = run_json(capsys, ["uncertainty", gauss_csv, "--pair", "MD"])
        assert rc == EXIT_OK
        report = env["results"]["report"]
        assert report["product"] == pytest.approx(0.5, abs=1e-6)
        assert report["gap"] < 1e-6

    def test_hermite_md(self, tmp_path, capsys):
        grid = RealGrid(-8.0, 8.0, 2048)
        q = grid.points
        path = tmp_path / "hermite.csv"
        write_line_csv(str(path), GridFunction1D(grid, q * np.exp(-math.pi * q * q)))
        rc, env = run_json(capsys, ["uncertainty", str(path), "--pair", "MD"])
        assert rc == EXIT_OK
        report = env["results"]["report"]
        assert report["product"] == pytest.approx(1.5, abs=1e-6)
        assert report["gap"] == pytest.approx(1.0, abs=1e-6)

    def test_constant_circle_su11(self, capsys, fplus_csv):
        rc, env = run_json(capsys, ["uncertainty", fplus_csv, "--pair", "su11AB"])
        assert rc == EXIT_OK
        report = env["results"]["report"]
        assert report["gap"] < 1e-8
        assert report["product"] == pytest.approx(0.25, abs=1e-12)
        assert env["notes"]  # normalization annotation, not a failure


class TestHardyCommand:
    def test_constant_state(self, tmp_path, capsys, fplus_csv):
        out = tmp_path / "disk.csv"
        rc, env = run_json(capsys, ["hardy", fplus_csv, "--output", str(out)])
        assert rc == EXIT_OK
        assert env["results"]["weighted_holomorphy_residual"] < 1e-8
        rows = out.read_text().splitlines()
        assert rows[0] == "rho,theta,re,im"
        # weighted image deviates from 1 by < 1e-8: check via the raw field
        data = np.array([[float(x) for x in r.split(",")] for r in rows[1:]])
        vals = (data[:, 2] + 1j * data[:, 3]) * np.sqrt(1.0 - data[:, 0] ** 2)
        assert np.max(np.abs(vals - 1.0)) < 1e-8

    def test_negative_mode_is_zero(self, tmp_path, capsys):
        path = tmp_path / "neg.csv"
        write_circle_csv(str(path), su.circle_mode(-1))
        out = tmp_path / "disk.csv"
        rc, env = run_json(capsys, ["hardy", str(path), "--output", str(out)])
        assert rc == EXIT_OK
        assert env["results"]["max_abs_field"] < 1e-12

    def test_bad_sample_count(self, tmp_path):
        path = tmp_path / "bad.csv"
        lines = ["theta,re,im"]
        for j in range(100):
            lines.append(f"{2 * math.pi * j / 100},1.0,0.0")
        path.write_text("\n".join(lines) + "\n")
        assert main(["hardy", str(path)]) == EXIT_USAGE


class TestVerifyCommand:
    def test_equivalence_suite(self, capsys):
        rc, env = run_json(capsys, ["verify", "--suite", "equivalence"])
        assert rc == EXIT_OK
        names = [c["name"] for c in env["results"]["checks"]]
        assert any("gaussian" in n for n in names)
        assert any("hermite" in n for n in names)
        assert env["pass"] is True

    def test_unknown_suite_is_usage_error(self):
        assert main(["verify", "--suite", "bogus"]) == EXIT_USAGE


class TestEnvelopeAndFormats:
    def test_envelope_roundtrip(self):
        env = ReportEnvelope(
            command="x",
            config={"a": 1.5},
            results={"v": [1, 2, {"b": True}]},
            passed=True,
            wall_time_ms=12,
            notes=["n"],
        )
        payload = env.as_dict()
        assert json.loads(json.dumps(payload)) == payload

    def test_csv_format_flat_output(self, capsys, gauss_csv, tmp_path):
        rc = main(
            [
                "uncertainty",
                gauss_csv,
                "--pair",
                "MD",
                "--format",
                "csv",
            ]
        )
        out = capsys.readouterr().out.splitlines()
        assert rc == EXIT_OK
        assert out[0] == "key,value"
        keys = {line.split(",")[0] for line in out[1:]}
        assert "results.report.product" in keys

    def test_line_signal_roundtrip(self, tmp_path, gauss_csv):
        sig = read_line_signal(gauss_csv)
        again = tmp_path / "again.csv"
        write_line_csv(str(again), sig)
        assert open(gauss_csv).read() == again.read_text()

    def test_rejects_nonuniform_spacing(self, tmp_path):
        path = tmp_path / "bad.csv"
        rows = ["q,re,im"] + [f"{q},1.0,0.0" for q in (0.0, 0.1, 0.21, 0.3, 0.4, 0.5, 0.6, 0.7)]
        path.write_text("\n".join(rows) + "\n")
        assert main(["fsb", str(path)]) == EXIT_USAGE

    def test_rejects_bad_flag_value(self, gauss_csv):
        assert main(["fsb", gauss_csv, "--tolerance", "oops"]) == EXIT_USAGE
        assert main(["fsb", gauss_csv, "--hbar", "0.0"]) == EXIT_USAGE
