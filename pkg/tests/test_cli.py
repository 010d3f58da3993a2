import csv
import json

import numpy as np
import pytest

from lgtv import io
from lgtv.cli import main


@pytest.fixture
def noisy_file(tmp_path):
    rng = np.random.default_rng(7)
    f = np.zeros((10, 10, 1))
    f[:5] = 1.0
    f += 0.1 * rng.standard_normal(f.shape)
    path = tmp_path / "in.mcf"
    io.write_image(str(path), f)
    return str(path)


class TestDenoise:
    def test_end_to_end(self, noisy_file, tmp_path, capsys):
        out = str(tmp_path / "out.mcf")
        rc = main([
            "denoise", "--input", noisy_file, "--output", out,
            "--mu", "2.0", "--lambda", "2.0",
        ])
        assert rc == 0
        u = io.read_image(out)
        assert u.shape == (10, 10, 1)
        report = json.loads((tmp_path / "out.mcf.json").read_text())
        assert report["termination"] == "grad_tol"
        assert report["final_grad_norm"] <= 1e-8
        assert "iterations" in capsys.readouterr().out

    def test_report_path_flag(self, noisy_file, tmp_path):
        out = str(tmp_path / "out.mcf")
        rpt = str(tmp_path / "custom.json")
        rc = main(["denoise", "--input", noisy_file, "--output", out, "--report", rpt])
        assert rc == 0
        assert json.loads(open(rpt).read())["iterations"] > 0

    def test_pgm_output(self, noisy_file, tmp_path):
        out = str(tmp_path / "out.pgm")
        rc = main(["denoise", "--input", noisy_file, "--output", out])
        assert rc == 0
        assert io.read_image(out).shape == (10, 10, 1)

    def test_aniso_model(self, noisy_file, tmp_path):
        out = str(tmp_path / "out.mcf")
        rc = main([
            "denoise", "--input", noisy_file, "--output", out,
            "--model", "aniso", "--smoothing-eps", "1e-2",
        ])
        assert rc == 0

    def test_missing_input_file(self, tmp_path):
        rc = main([
            "denoise", "--input", str(tmp_path / "nope.mcf"),
            "--output", str(tmp_path / "o.mcf"),
        ])
        assert rc == 2

    def test_malformed_input_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.mcf"
        bad.write_bytes(b"MCF1\n2 2 1\n\x00\x00")
        rc = main([
            "denoise", "--input", str(bad), "--output", str(tmp_path / "o.mcf"),
        ])
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_missing_required_flag(self):
        assert main(["denoise", "--input", "x.mcf"]) == 2

    def test_unknown_flag(self, noisy_file):
        assert main(["denoise", "--input", noisy_file, "--frobnicate"]) == 2

    def test_unknown_subcommand(self):
        assert main(["explode"]) == 2


class TestConfigFile:
    def test_config_supplies_defaults(self, noisy_file, tmp_path):
        cfg = tmp_path / "cfg"
        cfg.write_text("mu = 3.0\nlambda = 2.0\ngrad-tol = 1e-6\n# comment\n")
        out = str(tmp_path / "a.mcf")
        rc = main([
            "denoise", "--config", str(cfg), "--input", noisy_file, "--output", out,
        ])
        assert rc == 0

    def test_explicit_flag_wins(self, noisy_file, tmp_path):
        cfg = tmp_path / "cfg"
        cfg.write_text("max-iters = 1\n")
        out1 = str(tmp_path / "a.mcf")
        out2 = str(tmp_path / "b.mcf")
        main(["denoise", "--config", str(cfg), "--input", noisy_file, "--output", out1])
        r1 = json.loads((tmp_path / "a.mcf.json").read_text())
        assert r1["iterations"] == 1
        main([
            "denoise", "--config", str(cfg), "--input", noisy_file,
            "--output", out2, "--max-iters", "500",
        ])
        r2 = json.loads((tmp_path / "b.mcf.json").read_text())
        assert r2["iterations"] > 1

    def test_malformed_config(self, noisy_file, tmp_path):
        cfg = tmp_path / "cfg"
        cfg.write_text("this is not a key value line\n")
        with pytest.raises(SystemExit):
            main([
                "denoise", "--config", str(cfg), "--input", noisy_file,
                "--output", str(tmp_path / "o.mcf"),
            ])


class TestCompareTv:
    def test_csv_output(self, noisy_file, tmp_path):
        out = tmp_path / "rows.csv"
        rc = main([
            "compare-tv", "--input", noisy_file, "--output", str(out),
            "--mu-list", "4,8,16", "--lambda", "4.0",
            "--gap-tol", "1e-7", "--grad-tol", "1e-7",
        ])
        assert rc == 0
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["param", "l1", "l2", "energy_smooth", "energy_tv"]
        assert len(rows) == 4
        l2 = [float(r[2]) for r in rows[1:]]
        assert l2[2] < l2[1] < l2[0]

    def test_eps_sweep_to_stdout(self, noisy_file, capsys):
        rc = main([
            "compare-tv", "--input", noisy_file,
            "--eps-list", "0.5,0.1", "--lambda", "4.0",
            "--gap-tol", "1e-6", "--grad-tol", "1e-6",
        ])
        assert rc == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0].strip() == "param,l1,l2,energy_smooth,energy_tv"

    def test_requires_exactly_one_sweep(self, noisy_file):
        with pytest.raises(SystemExit):
            main(["compare-tv", "--input", noisy_file])
        with pytest.raises(SystemExit):
            main([
                "compare-tv", "--input", noisy_file,
                "--mu-list", "4,8", "--eps-list", "0.5,0.1",
            ])


class TestVerify:
    def test_passing_suite_exits_zero(self, capsys):
        rc = main(["verify", "--seed", "0"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "checks passed" in out
        assert "FAIL" not in out

    def test_sabotaged_suite_exits_one(self, capsys, monkeypatch):
        from lgtv import densities

        monkeypatch.setattr(
            densities.PhiMu, "deriv2",
            lambda self, t: np.asarray(t, dtype=float) * 0.0 + 0.5,
        )
        rc = main(["verify", "--seed", "0"])
        assert rc == 1
        assert "FAIL" in capsys.readouterr().out


class TestHullcheck:
    def test_box_hull(self, noisy_file, capsys, tmp_path):
        rc = main([
            "hullcheck", "--input", noisy_file, "--set", "box:0,1",
            "--sanitize", "--mu", "1.5", "--lambda", "1.0",
        ])
        assert rc == 0
        out = capsys.readouterr().out
        line = [ln for ln in out.splitlines() if ln.startswith("result hull")][0]
        assert float(line.split()[-1]) <= 1e-6

    def test_bad_set_spec(self, noisy_file):
        with pytest.raises(SystemExit):
            main(["hullcheck", "--input", noisy_file, "--set", "box:0"])
        with pytest.raises(SystemExit):
            main(["hullcheck", "--input", noisy_file, "--set", "weird:1,2"])
