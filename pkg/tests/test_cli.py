import csv
import io
import json
import shutil
import subprocess

import pytest

from potbal import io as pio
from potbal.cli import main
from potbal.fixtures import generate


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def doc(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


class TestCriterion:
    def test_dyadic_integers_against_sine(self, capsys):
        d = doc(capsys, "criterion", "dyadic", "--nu", "gen:integers:16384", "--M", "sinpi")
        assert d["verdict"] == "Bounded"
        assert d["config"]["n_max"] == 14 and d["config"]["slope_tol"] == 0.05
        assert d["config"]["quad_tol"] == 1e-9 and d["config"]["trunc"] == 1e4

    def test_assert_bounded(self, capsys):
        code, _, _ = run(capsys, "criterion", "dyadic", "--gen", "integers:4096", "--M", "zero", "--nmax", "12", "--assert-bounded")
        assert code == 1
        code, _, _ = run(capsys, "criterion", "dyadic", "--gen", "integers:4096", "--M", "sinpi", "--nmax", "12", "--assert-bounded")
        assert code == 0

    def test_csv_layout(self, capsys):
        code, out, _ = run(capsys, "criterion", "pair", "--gen", "integers:64", "--mu", "gen:integers:64", "--nmax", "6", "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["n", "N", "ell_nu", "comparison", "gap"]
        assert len(rows) == 1 + 21 and all(float(r[4]) == 0.0 for r in rows[1:])

    def test_random_intervals(self, capsys):
        d = doc(capsys, "criterion", "pair", "--gen", "ray:1:1024", "--mu", "gen:integers:1024", "--nmax", "10", "--intervals", "50")
        assert d["kind"] == "intervals" and "gap_matrix" not in d

    def test_other_kinds(self, capsys):
        assert doc(capsys, "criterion", "eps", "--gen", "ray:1i:256", "--eps", "0.1", "--nmax", "8")["C"] == 0.0
        assert doc(capsys, "criterion", "mu-rh", "--gen", "integers:256", "--nmax", "8")["verdict"] == "Bounded"
        assert doc(capsys, "criterion", "mr", "--gen", "ray:2:128", "--mu", "gen:ray:1:256", "--nmax", "8")["verdict"] == "Bounded"
        assert doc(capsys, "criterion", "redheffer", "--gen", "ray:1i:64", "--c", "1", "--nmax", "6")["certificate_sum"] == 0.0

    def test_missing_option(self, capsys):
        code, _, err = run(capsys, "criterion", "dyadic", "--gen", "integers:8")
        assert code == 2 and "--M" in err


class TestErrors:
    def test_malformed_json(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{ this is not json")
        code, _, err = run(capsys, "lindelof", "--nu", str(p))
        assert code == 2 and "malformed" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "lindelof", "--nu", str(tmp_path / "nope.json"))
        assert code == 2

    def test_origin_with_genus_one(self, capsys, tmp_path):
        p = tmp_path / "origin.json"
        p.write_text(json.dumps({"atoms": [{"re": 0, "im": 0, "mass": 1}]}))
        code, _, err = run(capsys, "sweep", "--genus", "1", "--nu", str(p))
        assert code == 3 and "OriginInSupport" in err

    def test_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_bad_generator(self, capsys):
        code, _, _ = run(capsys, "lindelof", "--gen", "spiral:3")
        assert code == 2


class TestOutputs:
    def test_distribution_round_trip(self, capsys, tmp_path):
        src = tmp_path / "mu.json"
        mu = generate("ray:1:300")
        src.write_text(pio.dumps(pio.distribution_to_dict(mu)))
        d = doc(capsys, "construct", "complete-r", "--nu", str(src))
        gamma = pio.distribution_from_dict(d["gamma"])
        again = pio.distribution_from_dict(json.loads(pio.dumps(pio.distribution_to_dict(gamma))))
        assert again == gamma and gamma.n_atoms > 0

    def test_deterministic(self, capsys, tmp_path):
        outs = []
        for i in range(2):
            path = tmp_path / f"r{i}.json"
            code, _, _ = run(capsys, "construct", "uniformize", "--gen", "ray:1+0.2i:50", "--mu", "gen:ray:2+0.5i:20", "--a", "0.5", "--out", str(path))
            assert code == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]

    def test_sweep_strip(self, capsys):
        d = doc(capsys, "sweep", "--gen", "ray:3:4", "--strip", "1")
        assert len(d["poisson"]) == 4 and d["total_variation"] > 0

    def test_ell_pairs(self, capsys):
        d = doc(capsys, "ell", "--gen", "ray:2:1", "--side", "rh", "--r", "1", "--R", "3")
        assert d["rows"][0]["value"] == 0.5

    def test_content_and_qe(self, capsys):
        d = doc(capsys, "content", "--points", "0", "3", "--d", "1", "--greedy")
        assert d["upper"] == 0.0 and d["greedy"] == pytest.approx(4.0)
        d = doc(capsys, "qe", "--intervals", "0,1", "--r", "2.718281828459045")
        assert d["rows"][0]["q"] == pytest.approx(2.0)

    def test_means(self, capsys):
        d = doc(capsys, "means", "--M", "absre", "--z", "1+1i", "--r", "0.5", "--type-r", "64")
        assert d["value"] == 1.0 and d["type_estimate"] == pytest.approx(1.0)

    def test_scan(self, capsys):
        d = doc(capsys, "scan", "--lhs", "absre", "--rhs", "absre", "--domain", "grid", "--b", "1", "--y-max", "5", "--n", "11")
        assert d["ok"] is True

    def test_threads_env(self, capsys, monkeypatch):
        monkeypatch.setenv("POTBAL_THREADS", "0")
        code, _, _ = run(capsys, "criterion", "dyadic", "--gen", "integers:8", "--M", "zero", "--nmax", "3")
        assert code == 2


@pytest.mark.skipif(shutil.which("potbal") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["potbal", "qe", "--r", "1"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["rows"][0]["q"] == 0.0
