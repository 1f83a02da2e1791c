import csv
import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dnsym.cli import RunConfig, UsageError, main, parse_config_text, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestList:
    def test_solutions(self, capsys):
        code, out, _ = run(capsys, "list", "solutions")
        assert code == 0
        (line,) = [ln for ln in out.splitlines() if ln.startswith("case-1.4-lambert-W0 ")]
        assert "Case 1.4" in line

    def test_algebras(self, capsys):
        code, out, _ = run(capsys, "list", "algebras")
        (line,) = [ln for ln in out.splitlines() if ln.startswith("a13 ")]
        assert code == 0 and "8 generator families" in line

    @pytest.mark.parametrize("category", ["transforms", "reductions", "conslaws"])
    def test_other_categories(self, capsys, category):
        code, out, _ = run(capsys, "list", category)
        assert code == 0 and out.strip()

    def test_unknown_category(self, capsys):
        code, _, err = run(capsys, "list", "foo")
        assert code == 2 and "foo" in err


class TestVerify:
    def test_commutators(self, capsys, tmp_path):
        out = tmp_path / "r.json"
        code, _, _ = run(capsys, "verify", "commutators", "--out", str(out))
        data = json.loads(out.read_text())
        assert code == 0
        assert data and all(r["status"] == "pass" for r in data)
        assert [r["check_id"] for r in data] == sorted(r["check_id"] for r in data)
        assert all(r["elapsed_ms"] is None for r in data)

    def test_timing_flag(self, capsys, tmp_path):
        out = tmp_path / "r.json"
        run(capsys, "verify", "table1", "--timing", "--out", str(out))
        assert all(isinstance(r["elapsed_ms"], float) for r in json.loads(out.read_text()))

    def test_deterministic_report(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "verify", "table1", "--seed", "3", "--out", str(a))
        run(capsys, "verify", "table1", "--seed", "3", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_probe_points_invariant(self, capsys):
        code, _, err = run(capsys, "verify", "all", "--probe-points", "0")
        assert code == 2 and "probe_points" in err

    def test_nonpositive_tolerance(self, capsys):
        code, _, _ = run(capsys, "verify", "table1", "--tol-probe", "0")
        assert code == 2

    def test_unknown_suite(self, capsys):
        assert run(capsys, "verify", "everything")[0] == 2

    def test_config_file_and_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("probe_points = 4  # too few\n")
        assert run(capsys, "verify", "table1", "--config", str(cfg))[0] == 2
        out = tmp_path / "r.json"
        code, _, _ = run(capsys, "verify", "table1", "--config", str(cfg), "--probe-points", "12", "--out", str(out))
        assert code == 0 and out.exists()

    def test_failing_suite_exits_one(self, capsys, tmp_path, monkeypatch):
        from dnsym import cli
        from dnsym.report import CheckResult

        monkeypatch.setitem(
            cli.SUITE_RUNNERS, "table1", lambda cfg: [CheckResult("x.fail", "test", "fail", "nonzero", 1.0)]
        )
        code, _, err = run(capsys, "verify", "table1", "--out", str(tmp_path / "r.json"))
        assert code == 1 and "x.fail" in err


class TestEval:
    def test_scaling_half(self, capsys, tmp_path):
        out = tmp_path / "h.csv"
        code, _, _ = run(capsys, "eval", "case-1.6-half", "--grid", "1:2,1:2,10", "--out", str(out))
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert code == 0 and len(rows) == 100
        assert max(float(r["residual"]) for r in rows) < 1e-6
        manifest = json.loads(out.with_suffix(".manifest.json").read_text())
        assert manifest["family"] == "case-1.6-half"

    def test_zero(self, capsys):
        code, out, _ = run(capsys, "eval", "zero", "--grid", "0:1,0:1,3")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and all(float(r["h"]) == 0 and float(r["w"]) == 0 for r in rows)

    def test_singular_rows(self, capsys):
        code, out, _ = run(capsys, "eval", "case-1.3", "--grid=-2:2,0:3,3")
        rows = list(csv.DictReader(io.StringIO(out)))
        bad = [r for r in rows if float(r["z1"]) ** 2 - 2 * float(r["z2"]) < 0]
        assert code == 0 and bad and all(r["h"] == "singular" for r in bad)

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "eval", "case-1.8-zero", "--grid", "0:1,0:0.5,2", "--format", "json")
        data = json.loads(out)
        assert code == 0 and len(data["rows"]) == 4 and data["manifest"]["valid_points"] == 4

    def test_unknown_family(self, capsys):
        assert run(capsys, "eval", "nope")[0] == 2

    def test_empty_valid_grid(self, capsys):
        assert run(capsys, "eval", "case-1.3", "--grid=-1:1,5:6,2")[0] == 1

    def test_byte_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for p in (a, b):
            run(capsys, "eval", "case-1.6-param-3/4", "--grid", "1:2,-0.5:0.5,4", "--seed", "7", "--out", str(p))
        assert a.read_bytes() == b.read_bytes()


class TestExportReport:
    def test_round_trip(self, capsys, tmp_path):
        rep = tmp_path / "r.json"
        run(capsys, "verify", "table1", "--out", str(rep))
        code, out, _ = run(capsys, "export-report", str(rep), "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == len(json.loads(rep.read_text()))
        code, out, _ = run(capsys, "export-report", str(rep))
        assert code == 0 and out.rstrip().endswith("passed")

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "export-report", str(tmp_path / "none.json"))[0] == 2


class TestConfig:
    def test_parse(self):
        assert parse_config_text("seed = 4\nprobe-points=10\n\n# x\n") == {"seed": 4, "probe_points": 10}

    def test_unknown_key(self):
        with pytest.raises(UsageError):
            parse_config_text("colour = red")

    def test_bad_value(self):
        with pytest.raises(UsageError):
            parse_config_text("seed = many")

    @settings(max_examples=40, deadline=None)
    @given(st.integers(-5, 100))
    def test_probe_points_bound(self, n):
        if n >= 8:
            assert RunConfig(probe_points=n).validate().probe.points == n
        else:
            with pytest.raises(UsageError):
                RunConfig(probe_points=n).validate()

    def test_grid_parse(self):
        assert parse_grid("1:2,-1:1,10", 2) == ([(1.0, 2.0), (-1.0, 1.0)], 10)

    @pytest.mark.parametrize("spec", ["1:2,10", "2:1,0:1,5", "1:2,0:1,1", "a:b,0:1,3"])
    def test_grid_rejects(self, spec):
        with pytest.raises(UsageError):
            parse_grid(spec, 2)
