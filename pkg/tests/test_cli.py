"""Command-line interface tests.

Everything runs in-process through cli.main so exit codes and output
land in capsys; one subprocess test covers the module entry point.
Frozen values come from the oracles already pinned in the library test
modules (log 210 for theta(10), the 29-below-100 zero count, the
squared tail sum at height 1000).
"""

import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from pntverify.chebyshev import chebyshev_at
from pntverify.cli import main

DATA = Path(__file__).resolve().parent.parent / "data" / "zeros_100k.txt"


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch, tmp_path):
    # keep ./pnt.conf and PNT_ZEROS from the developer machine out of
    # the picture; individual tests opt back in
    monkeypatch.delenv("PNT_ZEROS", raising=False)
    monkeypatch.chdir(tmp_path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCompute:
    def test_theta_at_ten(self, capsys):
        code, out, _ = run(capsys, "compute", "theta", "--x", "10")
        assert code == 0
        value = float(out.split("=")[1].split("(")[0])
        assert value == pytest.approx(math.log(210.0), rel=1e-14)
        assert out.startswith("theta(10) = 5.34710753")

    def test_pi_at_two(self, capsys):
        code, out, _ = run(capsys, "compute", "pi", "--x", "2")
        assert code == 0
        assert out == "pi(2) = 1\n"

    def test_mertens_json(self, capsys):
        code, out, _ = run(capsys, "compute", "mertens", "--x", "10",
                           "--json")
        assert code == 0
        d = json.loads(out)
        assert tuple(d) == ("x", "sum_logp_over_p", "sum_recip", "log_prod",
                            "err_bound")
        assert d["sum_recip"] == pytest.approx(1.1761904761904762,
                                               rel=1e-15)

    def test_psi_json_matches_library(self, capsys):
        code, out, _ = run(capsys, "compute", "psi", "--x", "100", "--json")
        assert code == 0
        d = json.loads(out)
        assert d["psi"] == chebyshev_at(100.0).psi
        assert d["err_bound"] > 0.0

    def test_psi1_text(self, capsys):
        code, out, _ = run(capsys, "compute", "psi1", "--x", "100")
        assert code == 0
        assert out.startswith("psi1(100) = ")

    def test_range_violation_exits_two(self, capsys):
        code, _, err = run(capsys, "compute", "psi", "--x", "1e12")
        assert code == 2
        assert "exceeds" in err

    def test_below_two_exits_two(self, capsys):
        code, _, err = run(capsys, "compute", "theta", "--x", "1.5")
        assert code == 2
        assert "need x >= 2" in err


class TestVerifyCommand:
    def test_certified_window_exits_zero(self, capsys):
        code, out, _ = run(capsys, "verify", "thm2_psi",
                           "--from", "101", "--to", "1000000")
        assert code == 0
        assert "certified: yes" in out
        assert "violations: 0" in out

    def test_violations_exit_one(self, capsys):
        code, out, _ = run(capsys, "verify", "moi_1",
                           "--from", "2", "--to", "100")
        assert code == 1
        assert "violations: 36" in out
        assert "last failure: 43.0979366" in out
        # the claim itself (from 43.1) is still certified in this window
        assert "certified: yes" in out

    def test_envelope_window_exits_zero(self, capsys):
        code, out, _ = run(capsys, "verify", "buthe_psi",
                           "--from", "11", "--to", "1000000")
        assert code == 0
        assert "certified: yes" in out

    def test_json_reports_are_byte_identical(self, capsys):
        code, first, _ = run(capsys, "verify", "moi_2",
                             "--from", "24.4", "--to", "10000", "--json")
        assert code == 0
        code, second, _ = run(capsys, "verify", "moi_2",
                              "--from", "24.4", "--to", "10000", "--json",
                              "--threads", "2")
        assert code == 0
        assert first == second
        d = json.loads(first)
        assert d["claim"]["certified"] is True
        assert d["wall_time_ms"] is None

    def test_report_and_csv_files(self, capsys, tmp_path):
        rpt = tmp_path / "out.json"
        csv = tmp_path / "viol.csv"
        code, _, _ = run(capsys, "verify", "thm2_theta",
                         "--from", "2", "--to", "10000",
                         "--report", str(rpt), "--csv", str(csv))
        assert code == 1
        d = json.loads(rpt.read_text())
        assert d["bound_id"] == "thm2_theta"
        assert len(d["violations"]) > 0
        lines = csv.read_text().splitlines()
        assert lines[0] == "bound_id,x,lhs_lo,lhs_hi,rhs_lo,rhs_hi"
        assert len(lines) == 1 + len(d["violations"])

    def test_unknown_bound_exits_two(self, capsys):
        code, _, err = run(capsys, "verify", "nope",
                           "--from", "2", "--to", "100")
        assert code == 2
        assert "unknown bound id" in err

    def test_missing_flags_exit_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "thm2_psi", "--from", "2"])
        assert exc.value.code == 2
        capsys.readouterr()


class TestCrossoverCommand:
    def test_threshold_text(self, capsys):
        code, out, _ = run(capsys, "crossover", "moi_4")
        assert code == 0
        assert "moi_4: threshold 24.2" in out

    def test_no_failure_marker(self, capsys):
        code, out, _ = run(capsys, "crossover", "buthe_psi",
                           "--search-from", "100", "--search-to", "200")
        assert code == 0
        assert "no failure in [100, 200]" in out

    def test_json_threshold(self, capsys):
        code, out, _ = run(capsys, "crossover", "moi_2", "--json")
        assert code == 0
        d = json.loads(out)
        assert d["rounded_threshold"] == 24.4
        assert d["no_failure"] is False


class TestZerosCommand:
    def test_count_with_flag(self, capsys):
        code, out, _ = run(capsys, "zeros", "count", "--up-to", "100",
                           "--zero-file", str(DATA))
        assert code == 0
        assert out == "N(100) = 29\n"

    def test_env_provides_table(self, capsys, monkeypatch):
        monkeypatch.setenv("PNT_ZEROS", str(DATA))
        code, out, _ = run(capsys, "zeros", "count", "--up-to", "1000")
        assert code == 0
        assert out == "N(1000) = 649\n"

    def test_env_overrides_flag(self, capsys, monkeypatch):
        monkeypatch.setenv("PNT_ZEROS", str(DATA))
        code, out, _ = run(capsys, "zeros", "count", "--up-to", "100",
                           "--zero-file", "/nonexistent/zeros.txt")
        assert code == 0
        assert out == "N(100) = 29\n"

    def test_missing_table_exits_two(self, capsys):
        code, _, err = run(capsys, "zeros", "count", "--up-to", "100")
        assert code == 2
        assert "no zero file configured" in err

    def test_squared_sum_frozen_value(self, capsys):
        code, out, _ = run(capsys, "zeros", "sum", "--squared",
                           "--up-to", "1000", "--zero-file", str(DATA))
        assert code == 0
        value = float(out.split("=")[1].split("(")[0])
        assert value == pytest.approx(1.88720736247630319e-3, rel=1e-12)
        assert "tail above table" in out

    def test_explicit_psi1(self, capsys):
        code, out, _ = run(capsys, "zeros", "explicit-psi1",
                           "--x", "1000.5", "--zero-file", str(DATA))
        assert code == 0
        assert "explicit_psi1(1000.5) = 498354.9694633696" in out

    def test_ingest_cache_round_trip(self, capsys, tmp_path):
        src = tmp_path / "small.txt"
        src.write_text(
            "# precision 1e-9\n14.134725\n21.022040\n25.010858\n"
            "30.424876\n32.935062\n"
        )
        cache = tmp_path / "small.ztbl"
        code, out, _ = run(capsys, "zeros", "ingest", str(src),
                           "--cache", str(cache))
        assert code == 0
        assert "5 ordinates" in out
        assert cache.is_file()
        code, out, _ = run(capsys, "zeros", "count", "--up-to", "26",
                           "--zero-file", str(cache))
        assert code == 0
        assert out == "N(26) = 3\n"

    def test_ingest_rejects_disorder(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("14.1\n13.9\n")
        code, _, err = run(capsys, "zeros", "ingest", str(bad))
        assert code == 2
        assert "not ascending" in err


class TestTableAndAudit:
    def test_table_all_rows_pass(self, capsys):
        code, out, _ = run(capsys, "table", "suffcond")
        assert code == 0
        lines = out.splitlines()
        assert sum("PASS" in ln for ln in lines) == 8
        assert sum("theta extension" in ln for ln in lines) == 2
        assert lines[-1].startswith("8/8 rows pass")

    def test_table_json(self, capsys):
        code, out, _ = run(capsys, "table", "suffcond", "--json")
        assert code == 0
        rows = json.loads(out)
        assert len(rows) == 8
        assert all(r["passes"] for r in rows)
        assert [r["theta"] for r in rows] == [False] * 7 + [True]

    def test_audit_passes(self, capsys):
        code, out, _ = run(capsys, "audit")
        assert code == 0
        assert "13/13 checks pass" in out

    def test_audit_json(self, capsys):
        code, out, _ = run(capsys, "audit", "--json")
        assert code == 0
        checks = json.loads(out)
        assert len(checks) == 13
        assert all(c["passed"] for c in checks)
        assert all(c["margin"] > 0.0 for c in checks)


class TestConfigFile:
    def test_desk_max_from_conf(self, capsys, tmp_path):
        (tmp_path / "pnt.conf").write_text("desk_max=1000\n")
        code, _, err = run(capsys, "compute", "psi", "--x", "2000")
        assert code == 2
        assert "exceeds limit 1000" in err

    def test_output_json_from_conf(self, capsys, tmp_path):
        (tmp_path / "pnt.conf").write_text("output=json\n")
        code, out, _ = run(capsys, "compute", "pi", "--x", "2")
        assert code == 0
        assert json.loads(out)["pi"] == 1

    def test_explicit_config_path(self, capsys, tmp_path):
        conf = tmp_path / "other.conf"
        conf.write_text("zero_file=" + str(DATA) + "\n")
        code, out, _ = run(capsys, "--config", str(conf),
                           "zeros", "count", "--up-to", "100")
        assert code == 0
        assert out == "N(100) = 29\n"

    def test_unknown_key_rejected(self, capsys, tmp_path):
        (tmp_path / "pnt.conf").write_text("desk_mx=1000\n")
        code, _, err = run(capsys, "compute", "pi", "--x", "2")
        assert code == 2
        assert "unknown key" in err

    def test_flag_beats_conf(self, capsys, tmp_path):
        (tmp_path / "pnt.conf").write_text("desk_max=1000\n")
        code, out, _ = run(capsys, "compute", "pi", "--x", "2000",
                           "--desk-max", "10000")
        assert code == 0
        assert out == "pi(2000) = 303\n"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pntverify", "compute", "pi", "--x", "2"],
        capture_output=True, text=True,
        cwd=Path(__file__).resolve().parent.parent,
    )
    assert proc.returncode == 0
    assert proc.stdout == "pi(2) = 1\n"
