import csv
import io
import json
import math

import pytest

from vlsf import cli
from vlsf.errors import ConvergenceError


def run(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _csv_rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_rates_values(capsys):
    code, out, _ = run(capsys, "--command", "rates", "--n-grid", "1000", "--k-set", "1,2,3,4", "--format", "csv")
    assert code == 0
    rows = {(r["regime"], r["K"]): r for r in _csv_rows(out)}
    assert float(rows[("K1_maxpower", "1")]["rate"]) == pytest.approx(0.2902, abs=2e-4)
    assert float(rows[("converse", "inf")]["rate"]) == pytest.approx(0.34693, abs=1e-4)
    for k, want in [("2", 0.853), ("3", 0.922), ("4", 0.954)]:
        assert float(rows[("finiteK", k)]["eps_capacity_ratio"]) == pytest.approx(want, abs=2e-3)


def test_rates_default_grid_monotone_in_k(capsys):
    code, out, _ = run(capsys, "--command", "rates", "--format", "csv")
    assert code == 0
    rows = _csv_rows(out)
    by_n = {}
    for r in rows:
        if r["regime"] == "finiteK":
            by_n.setdefault(r["N"], {})[r["K"]] = float(r["rate"])
    assert len(by_n) == 31
    for rates in by_n.values():
        assert rates["4"] > rates["3"] > rates["2"]


def test_rates_domain_gap_flagged(capsys):
    code, out, _ = run(capsys, "--command", "rates", "--n-grid", "10000", "--k-set", "5", "--format", "csv")
    assert code == 0
    row = [r for r in _csv_rows(out) if r["regime"] == "finiteK"][0]
    assert row["rate"] == "" and row["flag"].startswith("domain_gap")


def test_output_embeds_metadata_and_is_reproducible(capsys, tmp_path):
    args = ["--command", "bound", "--n-grid", "2000", "--k-set", "3", "--eps", "0.05", "--trials", "5000", "--seed", "7"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.run(args + ["--out", str(a)]) == 0
    assert cli.run(args + ["--out", str(b), "--workers", "1"]) == 0
    assert a.read_bytes() == b.read_bytes()
    meta = json.loads(a.read_text())["meta"]
    assert meta["seed"] == 7 and meta["version"] and meta["config"]["trials"] == 5000


def test_csv_metadata_line(capsys):
    _, out, _ = run(capsys, "--command", "table", "--format", "csv", "--seed", "3")
    first = out.splitlines()[0]
    assert first.startswith("# ")
    assert json.loads(first[2:])["seed"] == 3


def test_table_rows(capsys):
    code, out, _ = run(capsys, "--command", "table", "--format", "csv")
    assert code == 0
    rows = _csv_rows(out)
    kinf = [r for r in rows if r["scenario"] == "K=inf" and r["power"] == "max_power"][0]
    assert float(kinf["second_lower_value"]) < 0
    assert {r["scenario"] for r in rows} >= {"K=1", "K=2", "K=3", "K=4", "K=inf"}


def test_optimize_reports_design(capsys):
    code, out, _ = run(capsys, "--command", "optimize", "--n-grid", "1000", "--k-set", "4", "--eps", "1e-3")
    assert code == 0
    rec = json.loads(out)["records"][0]
    assert rec["predicted_rate_ratio"] == pytest.approx(0.954, abs=2e-3)
    assert {"p_zero", "gamma", "schedule"} <= set(rec["design"])


def test_round_trip_optimize_bound_simulate(capsys, tmp_path):
    design = tmp_path / "design.json"
    assert cli.run(["--command", "optimize", "--n-grid", "2000", "--k-set", "3,inf", "--eps", "0.05",
                    "--out", str(design)]) == 0
    code, out, _ = run(capsys, "--command", "bound", "--design", str(design), "--trials", "20000")
    assert code == 0
    recs = json.loads(out)["records"]
    assert recs[0]["bound"]["eps_upper"] <= 0.05 + 3 * recs[0]["bound"]["mc_stderr"]["eps_upper"]
    assert recs[1]["bound"]["mode"] == "renewal"
    code, out, _ = run(capsys, "--command", "simulate", "--design", str(design), "--trials", "2000")
    assert code == 0
    recs = json.loads(out)["records"]
    assert recs[0]["m_capped"] and recs[0]["m_simulated"] == 1024
    assert recs[0]["sim"]["trials"] == 2000
    assert "renewal" in recs[1]


def test_simulate_trace(tmp_path):
    trace = tmp_path / "t.csv"
    assert cli.run(["--command", "simulate", "--n-grid", "2000", "--k-set", "3", "--eps", "0.05",
                    "--trials", "300", "--m-cap", "16", "--trace", str(trace), "--out", str(tmp_path / "o.json")]) == 0
    assert trace.read_text().splitlines()[0] == "trial,W,D,tau,decision,error"


def test_snr_mismatch_is_validation_error(capsys, tmp_path):
    design = tmp_path / "design.json"
    assert cli.run(["--command", "optimize", "--n-grid", "2000", "--k-set", "3", "--eps", "0.05",
                    "--out", str(design)]) == 0
    code, _, err = run(capsys, "--command", "simulate", "--design", str(design), "--snr", "2")
    assert code == 3 and "SNR" in err


def test_infeasible_exit_code(capsys):
    code, out, _ = run(capsys, "--command", "optimize", "--n-grid", "20", "--k-set", "4", "--eps", "0.05")
    assert code == 2
    assert "infeasible" in json.loads(out)["records"][0]["error"]


@pytest.mark.parametrize(
    "argv",
    [
        ["--command", "nope"],
        ["--command", "rates", "--eps", "2"],
        ["--command", "rates", "--snr", "-1"],
        ["--command", "rates", "--k-set", "0"],
        ["--command", "bound", "--trials", "0"],
        ["--command", "rates", "--n-grid", "abc"],
    ],
)
def test_validation_exit_code(capsys, argv):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == 3


def test_bad_design_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    code, _, _ = run(capsys, "--command", "bound", "--design", str(bad))
    assert code == 3


def test_non_convergence_exit_code(capsys, monkeypatch):
    def boom(cfg):
        raise ConvergenceError("stuck", last=1.0)

    monkeypatch.setitem(cli.HANDLERS, "optimize", boom)
    code, _, err = run(capsys, "--command", "optimize")
    assert code == 4 and "stuck" in err


def test_selftest(capsys):
    code, out, _ = run(capsys, "--command", "selftest")
    assert code == 0
    assert all(r["passed"] for r in json.loads(out)["records"])
