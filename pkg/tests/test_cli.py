import csv
import io
import json
import subprocess
import sys

import pytest

from parrondo_rel.cli import CSV_COLUMNS, main
from parrondo_rel.ordering import GRID_CAVEAT
from parrondo_rel.report import TIMESTAMP_KEY, format_float, to_json


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def test_order_check_example1(capsys):
    status, out, _ = run(capsys, "order-check", "--model", "example1", "--lambda", "1", "--nu", "0.5")
    doc = json.loads(out)
    assert status == 0
    assert doc["schema_version"] == 1
    assert doc["result"]["condition_i"]["verdict"] == "holds"
    assert doc["result"]["condition_ii"]["verdict"] == "holds"
    assert doc["grid"]["points"] == 2000


def test_order_check_text_has_caveat(capsys):
    status, out, _ = run(capsys, "order-check", "--model", "example2", "--output", "text")
    assert status == 0 and GRID_CAVEAT in out


def test_order_check_failure_exit(capsys):
    # at nu = lambda the mixed-system slack is zero analytically; with no slack for rounding it fails
    status, out, _ = run(capsys, "order-check", "--model", "example2", "--nu", "1", "--tolerance", "1e-30")
    doc = json.loads(out)
    assert status == 1 and doc["exit_status"] == 1
    assert doc["result"]["condition_i"]["verdict"] == "fails"
    assert doc["result"]["condition_i"]["witness_t"] is not None


def test_zero_replications_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["game", "--model", "example1", "--lambda", "1", "--nu", "0.5", "--allocation", "randomized",
              "--replications", "0"])
    assert info.value.code == 2


def test_parameter_error_exit(capsys):
    status, out, err = run(capsys, "mean", "--model", "example1", "--lambda", "1", "--nu", "2")
    assert status == 2 and "nu" in err and out == ""


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit) as info:
        main(["mean", "--bogus"])
    assert info.value.code == 2


def test_mean_xstar(capsys):
    status, out, _ = run(capsys, "mean", "--model", "example1", "--lambda", "1", "--nu", "0.5", "--system", "Xstar")
    doc = json.loads(out)
    assert status == 0
    assert doc["result"]["mean"] == pytest.approx(0.8125, abs=1e-8)
    assert doc["result"]["closed_form"] == 0.8125


def test_json_round_trip_and_determinism(capsys):
    args = ["game", "--replications", "5000", "--seed", "11"]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    a, b = json.loads(first), json.loads(second)
    a.pop(TIMESTAMP_KEY), b.pop(TIMESTAMP_KEY)
    assert a == b
    strip = lambda s: "\n".join(line for line in s.splitlines() if TIMESTAMP_KEY not in line)
    assert strip(first) == strip(second)
    # re-serialising the parsed document reproduces every number exactly
    assert json.loads(to_json(a)) == a


def test_float_format():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(2.0) == "2.0"
    assert float(format_float(1 / 3)) == 1 / 3


@pytest.mark.parametrize("command,extra", [("eval", ["--grid-points", "20"]), ("mean", []),
                                           ("order-check", []), ("feasible", ["--grid-points", "50"]),
                                           ("bounds", ["--grid-points", "50"]),
                                           ("game", ["--replications", "1000"]),
                                           ("sweep", ["--replications", "500", "--nu", "0", "1"])])
def test_csv_columns(capsys, command, extra):
    status, out, _ = run(capsys, command, "--output", "csv", *extra)
    assert status == 0
    assert out.endswith("\r\n")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == CSV_COLUMNS[command]
    assert len(rows) > 1 and all(len(r) == len(rows[0]) for r in rows)


def test_eval_csv_values(capsys):
    _, out, _ = run(capsys, "eval", "--system", "F1", "--output", "csv", "--grid-points", "3", "--spacing",
                    "linear", "--t-max", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["t"]) for r in rows] == [0.0, 1.0, 2.0]
    assert float(rows[1]["survival"]) == pytest.approx(0.36787944117144233)


def test_feasible_example2(capsys):
    status, out, _ = run(capsys, "feasible", "--model", "example2", "--lambda", "3", "--nu", "3")
    doc = json.loads(out)
    assert status == 0 and doc["result"]["summary"]["infeasible_points"] == 0


def test_bounds_families(capsys):
    _, out, _ = run(capsys, "bounds", "--model", "example1")
    assert json.loads(out)["result"]["family"] == "a"
    _, out, _ = run(capsys, "bounds", "--model", "example2")
    assert json.loads(out)["result"]["family"] == "b"


def test_sweep_default_nu(capsys):
    _, out, _ = run(capsys, "sweep", "--lambda", "1", "2", "--replications", "200")
    rows = json.loads(out)["result"]["rows"]
    assert len(rows) == 2 * 5 * 2
    assert rows[0]["nu"] == 0.0 and rows[0]["allocation"] == "deterministic"


def test_sweep_error_row(capsys):
    status, out, _ = run(capsys, "sweep", "--lambda", "1", "--nu", "3", "--replications", "10")
    assert status == 1
    assert json.loads(out)["result"]["rows"][0]["error"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "parrondo_rel", "mean", "--output", "text"],
                          capture_output=True, text=True, check=True)
    assert "0.75" in proc.stdout
