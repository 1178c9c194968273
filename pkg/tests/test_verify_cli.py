import json

import pytest

from hyperfold.errors import BadParams, UnknownSuite
from hyperfold.verify_cli import SUITES, main, run, to_json


def test_zigzag_suite_passes():
    rep = run("zigzag", {"L": 10, "eps": 1e-4, "trials": 1000}, 42)
    assert rep["summary"]["fail_count"] == 0
    assert rep["summary"]["pass_count"] == rep["trials"] == 1000
    assert all("sinh_D" in r["case"] for r in rep["results"])


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_every_suite_passes_at_defaults(suite):
    rep = run(suite, {}, 0, trials=None if suite == "pipeline" else 20)
    s = rep["summary"]
    assert s["pass_count"] + s["fail_count"] == rep["trials"]
    assert s["fail_count"] == 0
    assert rep["schema"] == 1


def test_reports_are_reproducible():
    assert to_json(run("pipeline", {}, 7)) == to_json(run("pipeline", {}, 7))
    assert to_json(run("hexagon", {}, 1, 30)) != to_json(run("hexagon", {}, 2, 30))


def test_errors():
    with pytest.raises(UnknownSuite):
        run("unknown")
    with pytest.raises(BadParams, match="foo"):
        run("zigzag", {"foo": 1})
    with pytest.raises(BadParams):
        run("zigzag", {"L": "long"})
    with pytest.raises(BadParams):
        run("zigzag", trials=0)


def test_failures_counted():
    # at L = 1 the prediction misses by far more than the default tolerance
    rep = run("inefficiency", {"L": 1.0}, 0, 20)
    assert rep["summary"]["fail_count"] > 0
    assert rep["summary"]["max_violation"] > 0


def test_exit_codes(tmp_path, capsys):
    assert main(["--suite", "unknown"]) == 2
    assert main(["--suite", "zigzag", "--param", "foo=1"]) == 2
    assert main(["--suite", "zigzag", "--param", "nokey"]) == 2
    out = tmp_path / "r.json"
    assert main(["--suite", "hexagon", "--trials", "5", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["summary"]["pass_count"] == 5
    assert main(["--suite", "inefficiency", "--trials", "5", "--param", "L=1"]) == 1
    capsys.readouterr()
    assert main(["--suite", "pants", "--trials", "3", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "index,margin,pass" and len(lines) == 4
