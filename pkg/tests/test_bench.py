import json

import pytest

from zbaire.bench import (
    REGISTRY,
    Window,
    WindowError,
    enumerate_window,
    oracle_sum_in_cert,
    run_scenario,
)
from zbaire.cli import main
from zbaire.ideals import IntervalCert, const_witness, make_slalom
from zbaire.sequences import Cuts, Periodic


def test_enumerate_window():
    assert list(enumerate_window(Window(1, 1))) == [(0,), (1,), (-1,)]
    ws = list(enumerate_window(Window(1, 2)))
    assert len(ws) == 9 and ws[0] == (0, 0)
    assert len(list(enumerate_window(Window(2, 3)))) == 125
    with pytest.raises(WindowError):
        enumerate_window(Window(2, 11))


def test_window_parse():
    assert Window.parse("2,6,3,1") == Window(2, 6, 3, 1)
    with pytest.raises(WindowError):
        Window.parse("a,b")
    with pytest.raises(WindowError):
        Window.parse("0,3")


def test_oracle_vacuous_and_failing():
    w = Window(2, 2, 2, 0)
    rep = oracle_sum_in_cert([], [[(0, 0)]], const_witness((0,)), w)
    assert rep.ok
    s = make_slalom({2: [(1, 1)]}, 2)
    rep = oracle_sum_in_cert([(1, 0)], [[(0, 1), (0, 0)]], s, w)
    assert not rep.ok
    assert rep.failures()[0].counterexample["sum"] == (1, 0)


def test_oracle_interval_cert():
    c = IntervalCert(Periodic((), (0,)), Cuts.uniform(1), "forall")
    w = Window(1, 2, 2, 0)
    assert oracle_sum_in_cert([(1, 1)], [[(0, 0), (1, 1)]], c, w).ok
    assert not oracle_sum_in_cert([(1, 1)], [[(-1, 0)]], c, w).ok


@pytest.mark.parametrize("name", sorted(set(REGISTRY) - {"silver-sum-translate"}))
def test_scenarios_pass(name):
    rep = run_scenario(name, Window(2, 6, 2, 0), {"count": 2} if name != "sacks-fusion" else {})
    assert rep.ok, [c.to_json() for c in rep.failures()]


def test_scenario_deterministic_and_unknown():
    a = run_scenario("laver-full-sum", Window(), {}, seed=5).dumps()
    b = run_scenario("laver-full-sum", Window(), {}, seed=5).dumps()
    assert a == b
    with pytest.raises(KeyError):
        run_scenario("no-such", Window())


def test_cli_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["scenario", "laver-full-sum", "--out", str(out)]) == 0
    assert main(["verify", "--report", str(out)]) == 0
    assert main(["scenario", "no-such"]) == 2
    assert main(["scenario", "laver-full-sum", "--window", "0,1"]) == 2
    cert = tmp_path / "s.json"
    cert.write_text(json.dumps(make_slalom({1: [(0,)], 2: [(1, 1)]}, 3).to_json()))
    assert main(["convert", "--cert", str(cert), "--window", "2,3"]) == 0
    assert main(["verify", "--cert", str(cert), "--x", "0,1"]) == 0
    assert main(["shrink", "sacks", "--steps", "2"]) == 0
    assert main(["escape", "miller-pair", "--steps", "4"]) == 0


def test_cli_reports_failure(tmp_path):
    # a stored report whose result no longer matches is flagged by verify
    out = tmp_path / "r.json"
    main(["scenario", "laver-full-sum", "--out", str(out)])
    doc = json.loads(out.read_text())
    doc["checks"][0]["pass"] = False
    out.write_text(json.dumps(doc))
    assert main(["verify", "--report", str(out)]) == 1
