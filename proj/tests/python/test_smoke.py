import json
import math
import os
from pathlib import Path

import pytest

import mdnet

DATA = Path(os.environ.get("MDNET_TEST_DATA", Path(__file__).resolve().parents[1] / "data"))


def load(name):
    return json.loads((DATA / name).read_text())


def test_functionals_on_fixtures():
    assert mdnet.evaluate("chsh", load("pr_box.json")) == pytest.approx(4.0, abs=1e-12)
    assert mdnet.evaluate("mermin", load("ghz_mermin.json")) == pytest.approx(4.0, abs=1e-9)
    assert mdnet.evaluate("chsh", mdnet.fritz_conditional(1.0)) == pytest.approx(2 * math.sqrt(2), abs=1e-9)
    i, j, value = mdnet.bilocality(mdnet.bilocality_quantum_behavior())
    assert value == pytest.approx(2 * math.sqrt(2), abs=1e-9)
    assert mdnet.no_signaling_violation(load("pr_box.json")) < 1e-12


def test_lower_bound_formulas():
    assert mdnet.chsh_mi_lower(2.0) == pytest.approx(0.0, abs=1e-12)
    assert 0.0460 <= mdnet.chsh_mi_lower(2 * math.sqrt(2)) <= 0.0466
    assert mdnet.mermin_mi_lower(4.0, "uniform-8") == pytest.approx(1 - 0.5 * math.log2(3), abs=1e-12)
    assert mdnet.mermin_mi_lower(3.0, "odd-4") == pytest.approx(mdnet.chsh_mi_lower(3.0), abs=1e-12)


def test_theta_and_fritz():
    t = mdnet.theta(mdnet.fritz_distribution(0.5), "x", "y", ["r0", "r1"])
    assert t["value"] == pytest.approx(mdnet.fritz_theta_distribution(0.5), abs=1e-9)
    assert t["argmin"] in (1, 2, 3)
    assert mdnet.fritz_theta_paper_formula(0.5) == pytest.approx(1.5447367178, abs=1e-9)
    assert 0.993 <= mdnet.critical_visibility("paper-formula", "mi") <= 0.995


def test_oracle_and_exact_lp():
    assert mdnet.max_over_deterministic("chsh") == (2.0, 16)
    assert mdnet.max_over_deterministic("mermin") == (2.0, 64)
    rows = mdnet.verify_lemma1()
    assert len(rows) == 3
    assert all(optimum == "0/1" and ok for _, optimum, ok in rows)


def test_figure7_columns():
    rows = mdnet.figure7(101)
    assert all(m >= c for _, c, m in rows)
    assert rows[-1][1] == pytest.approx(0.0463, abs=1e-4)


def test_cli_and_errors():
    code, out, _ = mdnet.run_cli("eval", DATA / "pr_box.json", "-f", "chsh")
    assert (code, out) == (0, "4.000000000\n")
    assert mdnet.run_cli()[0] == 2
    with pytest.raises(mdnet.ParseError):
        mdnet.evaluate("chsh", "{not json")
    with pytest.raises(mdnet.Error):
        mdnet.evaluate("chsh", load("ghz_mermin.json"))
    with pytest.raises(ValueError):
        mdnet.max_over_deterministic("cglmp:5")
