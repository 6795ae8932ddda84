"""The thirteen acceptance criteria, one line each, plus controls on the driver."""
import json

import pytest

from flux import acceptance
from flux.acceptance import CRITERIA, FIXTURES, Report, RunConfig, reports_json, run_all, run_one

IDS = list(CRITERIA)


@pytest.fixture(scope="module")
def reports():
    return {r.id: r for r in run_all(RunConfig())}


@pytest.mark.parametrize("cid", IDS)
def test_criterion(cid, reports, capsys):
    r = reports[cid]
    with capsys.disabled():
        print("\n" + acceptance.summary_line(r))
    assert r.reference
    assert r.ok, {k: v for k, v in r.checks.items() if not v} or r.error


def test_mu4_is_flagged(reports):
    assert reports["10"].status == acceptance.FLAGGED


def test_corrupted_fixture_fails_with_localized_diff():
    fx = {**FIXTURES, "equivariant": {**FIXTURES["equivariant"], (0, 2): (3, 0)}}
    r = run_one("11", fixtures=fx)
    assert r.status == acceptance.FAIL
    assert [d["key"] for d in r.diff] == ["(0,2)"]
    fx = {**FIXTURES, "mu4_leading": {**FIXTURES["mu4_leading"], acceptance.Fraction(3, 2): -5}}
    r = run_one("10", fixtures=fx)
    assert r.status == acceptance.FAIL and [d["key"] for d in r.diff] == ["3/2"]


def test_errors_are_recorded_not_raised(monkeypatch):
    def boom(cfg, fx):
        raise ArithmeticError("synthetic")

    monkeypatch.setitem(CRITERIA, "3", boom)
    reps = run_all(RunConfig(only=("3", "11")))
    assert [r.id for r in reps] == ["3", "11"]
    assert reps[0].status == acceptance.FAIL and "synthetic" in reps[0].error
    assert reps[1].ok


def test_report_json_is_deterministic():
    cfg = RunConfig(only=("3", "9", "11"))
    a = reports_json(run_all(cfg), cfg)
    b = reports_json(run_all(cfg), cfg)
    assert a == b
    assert json.loads(a)["summary"] == {"3": "pass", "9": "pass", "11": "pass"}


def test_low_precision_still_passes():
    cfg = RunConfig(h_precision="1/2", only=("1", "8", "9"))
    assert all(r.ok for r in run_all(cfg))


def test_parallel_order_is_stable():
    cfg = RunConfig(only=("11", "3", "10"), jobs=3)
    assert [r.id for r in run_all(cfg)] == ["11", "3", "10"]


def test_report_shape():
    r = Report("x", "t", "ref", acceptance.PASS, {"a": True})
    doc = r.to_json()
    assert set(doc) == {"id", "title", "reference", "status", "checks", "computed", "expected",
                        "diff", "notes", "error"}
