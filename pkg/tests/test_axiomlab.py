import json

import pytest
from conftest import FIXTURES

from idemext.axiomlab import REGISTRY, TrialConfig, replay, run_suite
from idemext.axiomlab.runner import make_payload, run_payload, trial_rng
from idemext.serial import canonical_json

NEGATIVE = sorted(p for p in (FIXTURES / "negative").glob("*.json") if p.stem in REGISTRY)


def test_every_check_has_a_negative_fixture():
    assert {p.stem for p in NEGATIVE} == set(REGISTRY)
    assert len(REGISTRY) == 36
    assert {c.suite for c in REGISTRY.values()} == {"base", "karoubi", "weak"}


@pytest.mark.parametrize("path", NEGATIVE, ids=lambda p: p.stem)
def test_negative_fixture_fails_deterministically(path):
    payload = json.loads(path.read_text())
    first, second = replay(payload), replay(payload)
    assert not first["ok"]
    assert first == second
    assert canonical_json(first["error"]) == canonical_json(payload["error"])
    assert run_payload(payload).to_json() == run_payload(payload).to_json()
    clean = replay(dict(payload, fault=None))
    assert clean["ok"], clean


def test_trial_rng_is_stable():
    a = trial_rng(0, "karoubi.et4", 7).integers(0, 1000, size=5)
    b = trial_rng(0, "karoubi.et4", 7).integers(0, 1000, size=5)
    c = trial_rng(0, "karoubi.et4", 8).integers(0, 1000, size=5)
    assert (a == b).all() and not (a == c).all()


def test_reports_are_byte_identical():
    cfg = TrialConfig(seed=3, trials=4)
    r1, r2 = run_suite(cfg), run_suite(cfg)
    assert r1.to_json() == r2.to_json()
    assert r1.ok and r1.digest
    assert run_suite(TrialConfig(seed=4, trials=4)).digest != r1.digest


def test_parallel_matches_serial():
    cfg = TrialConfig(seed=1, trials=3, suite="karoubi")
    par = TrialConfig(seed=1, trials=3, suite="karoubi", workers=2)
    assert run_suite(cfg).to_dict()["digest"] == run_suite(par).to_dict()["digest"]


def test_report_schema():
    d = run_suite(TrialConfig(seed=0, trials=2, suite="weak")).to_dict()
    assert set(d) == {"config", "checks", "dims", "digest", "failures", "totals"}
    assert all(n.startswith("weak.") for n in d["checks"])
    assert d["totals"]["passed"] == 2 * len(d["checks"])


def test_payload_replays_passing_trial():
    pl = make_payload(TrialConfig(seed=0), "karoubi.idem_fill", 5)
    res = replay(pl)
    assert res["ok"]
    assert replay(dict(pl, data=None)) == res


def test_only_and_suite_selection():
    cfg = TrialConfig(suite="base", only=("base.et1", "karoubi.et4"))
    assert [c.name for c in cfg.checks()] == ["base.et1"]
    with pytest.raises(ValueError):
        TrialConfig(suite="nope").checks()
