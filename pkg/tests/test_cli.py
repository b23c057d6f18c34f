import json

import pytest
from conftest import FIXTURES

from idemext.cli import main, realize_json
from idemext.config import load_config
from idemext.serial import Codec, load_category

A2 = str(FIXTURES / "a2_balanced.json")


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", ["a2_balanced.json", "a3_balanced.json", "a2_formal.json"])
def test_validate_fixtures(capsys, name):
    code, out, _ = _run(capsys, "validate", str(FIXTURES / name))
    assert code == 0 and out.startswith("ok:")


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert _run(capsys, "validate", str(bad))[0] == 2
    assert _run(capsys, "validate", str(tmp_path / "missing.json"))[0] == 2
    raw = json.loads((FIXTURES / "a2_balanced.json").read_text())
    for key, value, field in [("prime", 4, "prime"),
                              ("quiver", {"vertices": 2, "arrows": [[0, 1], [1, 0]]}, "quiver"),
                              ("backend", {"kind": "other"}, "backend.kind")]:
        cfg = tmp_path / f"{key}.json"
        cfg.write_text(json.dumps(dict(raw, **{key: value})))
        code, _, err = _run(capsys, "validate", str(cfg))
        assert code == 3 and field in err
    not_idem = dict(raw)
    not_idem["idempotents"] = {"n": {"object": "P", "maps": [{"shape": [1, 1], "entries": [1]},
                                                             {"shape": [1, 1], "entries": [0]}]}}
    cfg = tmp_path / "idem.json"
    cfg.write_text(json.dumps(not_idem))
    code, _, err = _run(capsys, "validate", str(cfg))
    assert code == 3 and "idempotents.n" in err


def test_ext_running_example(capsys):
    assert _run(capsys, "ext", A2, "G", "G")[1].startswith("dim 1")
    assert _run(capsys, "ext", A2, "G", "G", "--idem-p", "e", "--idem-q", "f")[1].startswith("dim 1")
    assert _run(capsys, "ext", A2, "G", "G", "--idem-p", "f", "--idem-q", "e")[1] == "dim 0\n"
    code, _, err = _run(capsys, "ext", A2, "G", "G", "--idem-p", "zzz")
    assert code == 3 and "zzz" in err


@pytest.mark.parametrize("golden, args", [
    ("realize_a2_G_G_e_f.json", ["--coords", "1", "--idem-p", "e", "--idem-q", "f"]),
    ("realize_a2_G_G_plain.json", ["--coords", "1"]),
])
def test_realize_golden(capsys, golden, args):
    code, out, _ = _run(capsys, "realize", A2, "G", "G", *args)
    assert code == 0
    assert out == (FIXTURES / "golden" / golden).read_text()
    doc = json.loads(out)
    cat = load_category(doc["category"])
    t = Codec(cat.quiver, cat.field).load(doc["triangle"])
    assert not t.cls.cocycle.is_zero()


def test_realize_bad_coords(capsys):
    assert _run(capsys, "realize", A2, "G", "G", "--coords", "1,0")[0] == 3
    assert _run(capsys, "realize", A2, "G", "G", "--coords", "x")[0] == 3


def test_realize_is_deterministic():
    cfg = load_config(A2)
    assert realize_json(cfg, "G", "G", "1", "e", "f") == realize_json(cfg, "G", "G", "1", "e", "f")


def test_check_zero_trials(capsys, tmp_path):
    rep = tmp_path / "r.json"
    code, out, _ = _run(capsys, "check", "--trials", "0", "--report", str(rep))
    assert code == 0 and "0 passed, 0 failed" in out
    assert json.loads(rep.read_text())["totals"] == {"passed": 0, "failed": 0}


def test_check_bad_arguments(capsys, tmp_path):
    assert _run(capsys, "check", "--trials", "-1", "--report", str(tmp_path / "r.json"))[0] == 3
    assert _run(capsys, "check", "--quivers", "D4", "--report", str(tmp_path / "r.json"))[0] == 3
    assert _run(capsys, "check", "--primes", "6", "--report", str(tmp_path / "r.json"))[0] == 3
    assert _run(capsys, "check", "--no-grid", "--report", str(tmp_path / "r.json"))[0] == 3


def test_corrupted_fill_config_fails_and_replays(capsys, tmp_path):
    rep = tmp_path / "r.json"
    cfg = str(FIXTURES / "negative" / "corrupted_fill_config.json")
    code, out, _ = _run(capsys, "check", cfg, "--no-grid", "--trials", "2", "--report", str(rep))
    assert code == 1 and "FAIL karoubi.well_defined_fill" in out
    code, out, _ = _run(capsys, "replay", str(rep))
    assert code == 1
    assert "differs" not in out and "reproduced" in out


def test_clean_config_passes(capsys, tmp_path):
    rep = tmp_path / "r.json"
    code, _, _ = _run(capsys, "check", A2, "--no-grid", "--trials", "2", "--suite", "karoubi", "--report", str(rep))
    assert code == 0
    assert json.loads(rep.read_text())["config"]["extra_categories"]


def test_replay_passing_payload(capsys):
    code, out, _ = _run(capsys, "replay", str(FIXTURES / "regression" / "et4_delta3_outside_v.json"))
    assert code == 0 and "passes" in out
