"""Regenerate the shipped negative-control payloads and the realize golden file.

For every registered check, search seed-0 trials and single-entry faults on the
check's tamper target until the corrupted run fails; the failing payload
(inputs, fault and error) is written to fixtures/negative/<check>.json.
"""

from __future__ import annotations

import argparse
import itertools
import json
from pathlib import Path

from idemext.axiomlab import REGISTRY, TrialConfig, make_payload, replay
from idemext.cli import realize_json
from idemext.config import load_config

ROOT = Path(__file__).resolve().parents[1]
FIX = ROOT / "fixtures"


def find_failing(name: str, max_trials: int = 40) -> dict:
    target = REGISTRY[name].target
    for trial in range(max_trials):
        for vertex, row, col in itertools.product(range(3), range(2), range(2)):
            fault = {"target": target, "vertex": vertex, "row": row, "col": col}
            cfg = TrialConfig(seed=0, fault=tuple(sorted(fault.items())))
            try:
                payload = make_payload(cfg, name, trial)
            except Exception:
                continue
            res = replay(payload)
            if not res["ok"]:
                return dict(payload, error=res["error"])
    raise RuntimeError(f"no failing fault found for {name}")


def write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", nargs="*", help="restrict to these checks")
    args = ap.parse_args()
    names = sorted(REGISTRY) if not args.only else args.only
    for name in names:
        pl = find_failing(name)
        write_json(FIX / "negative" / f"{name}.json", pl)
        print(f"{name}: trial {pl['trial']} fault {pl['fault']} -> {pl['error']['type']}")
    base = json.loads((FIX / "a2_balanced.json").read_text())
    write_json(FIX / "negative" / "corrupted_fill_config.json", dict(base, fault={"target": "r", "vertex": 0, "row": 0, "col": 0}))
    cfg = load_config(FIX / "a2_balanced.json")
    (FIX / "golden").mkdir(exist_ok=True)
    (FIX / "golden" / "realize_a2_G_G_e_f.json").write_text(realize_json(cfg, "G", "G", "1", "e", "f"))
    (FIX / "golden" / "realize_a2_G_G_plain.json").write_text(realize_json(cfg, "G", "G", "1", None, None))
    print("golden files written")
    # a fill v for which the third class lies outside the (E, v) subgroup
    reg = make_payload(TrialConfig(seed=0), "karoubi.et4", 71)
    write_json(FIX / "regression" / "et4_delta3_outside_v.json", reg)
    print("regression payload written")


if __name__ == "__main__":
    main()
