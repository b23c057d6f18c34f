"""Suite runner, deterministic reports and failure replay."""

from __future__ import annotations

import hashlib
import json
import zlib
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from ..basecat import BaseCategory, balanced
from ..exactlin import PrimeField
from ..quiverrep import DEFAULT_BOUNDS, Quiver, SearchBounds
from ..serial import Codec, canonical_json, dump_category, load_category
from . import checks_base, checks_kar, checks_weak
from .core import REGISTRY, Check, Tamper

SUITES = ("base", "karoubi", "weak")
_MODULES = (checks_base, checks_kar, checks_weak)  # importing registers the checks


def quiver_named(name: str) -> Quiver:
    if not name.startswith("A") or not name[1:].isdigit() or int(name[1:]) < 1:
        raise ValueError(f"unknown quiver {name!r}; expected A<n> (linear orientation)")
    return Quiver.linear(int(name[1:]))


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 0
    trials: int = 200
    max_vertex_dim: int = 3
    primes: tuple[int, ...] = (2, 3)
    quivers: tuple[str, ...] = ("A2", "A3")
    suite: str = "all"
    bounds: SearchBounds = DEFAULT_BOUNDS
    workers: int = 1
    fault: tuple[tuple[str, Any], ...] | None = None
    extra_categories: tuple[BaseCategory, ...] = ()
    only: tuple[str, ...] | None = None

    def categories(self) -> list[BaseCategory]:
        cats = [balanced(quiver_named(q), PrimeField(p), bounds=self.bounds) for p in self.primes for q in self.quivers]
        for c in self.extra_categories:
            if c not in cats:
                cats.append(c)
        return cats

    def checks(self) -> list[Check]:
        if self.suite != "all" and self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}")
        names = sorted(n for n, c in REGISTRY.items() if self.suite in ("all", c.suite))
        if self.only is not None:
            names = [n for n in names if n in self.only]
        return [REGISTRY[n] for n in names]

    def fault_dict(self) -> dict | None:
        return None if self.fault is None else dict(self.fault)

    def describe(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "max_vertex_dim": self.max_vertex_dim,
            "primes": list(self.primes),
            "quivers": list(self.quivers),
            "suite": self.suite,
            "bounds": asdict(self.bounds),
            "fault": self.fault_dict(),
            "extra_categories": [dump_category(c) for c in self.extra_categories],
            "only": None if self.only is None else list(self.only),
        }


@dataclass
class Report:
    config: dict
    checks: dict[str, dict[str, int]] = field(default_factory=dict)
    dims: dict[str, dict[str, int]] = field(default_factory=dict)
    digest: str = ""
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"config": self.config, "checks": self.checks, "dims": self.dims,
                "digest": self.digest, "failures": self.failures,
                "totals": {"passed": sum(c["passed"] for c in self.checks.values()),
                           "failed": sum(c["failed"] for c in self.checks.values())}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def trial_rng(seed: int, name: str, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(name.encode()), trial]))


def _error(exc: BaseException) -> dict:
    return {"type": type(exc).__name__, "message": str(exc)}


def execute(check: Check, cat: BaseCategory, data: dict, fault: dict | None) -> tuple[bool, Any]:
    """Run one verification; returns (ok, info) or (False, error)."""
    tam = Tamper(fault)
    try:
        info = check.verify(cat, data, tam)
    except Exception as exc:  # failures are report entries
        return False, _error(exc)
    return True, info


def run_one(cfg: TrialConfig, check: Check, trial: int) -> dict:
    cats = cfg.categories()
    cat = cats[trial % len(cats)]
    codec = Codec(cat.quiver, cat.field)
    rng = trial_rng(cfg.seed, check.name, trial)
    payload = {"check": check.name, "trial": trial, "seed": cfg.seed, "max_vertex_dim": cfg.max_vertex_dim,
               "category": dump_category(cat), "fault": cfg.fault_dict(), "data": None}
    try:
        data = check.gen(rng, cat, cfg.max_vertex_dim)
        payload["data"] = codec.dump(data)
    except Exception as exc:
        return {"check": check.name, "trial": trial, "ok": False, "error": _error(exc), "payload": payload}
    ok, out = execute(check, cat, data, cfg.fault_dict())
    rec = {"check": check.name, "trial": trial, "ok": ok}
    if ok:
        rec["info"] = out
    else:
        rec["error"] = out
        rec["payload"] = payload
    return rec


def _run_trials(cfg: TrialConfig, trials: list[int]) -> list[dict]:
    checks = cfg.checks()
    return [run_one(cfg, c, t) for t in trials for c in checks]


def run_suite(cfg: TrialConfig) -> Report:
    trials = list(range(cfg.trials))
    if cfg.workers > 1 and len(trials) > 1:
        chunks = [trials[i::cfg.workers] for i in range(cfg.workers)]
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            parts = list(ex.map(_run_trials, [cfg] * len(chunks), chunks))
        records = [r for part in parts for r in part]
    else:
        records = _run_trials(cfg, trials)
    return build_report(cfg.describe(), records, [c.name for c in cfg.checks()])


def build_report(config: dict, records: list[dict], names: list[str]) -> Report:
    records = sorted(records, key=lambda r: (r["trial"], r["check"]))
    rep = Report(config)
    for n in names:
        rep.checks[n] = {"passed": 0, "failed": 0}
        rep.dims[n] = {}
    hist: dict[str, Counter] = {n: Counter() for n in names}
    h = hashlib.sha256()
    for r in records:
        name = r["check"]
        rep.checks.setdefault(name, {"passed": 0, "failed": 0})
        hist.setdefault(name, Counter())
        if r["ok"]:
            rep.checks[name]["passed"] += 1
            hist[name][canonical_json(r["info"])] += 1
            h.update(canonical_json([name, r["trial"], r["info"]]).encode())
        else:
            rep.checks[name]["failed"] += 1
            payload = dict(r["payload"], error=r["error"])
            rep.failures.append(payload)
            h.update(canonical_json([name, r["trial"], r["error"]]).encode())
    rep.dims = {n: dict(sorted(c.items())) for n, c in hist.items()}
    rep.digest = h.hexdigest()
    return rep


def replay(payload: dict) -> dict:
    """Re-run a failure payload; returns {"ok", "error"} for comparison."""
    check = REGISTRY[payload["check"]]
    cat = load_category(payload["category"])
    codec = Codec(cat.quiver, cat.field)
    if payload.get("data") is None:
        rng = trial_rng(int(payload["seed"]), check.name, int(payload["trial"]))
        try:
            data = check.gen(rng, cat, int(payload.get("max_vertex_dim", 3)))
        except Exception as exc:
            return {"ok": False, "error": _error(exc)}
    else:
        data = codec.load(payload["data"])
    ok, out = execute(check, cat, data, payload.get("fault"))
    return {"ok": True, "info": out} if ok else {"ok": False, "error": out}


def run_payload(payload: dict) -> Report:
    """A one-record report for a stored payload (used by negative controls)."""
    res = replay(payload)
    rec = {"check": payload["check"], "trial": int(payload.get("trial", 0)), "ok": res["ok"]}
    if res["ok"]:
        rec["info"] = res["info"]
    else:
        rec["error"] = res["error"]
        rec["payload"] = {k: v for k, v in payload.items() if k != "error"}
    return build_report({"payload": payload["check"]}, [rec], [payload["check"]])


def make_payload(cfg: TrialConfig, check_name: str, trial: int) -> dict:
    """The full replayable input of one trial (with the configured fault, if any)."""
    cats = cfg.categories()
    cat = cats[trial % len(cats)]
    check = REGISTRY[check_name]
    data = check.gen(trial_rng(cfg.seed, check_name, trial), cat, cfg.max_vertex_dim)
    return {"check": check_name, "trial": trial, "seed": cfg.seed, "max_vertex_dim": cfg.max_vertex_dim,
            "category": dump_category(cat), "fault": cfg.fault_dict(), "data": Codec(cat.quiver, cat.field).dump(data)}
