"""Command-line front end: validate, ext, realize, check, replay.

Exit codes: 0 ok, 1 check failure, 2 parse error, 3 semantic error.

Report schema (``check``): {"config", "checks": {name: {"passed", "failed"}},
"dims": {name: {info-json: count}}, "digest", "failures": [payload], "totals"}.
Each failure payload holds {"check", "trial", "seed", "max_vertex_dim",
"category", "data", "fault", "error": {"type", "message"}} and is accepted
as-is by ``replay``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .axiomlab import TrialConfig, replay, run_suite
from .axiomlab.runner import quiver_named
from .config import CategoryConfig, ConfigError, ConfigParseError, load_config
from .exactlin import PrimeField
from .karoubi import f_space, r_realize
from .serial import Codec, canonical_json, dump_category, dump_matrix

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_SEMANTIC = 0, 1, 2, 3


def _load(path: str) -> CategoryConfig:
    return load_config(path)


def _coords(text: str | None, dim: int) -> np.ndarray:
    if text is None or text == "":
        vals = [0] * dim
    else:
        try:
            vals = [int(x) for x in text.split(",")]
        except ValueError:
            raise ConfigError("--coords", f"expected comma-separated integers, got {text!r}") from None
    if len(vals) != dim:
        raise ConfigError("--coords", f"the class space has dimension {dim}, got {len(vals)} coordinates")
    return np.array(vals, dtype=np.int64)


def cmd_validate(args) -> int:
    cfg = _load(args.config)
    cat = cfg.category
    print(f"ok: F_{cat.field.p}, {cat.quiver.vertices} vertices, {len(cat.quiver.arrows)} arrows, "
          f"{cat.kind} backend, {len(cfg.objects)} objects, {len(cfg.idempotents)} idempotents")
    return EXIT_OK


def cmd_ext(args) -> int:
    cfg = _load(args.config)
    zp = cfg.kar_object(args.quotient, args.idem_p)
    xq = cfg.kar_object(args.sub, args.idem_q)
    sp = f_space(cfg.category, zp, xq)
    print(f"dim {sp.dim}")
    for j in range(sp.dim):
        cls = sp.element(np.eye(sp.dim, dtype=np.int64)[j])
        print(json.dumps([dump_matrix(b) for b in cls.cocycle.blocks], sort_keys=True))
    return EXIT_OK


def realize_json(cfg: CategoryConfig, quotient: str, sub: str, coords: str | None,
                 idem_p: str | None, idem_q: str | None) -> str:
    zp = cfg.kar_object(quotient, idem_p)
    xq = cfg.kar_object(sub, idem_q)
    sp = f_space(cfg.category, zp, xq)
    t = r_realize(cfg.category, sp.element(_coords(coords, sp.dim)))
    codec = Codec(cfg.category.quiver, cfg.category.field)
    out = {"category": dump_category(cfg.category), "triangle": codec.dump(t)}
    return json.dumps(out, sort_keys=True, indent=1) + "\n"


def cmd_realize(args) -> int:
    cfg = _load(args.config)
    sys.stdout.write(realize_json(cfg, args.quotient, args.sub, args.coords, args.idem_p, args.idem_q))
    return EXIT_OK


def cmd_check(args) -> int:
    extra = ()
    fault = None
    if args.config is not None:
        cfg = _load(args.config)
        extra = (cfg.category,)
        fault = cfg.fault
    if args.trials < 0:
        raise ConfigError("--trials", "must be nonnegative")
    for qn in args.quivers:
        try:
            quiver_named(qn)
        except ValueError as exc:
            raise ConfigError("--quivers", str(exc)) from None
    for p in args.primes:
        try:
            PrimeField(p)
        except ValueError as exc:
            raise ConfigError("--primes", str(exc)) from None
    tc = TrialConfig(
        seed=args.seed,
        trials=args.trials,
        max_vertex_dim=args.max_dim,
        suite=args.suite,
        primes=tuple(args.primes) if args.grid else (),
        quivers=tuple(args.quivers) if args.grid else (),
        workers=args.workers,
        fault=None if fault is None else tuple(sorted(fault.items())),
        extra_categories=extra,
    )
    if not tc.categories():
        raise ConfigError("--no-grid", "no categories to test; pass a config")
    report = run_suite(tc)
    path = Path(args.report or f"report_{args.suite}_seed{args.seed}.json")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.to_json())
    tot = report.to_dict()["totals"]
    for name, c in report.checks.items():
        if c["failed"]:
            print(f"FAIL {name}: {c['failed']} of {c['passed'] + c['failed']}")
    print(f"{tot['passed']} passed, {tot['failed']} failed")
    print(f"report: {path}")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_replay(args) -> int:
    """Replay failure payloads (a payload file or a report); exit 1 if any reproduces a failure."""
    try:
        raw = json.loads(Path(args.payload).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{args.payload}: {exc}") from None
    payloads = raw["failures"] if isinstance(raw, dict) and "failures" in raw else [raw]
    failed = False
    for pl in payloads:
        if not isinstance(pl, dict) or "check" not in pl or "category" not in pl:
            raise ConfigError("payload", "expected a failure payload with 'check' and 'category'")
        res = replay(pl)
        if res["ok"]:
            print(f"{pl['check']} trial {pl.get('trial')}: passes")
            continue
        failed = True
        same = "error" not in pl or canonical_json(pl["error"]) == canonical_json(res["error"])
        tag = "reproduced" if same else "differs"
        print(f"{pl['check']} trial {pl.get('trial')}: fails ({tag}) {res['error']['type']}: {res['error']['message']}")
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="idemext", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="check a category description")
    p.add_argument("config")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("ext", help="dimension and basis of an extension group")
    p.add_argument("config")
    p.add_argument("quotient")
    p.add_argument("sub")
    p.add_argument("--idem-p", help="idempotent on the quotient object")
    p.add_argument("--idem-q", help="idempotent on the sub object")
    p.set_defaults(fn=cmd_ext)

    p = sub.add_parser("realize", help="realize a class as a triangle (JSON)")
    p.add_argument("config")
    p.add_argument("quotient")
    p.add_argument("sub")
    p.add_argument("--coords", help="comma-separated coordinates in the class basis (default zero)")
    p.add_argument("--idem-p")
    p.add_argument("--idem-q")
    p.set_defaults(fn=cmd_realize)

    p = sub.add_parser("check", help="run the randomized axiom suite")
    p.add_argument("config", nargs="?")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--suite", choices=["base", "karoubi", "weak", "all"], default="all")
    p.add_argument("--max-dim", type=int, default=3)
    p.add_argument("--primes", type=int, nargs="+", default=[2, 3])
    p.add_argument("--quivers", nargs="+", default=["A2", "A3"])
    p.add_argument("--no-grid", dest="grid", action="store_false", help="test only the config category")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--report", help="report path (default report_<suite>_seed<N>.json)")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("replay", help="replay failure payloads from a fixture or report")
    p.add_argument("payload")
    p.set_defaults(fn=cmd_replay)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigParseError, OSError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
