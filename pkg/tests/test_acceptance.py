"""The seven acceptance criteria; each records one PASS/FAIL line in the summary."""

import functools
import json
import time

import pytest
from conftest import FIXTURES, grid_categories, record_acceptance

from idemext.axiomlab import REGISTRY, replay
from idemext.axiomlab.gen import gen_class, gen_idempotent, gen_kar_object, gen_object
from idemext.axiomlab.runner import trial_rng
from idemext.basecat import e_group, s_realize
from idemext.cli import main, realize_json
from idemext.config import load_config
from idemext.karoubi import KarMorphism, KarObject, f_space, idem_fill, kar_hom_dim, kar_sum, split_in_tilde
from idemext.weakcomp import DoesNotSplit, is_weak_object, split_idem_fill, splits_in_base, weak_object

CATS = grid_categories()


def _criterion(n):
    """Record the outcome of the decorated test body as criterion n."""
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                record_acceptance(n, False, f"{type(exc).__name__}: {exc}"[:200])
                raise
            record_acceptance(n, True, detail or "ok")
        return wrapper
    return deco


@_criterion(1)
def test_c1_fixture_values():
    t0 = time.perf_counter()
    cfg = load_config(FIXTURES / "a2_balanced.json")
    cat, g = cfg.category, cfg.objects["G"]
    ge, gf = cfg.kar_object("G", "e"), cfg.kar_object("G", "f")
    got = (e_group(cat, g, g).dim, f_space(cat, ge, gf).dim, f_space(cat, gf, ge).dim, kar_hom_dim(ge, ge))
    dt = time.perf_counter() - t0
    assert got == (1, 1, 0, 1), got
    assert dt < 1.0, dt
    return f"dims {got} in {dt:.3f}s"


@_criterion(2)
def test_c2_full_suite(tmp_path, capsys):
    t0 = time.perf_counter()
    totals = {}
    for seed in (0, 1):
        rep = tmp_path / f"seed{seed}.json"
        code = main(["check", "--suite", "all", "--seed", str(seed), "--trials", "200", "--report", str(rep)])
        d = json.loads(rep.read_text())
        totals[seed] = d["totals"]
        assert code == 0, (seed, d["totals"], [f["check"] for f in d["failures"]][:10])
        assert d["totals"]["failed"] == 0
        assert d["totals"]["passed"] == 200 * len(REGISTRY)
    capsys.readouterr()
    dt = time.perf_counter() - t0
    assert dt < 300, dt
    return f"{sum(t['passed'] for t in totals.values())} trials passed, 0 failed, {dt:.0f}s"


@_criterion(3)
def test_c3_split_in_tilde():
    for i in range(100):
        cat = CATS[i % len(CATS)]
        rng = trial_rng(0, "acceptance.split", i)
        obj, summands = gen_object(rng, cat, 3)
        p, keep, c = gen_idempotent(rng, cat, obj, summands)
        sigma, _, _ = gen_idempotent(rng, cat, obj, summands, within=(keep, c))
        a = KarObject(obj, p)
        s = KarMorphism(a, a, sigma)
        sp = split_in_tilde(a, s)
        assert sp.c_image @ sp.r_image == s
        assert sp.r_image @ sp.c_image == sp.image.identity()
    return "100 instances"


@_criterion(4)
def test_c4_weak_objects():
    cfg = load_config(FIXTURES / "a2_balanced.json")
    cat = cfg.category
    ge, gf = cfg.kar_object("G", "e"), cfg.kar_object("G", "f")
    assert splits_in_base(cat, ge.base, ge.idem) is DoesNotSplit
    assert is_weak_object(cat, kar_sum([ge, gf])) is True
    return "(G,e) does not split; (G⊕G, e⊕f) is weak"


@_criterion(5)
def test_c5_idem_fill():
    for i in range(100):
        cat = CATS[i % len(CATS)]
        rng = trial_rng(0, "acceptance.idem_fill", i)
        z, x = gen_kar_object(rng, cat, 3), gen_kar_object(rng, cat, 3)
        phi = gen_class(rng, cat, z, x)
        conf = s_realize(cat, phi.cocycle)
        e, f = x.idem, z.idem
        g = idem_fill(cat, phi.cocycle, e, f)
        assert g @ g == g
        assert g @ conf.x == conf.x @ e
        assert conf.y @ g == f @ conf.y
    for i in range(100):
        cat = CATS[i % len(CATS)]
        rng = trial_rng(0, "acceptance.split_fill", i)
        z, x = gen_kar_object(rng, cat, 3, weak=True), gen_kar_object(rng, cat, 3, weak=True)
        phi = gen_class(rng, cat, z, x)
        conf = s_realize(cat, phi.cocycle)
        sf = split_idem_fill(cat, conf, weak_object(cat, x).witness, weak_object(cat, z).witness)
        sf.witness.verify(sf.g)
        assert sf.g @ conf.x == conf.x @ x.idem and conf.y @ sf.g == z.idem @ conf.y
    return "100 fills, 100 split fills with verified witnesses"


@_criterion(6)
def test_c6_negative_controls():
    names = sorted(REGISTRY)
    for name in names:
        payload = json.loads((FIXTURES / "negative" / f"{name}.json").read_text())
        first, second = replay(payload), replay(payload)
        assert not first["ok"], name
        assert first == second, name
        assert first["error"] == payload["error"], name
    return f"{len(names)} checks fail on their fixtures and replay identically"


@_criterion(7)
def test_c7_determinism(tmp_path, capsys):
    outs = []
    for k in range(2):
        rep = tmp_path / f"r{k}.json"
        main(["check", "--seed", "0", "--trials", "10", "--report", str(rep)])
        outs.append(rep.read_bytes())
    capsys.readouterr()
    assert outs[0] == outs[1]
    cfg = load_config(FIXTURES / "a2_balanced.json")
    for golden, args in [("realize_a2_G_G_e_f.json", ("1", "e", "f")), ("realize_a2_G_G_plain.json", ("1", None, None))]:
        assert realize_json(cfg, "G", "G", *args) == (FIXTURES / "golden" / golden).read_text(), golden
    return "reports byte-identical, realize output matches golden files"


pytestmark = pytest.mark.acceptance
