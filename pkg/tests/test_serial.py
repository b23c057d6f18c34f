import json

import numpy as np
from conftest import grid_categories
from hypothesis import given
from hypothesis import strategies as st

from idemext.axiomlab.gen import gen_class, gen_kar_object
from idemext.basecat import formal
from idemext.karoubi import r_realize
from idemext.quiverrep import Rep
from idemext.serial import Codec, canonical_json, dump_category, load_category
from idemext.weakcomp import weak_object

cats = st.sampled_from(grid_categories())
seeds = st.integers(0, 2 ** 32 - 1)


def _round(codec, v):
    return codec.load(json.loads(json.dumps(codec.dump(v))))


@given(cats, seeds)
def test_round_trip_triangle(cat, seed):
    rng = np.random.default_rng(seed)
    z, x = gen_kar_object(rng, cat, 2), gen_kar_object(rng, cat, 2)
    t = r_realize(cat, gen_class(rng, cat, z, x))
    codec = Codec(cat.quiver, cat.field)
    back = _round(codec, t)
    assert back == t
    assert back.base == t.base
    data = {"t": t, "objs": [z, x], "n": 3, "flag": True, "none": None}
    assert _round(codec, data) == {"t": t, "objs": [z, x], "n": 3, "flag": True, "none": None}


@given(cats, seeds)
def test_round_trip_witness(cat, seed):
    rng = np.random.default_rng(seed)
    k = gen_kar_object(rng, cat, 2, weak=True)
    w = weak_object(cat, k).witness
    assert _round(Codec(cat.quiver, cat.field), w) == w


def test_category_round_trip(a2, a2_formal):
    for cat in (a2.category, a2_formal.category):
        assert load_category(json.loads(json.dumps(dump_category(cat)))) == cat
    for cat in grid_categories():
        assert load_category(dump_category(cat)) == cat
    q, f = a2.category.quiver, a2.category.field
    cat = formal(q, f, [Rep.simple(q, f, 0)], bound=2)
    assert load_category(dump_category(cat)) == cat


def test_canonical_json_is_key_order_independent():
    assert canonical_json({"b": 1, "a": [1, 2]}) == canonical_json({"a": [1, 2], "b": 1})
    assert canonical_json({"a": 1}) == '{"a":1}'
