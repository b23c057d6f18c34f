"""Checks on the base category: exactness, ET1-ET4 and the cone constructions."""

from __future__ import annotations

from ..basecat import (
    conflation_class_ok,
    conflation_sum,
    e_group,
    et3_on,
    et4_on,
    fill_between,
    mapping_cone_base,
    mapping_cone_dual,
    opposite_transport as op,
    reduce,
    s_realize,
    same_class,
    seq_equivalent,
    solve_morphism,
    summand_cancel,
)
from ..karoubi import FTriangle, embed, f_biadditivity_check, f_exactness_check
from ..quiverrep import (
    Conflation,
    RepMorphism,
    ext_direct_sum,
    hom_basis,
    morphism_block,
    morphism_column,
    morphism_row,
    pullback,
    pushforward,
    ses_to_cocycle,
)
from .core import Tamper, combine, kernel_combo, register, require, vec
from .gen import gen_automorphism, gen_constrained, gen_ext, gen_iso_copy, gen_morphism, gen_object


def _obj(rng, cat, max_dim):
    return gen_object(rng, cat, max_dim)[0]


def _delta(rng, cat, max_dim):
    a, c = _obj(rng, cat, max_dim), _obj(rng, cat, max_dim)
    return gen_ext(rng, cat, c, a)


# weak kernels and cokernels

def _gen_wkc(rng, cat, max_dim):
    delta = _delta(rng, cat, max_dim)
    conf = s_realize(cat, delta)
    t = _obj(rng, cat, max_dim)
    g = gen_constrained(rng, conf.mid, t, pre=[(conf.x, RepMorphism.zero(conf.sub, t))])
    g2 = gen_constrained(rng, t, conf.mid, post=[(conf.y, RepMorphism.zero(t, conf.quotient))])
    return {"delta": delta, "g": g, "g2": g2}


@register("base.weak_kernel_cokernel", _gen_wkc, target="h")
def _verify_wkc(cat, d, tam: Tamper) -> dict:
    conf = s_realize(cat, d["delta"])
    g, g2 = d["g"], d["g2"]
    h = tam("h", solve_morphism(conf.quotient, g.dst, pre=[(conf.y, g)]))
    require(h @ conf.y == g, "h ∘ y != g")
    k = tam("k", solve_morphism(g2.src, conf.sub, post=[(conf.x, g2)]))
    require(conf.x @ k == g2, "x ∘ k != g")
    return {"dims": [list(conf.sub.dims), list(conf.quotient.dims)]}


# long exact sequences

def _gen_long_exact(rng, cat, max_dim):
    return {"delta": _delta(rng, cat, max_dim), "test": _obj(rng, cat, max_dim)}


@register("base.long_exact", _gen_long_exact, target="delta")
def _verify_long_exact(cat, d, tam: Tamper) -> dict:
    conf = s_realize(cat, d["delta"])
    t = embed(conf)
    cls = tam("delta", t.cls)
    t = FTriangle(t.u, t.v, cls, conf)
    return f_exactness_check(cat, t, embed(d["test"]))


# 2-out-of-3 for morphisms of conflations

def _gen_two_of_three(rng, cat, max_dim):
    delta = _delta(rng, cat, max_dim)
    return {"delta": delta, "a": gen_automorphism(rng, delta.sub), "c": gen_automorphism(rng, delta.quotient)}


@register("base.two_out_of_three", _gen_two_of_three, target="b")
def _verify_two_of_three(cat, d, tam: Tamper) -> dict:
    delta, a, c = d["delta"], d["a"], d["c"]
    delta2 = reduce(cat, pullback(c.inverse(), pushforward(a, delta)))
    s1, s2 = s_realize(cat, delta), s_realize(cat, delta2)
    b = tam("b", fill_between(cat, s1, s2, a, c))
    require(b @ s1.x == s2.x @ a, "left square does not commute")
    require(s2.y @ b == c @ s1.y, "right square does not commute")
    require(b.is_iso(), "middle map is not invertible")
    return {"ranks": list(b.ranks())}


# closure under isomorphism

def _gen_closed_iso(rng, cat, max_dim):
    delta = _delta(rng, cat, max_dim)
    conf = s_realize(cat, delta)
    _, phi = gen_iso_copy(rng, conf.mid)
    return {"delta": delta, "a": gen_automorphism(rng, delta.sub), "c": gen_automorphism(rng, delta.quotient),
            "phi": phi}


@register("base.closed_under_iso", _gen_closed_iso, target="y")
def _verify_closed_iso(cat, d, tam: Tamper) -> dict:
    delta, a, c, phi = d["delta"], d["a"], d["c"], d["phi"]
    conf = s_realize(cat, delta)
    x2 = phi @ conf.x @ a.inverse()
    y2 = tam("y", c @ conf.y @ phi.inverse())
    cls = reduce(cat, pushforward(a, pullback(c.inverse(), delta)))
    moved = Conflation(x2, y2, cls)
    require(conflation_class_ok(cat, moved), "isomorphic sequence does not realize the transported class")
    seq_equivalent(cat, moved, s_realize(cat, cls))
    return {"dims": list(conf.mid.dims)}


# ET2 on direct sums

def _gen_direct_sum(rng, cat, max_dim):
    return {"d1": _delta(rng, cat, max_dim), "d2": _delta(rng, cat, max_dim)}


@register("base.direct_sum", _gen_direct_sum, target="x")
def _verify_direct_sum(cat, d, tam: Tamper) -> dict:
    s1, s2 = s_realize(cat, d["d1"]), s_realize(cat, d["d2"])
    total = conflation_sum(s1, s2)
    moved = Conflation(tam("x", total.x), total.y, total.cls)
    seq_equivalent(cat, moved, s_realize(cat, ext_direct_sum(d["d1"], d["d2"])))
    return {"dims": list(total.mid.dims)}


# ET1 biadditivity

def _gen_et1(rng, cat, max_dim):
    a, c = _obj(rng, cat, max_dim), _obj(rng, cat, max_dim)
    a2, c2 = _obj(rng, cat, max_dim), _obj(rng, cat, max_dim)
    return {
        "d1": gen_ext(rng, cat, c, a), "d2": gen_ext(rng, cat, c, a),
        "a1": gen_morphism(rng, a, a2), "a2": gen_morphism(rng, a, a2),
        "c1": gen_morphism(rng, c2, c), "c2": gen_morphism(rng, c2, c),
    }


@register("base.et1", _gen_et1, target="push")
def _verify_et1(cat, d, tam: Tamper) -> dict:
    d1, d2, a1, a2, c1, c2 = (d[k] for k in ("d1", "d2", "a1", "a2", "c1", "c2"))
    lhs = tam("push", pushforward(a1 + a2, d1))
    require(same_class(cat, lhs, pushforward(a1, d1) + pushforward(a2, d1)), "(a1 + a2)_* is not additive")
    require(same_class(cat, pushforward(a1, d1 + d2), pushforward(a1, d1) + pushforward(a1, d2)),
            "a_* is not additive in δ")
    require(same_class(cat, pullback(c1 + c2, d1), pullback(c1, d1) + pullback(c2, d1)), "(c1 + c2)^* is not additive")
    require(same_class(cat, pullback(c1, d1 + d2), pullback(c1, d1) + pullback(c1, d2)), "c^* is not additive in δ")
    require(same_class(cat, pushforward(a1, pullback(c1, d1)), pullback(c1, pushforward(a1, d1))),
            "pushforward and pullback do not commute")
    dims = f_biadditivity_check(cat, embed(d1.quotient), embed(d1.sub), embed(a1.dst))
    return dims


# ET3 and its dual

def _square_pair(rng, cat, left, right, lhs, rhs):
    """Random (a, b) in left × right with lhs(b) = rhs(a) on bases."""
    la, rb = hom_basis(*left), hom_basis(*right)
    p = cat.field.p
    cols = [-vec(rhs(m)) for m in la] + [vec(lhs(m)) for m in rb]
    c = kernel_combo(rng, cols, p)
    a = combine(la, c[: len(la)], RepMorphism.zero(*left))
    b = combine(rb, c[len(la):], RepMorphism.zero(*right))
    return a, b


def _gen_et3(rng, cat, max_dim):
    d1, d2 = _delta(rng, cat, max_dim), _delta(rng, cat, max_dim)
    s1, s2 = s_realize(cat, d1), s_realize(cat, d2)
    a, b = _square_pair(rng, cat, (s1.sub, s2.sub), (s1.mid, s2.mid), lambda m: m @ s1.x, lambda m: s2.x @ m)
    return {"d1": d1, "d2": d2, "a": a, "b": b}


@register("base.et3", _gen_et3, target="c")
def _verify_et3(cat, d, tam: Tamper) -> dict:
    s1, s2 = s_realize(cat, d["d1"]), s_realize(cat, d["d2"])
    a, b = d["a"], d["b"]
    c = tam("c", et3_on(cat, s1, s2, a, b))
    require(c @ s1.y == s2.y @ b, "right square does not commute")
    require(same_class(cat, pushforward(a, s1.cls), pullback(c, s2.cls)), "a_*δ != c^*δ'")
    return {"ranks": list(c.ranks())}


def _gen_et3_op(rng, cat, max_dim):
    d1, d2 = _delta(rng, cat, max_dim), _delta(rng, cat, max_dim)
    s1, s2 = s_realize(cat, d1), s_realize(cat, d2)
    c, b = _square_pair(rng, cat, (s1.quotient, s2.quotient), (s1.mid, s2.mid),
                        lambda m: s2.y @ m, lambda m: m @ s1.y)
    return {"d1": d1, "d2": d2, "b": b, "c": c}


@register("base.et3_op", _gen_et3_op, target="a")
def _verify_et3_op(cat, d, tam: Tamper) -> dict:
    s1, s2 = s_realize(cat, d["d1"]), s_realize(cat, d["d2"])
    b, c = d["b"], d["c"]
    a = tam("a", op(et3_on(cat.opposite(), op(s2), op(s1), op(c), op(b))))
    require(b @ s1.x == s2.x @ a, "left square does not commute")
    require(same_class(cat, pushforward(a, s1.cls), pullback(c, s2.cls)), "a_*δ != c^*δ'")
    return {"ranks": list(a.ranks())}


# ET4 and its dual

def _gen_et4(rng, cat, max_dim):
    d1 = _delta(rng, cat, max_dim)
    s1 = s_realize(cat, d1)
    f = _obj(rng, cat, max_dim)
    return {"d1": d1, "d2": gen_ext(rng, cat, f, s1.mid)}


@register("base.et4", _gen_et4, target="d")
def _verify_et4(cat, d, tam: Tamper) -> dict:
    s1, s2 = s_realize(cat, d["d1"]), s_realize(cat, d["d2"])
    res = et4_on(cat, s1, s2)
    dd = tam("d", res.d)
    require(dd @ s1.y == res.h_prime @ s2.x, "d ∘ f' != h' ∘ g")
    require(res.e @ res.h_prime == s2.y, "e ∘ h' != g'")
    require(same_class(cat, pullback(dd, res.delta3), s1.cls), "d^*δ'' != δ")
    require(same_class(cat, pushforward(s1.x, res.delta3), pullback(res.e, s2.cls)), "f_*δ'' != e^*δ'")
    row = Conflation(dd, res.e, reduce(cat, pushforward(s1.y, s2.cls)))
    require(conflation_class_ok(cat, row), "D -> E -> F does not realize f'_*δ'")
    return {"E": list(res.E.dims)}


def _gen_et4_op(rng, cat, max_dim):
    d1 = _delta(rng, cat, max_dim)
    s1 = s_realize(cat, d1)
    x = _obj(rng, cat, max_dim)
    return {"d1": d1, "d2": gen_ext(rng, cat, s1.mid, x)}


@register("base.et4_op", _gen_et4_op, target="d")
def _verify_et4_op(cat, d, tam: Tamper) -> dict:
    s1, s2 = s_realize(cat, d["d1"]), s_realize(cat, d["d2"])
    cop = cat.opposite()
    res = et4_on(cop, op(s1), op(s2))
    dd = tam("d", op(res.d))
    delta3 = op(res.delta3)
    require(same_class(cat, pushforward(dd, delta3), s1.cls), "d_*δ'' != δ")
    require(same_class(cat, pullback(s1.y, delta3), pushforward(op(res.e), s2.cls)), "f^*δ'' != e_*δ'")
    require(conflation_class_ok(cat, op(res.conf3)), "transported conflation does not realize its class")
    row = Conflation(op(res.e), dd, reduce(cat, pullback(s1.x, s2.cls)))
    require(conflation_class_ok(cat, row), "transported row does not realize f^*δ'")
    return {"E": list(res.E.dims)}


# mapping cones

def _gen_cone(rng, cat, max_dim):
    delta = _delta(rng, cat, max_dim)
    dd = _obj(rng, cat, max_dim)
    return {"delta": delta, "f": gen_morphism(rng, delta.sub, dd)}


@register("base.mapping_cone", _gen_cone, target="g")
def _verify_cone(cat, d, tam: Tamper) -> dict:
    conf = s_realize(cat, d["delta"])
    f = d["f"]
    g, _ = mapping_cone_base(cat, conf, f)
    other = s_realize(cat, pushforward(f, conf.cls))
    g = tam("g", g)
    require(g @ conf.x == other.x @ f, "g ∘ x != d ∘ f")
    require(other.y @ g == conf.y, "e ∘ g != y")
    cone = Conflation(morphism_column([-f, conf.x]), morphism_row([other.x, g]), reduce(cat, pullback(other.y, conf.cls)))
    require(conflation_class_ok(cat, cone), "cone does not realize e^*δ")
    return {"dims": list(cone.mid.dims)}


def _gen_cone2(rng, cat, max_dim):
    delta = _delta(rng, cat, max_dim)
    e = _obj(rng, cat, max_dim)
    return {"delta": delta, "h": gen_morphism(rng, e, delta.quotient)}


@register("base.mapping_cone2", _gen_cone2, target="g")
def _verify_cone2(cat, d, tam: Tamper) -> dict:
    conf = s_realize(cat, d["delta"])
    h = d["h"]
    g, _ = mapping_cone_dual(cat, conf, h)
    other = s_realize(cat, pullback(h, conf.cls))
    g = tam("g", g)
    require(g @ other.x == conf.x, "g ∘ d != x")
    require(conf.y @ g == h @ other.y, "y ∘ g != h ∘ e")
    cone = Conflation(morphism_column([-other.y, g]), morphism_row([h, conf.y]), reduce(cat, pushforward(other.x, conf.cls)))
    require(conflation_class_ok(cat, cone), "cone does not realize d_*δ")
    return {"dims": list(cone.mid.dims)}


# summand cancellation

def _gen_cancel(rng, cat, max_dim):
    delta = _delta(rng, cat, max_dim)
    conf = s_realize(cat, delta)
    a = _obj(rng, cat, max_dim)
    return {"delta": delta, "u": gen_morphism(rng, a, conf.mid), "v": gen_morphism(rng, conf.sub, a)}


@register("base.summand_cancel", _gen_cancel, target="t")
def _verify_cancel(cat, d, tam: Tamper) -> dict:
    conf = s_realize(cat, d["delta"])
    u, v = d["u"], d["v"]
    a = u.src
    x = conf.x + u @ v
    w = -(conf.y @ u)
    infl = morphism_block([[x, u], [v, a.identity()]])
    defl = morphism_row([conf.y, w])
    cls = reduce(cat, ses_to_cocycle(infl, defl))
    out = summand_cancel(cat, x, u, v, conf.y, w, cls)
    t = tam("t", out.x)
    require(t == conf.x, "x - u∘v != original inflation")
    require(same_class(cat, out.cls, conf.cls), "p_* of the class is not the original class")
    return {"dims": list(infl.dst.dims)}


# opposite transport

def _gen_transport(rng, cat, max_dim):
    delta = _delta(rng, cat, max_dim)
    a2 = _obj(rng, cat, max_dim)
    return {"delta": delta, "a": gen_morphism(rng, delta.sub, a2)}


@register("base.opposite_transport", _gen_transport, target="cls")
def _verify_transport(cat, d, tam: Tamper) -> dict:
    delta, a = d["delta"], d["a"]
    conf = s_realize(cat, delta)
    cop = cat.opposite()
    t = op(conf)
    require(op(t) == conf, "transport is not an involution")
    require(conflation_class_ok(cop, t), "transported conflation does not realize its class")
    require(e_group(cat, delta.quotient, delta.sub).dim == e_group(cop, op(delta.sub), op(delta.quotient)).dim,
            "dimensions of the extension groups differ")
    pushed = tam("cls", op(pushforward(a, delta)))
    require(same_class(cop, pushed, pullback(op(a), op(delta))), "op(a_*δ) != a^op^* op(δ)")
    return {"ext": e_group(cat, delta.quotient, delta.sub).dim}

