"""Checks on the idempotent completion."""

from __future__ import annotations

from ..basecat import (
    e_group,
    fill_between,
    opposite_transport as op,
    reduce,
    s_realize,
)
from ..karoubi import (
    FClass,
    FTriangle,
    KarMorphism,
    KarObject,
    embed,
    embedding_functor_check,
    et3_tilde,
    et4_tilde,
    f_act,
    f_add,
    f_biadditivity_check,
    f_cone_corollary,
    f_direct_sum,
    f_exactness_check,
    f_mapping_cone,
    f_pull,
    f_push,
    f_seq_equivalent,
    f_space,
    idem_fill,
    idem_fill_on,
    in_f,
    kar_column,
    kar_hom_basis,
    kar_inverse,
    kar_projection,
    r_realize,
    realizes,
    split_in_tilde,
    standard_form,
    triangle_from_conflation,
    triangle_sum,
    weak_cokernel_solve,
    weak_kernel_solve,
)
from ..quiverrep import (
    ExtCocycle,
    RepMorphism,
    cocycle_to_ses,
    pullback,
    pushforward,
)
from ..exactlin import Matrix
from .core import Tamper, combine, kernel_combo, register, require, vec
from .gen import (
    gen_class,
    gen_constrained,
    gen_ext,
    gen_idempotent,
    gen_kar_morphism,
    gen_kar_object,
    gen_morphism,
    gen_object,
)


def _kobj(rng, cat, max_dim, weak=False):
    return gen_kar_object(rng, cat, max_dim, weak=weak)


def _phi(rng, cat, max_dim, weak=False):
    x, z = _kobj(rng, cat, max_dim, weak), _kobj(rng, cat, max_dim, weak)
    return gen_class(rng, cat, z, x)


def _kar_auto(rng, a: KarObject, tries: int = 8) -> KarMorphism:
    for _ in range(tries):
        h = gen_kar_morphism(rng, a, a)
        try:
            kar_inverse(h)
            return h
        except ValueError:
            continue
    return a.identity()


def _kar_square(rng, cat, left, right, lhs, rhs):
    """Random (a, b) of KarMorphisms with lhs(b) = rhs(a)."""
    la, rb = kar_hom_basis(*left), kar_hom_basis(*right)
    cols = [-vec(rhs(m)) for m in la] + [vec(lhs(m)) for m in rb]
    c = kernel_combo(rng, cols, cat.field.p)
    a = combine(la, c[: len(la)], left[0].zero_to(left[1]))
    b = combine(rb, c[len(la):], right[0].zero_to(right[1]))
    return a, b


def _annihilating(rng, cat, src, dst, fn):
    """Random KarMorphism src -> dst with fn(g) = 0."""
    basis = kar_hom_basis(src, dst)
    c = kernel_combo(rng, [vec(fn(m)) for m in basis], cat.field.p)
    return combine(basis, c, src.zero_to(dst))


# subgroup property

def _gen_subgroup(rng, cat, max_dim):
    x, z = _kobj(rng, cat, max_dim), _kobj(rng, cat, max_dim)
    return {"phi1": gen_class(rng, cat, z, x), "phi2": gen_class(rng, cat, z, x),
            "xi": gen_ext(rng, cat, z.base, x.base)}


@register("karoubi.subgroup", _gen_subgroup, target="sum")
def _verify_subgroup(cat, d, tam: Tamper) -> dict:
    phi1, phi2, xi = d["phi1"], d["phi2"], d["xi"]
    z, x = phi1.quotient, phi1.sub
    s = tam("sum", f_add(phi1, phi2, cat))
    require(in_f(cat, z, x, s.cocycle), "φ1 + φ2 left 𝔽")
    require(in_f(cat, z, x, phi1.cocycle * (cat.field.p - 1)), "-φ1 left 𝔽")
    require(in_f(cat, z, x, ExtCocycle.zero(z.base, x.base)), "0 is not in 𝔽")
    require(in_f(cat, z, x, pushforward(x.idem, pullback(z.idem, xi))), "p^* q_* ξ is not in 𝔽")
    sp = f_space(cat, z, x)
    return {"dim": sp.dim, "ambient": sp.ambient.dim}


# ET1 biadditivity of 𝔽

def _gen_f_biadd(rng, cat, max_dim):
    x, u, v = (_kobj(rng, cat, max_dim) for _ in range(3))
    phi = gen_class(rng, cat, x, u)
    return {"x": x, "u": u, "v": v, "phi": phi,
            "b1": gen_kar_morphism(rng, u, v), "b2": gen_kar_morphism(rng, u, v)}


@register("karoubi.et1_biadditive", _gen_f_biadd, target="push")
def _verify_f_biadd(cat, d, tam: Tamper) -> dict:
    x, u, v, phi, b1, b2 = (d[k] for k in ("x", "u", "v", "phi", "b1", "b2"))
    out = f_biadditivity_check(cat, x, u, v)
    out_op = f_biadditivity_check(cat.opposite(), op(x), op(u), op(v))
    lhs = tam("push", f_push(cat, b1 + b2, phi))
    require(lhs == f_add(f_push(cat, b1, phi), f_push(cat, b2, phi), cat), "(β1 + β2)_* is not additive")
    require(f_act(cat, x.identity(), b1, phi) == f_push(cat, b1, phi), "𝔽(1, β) != β_*")
    return {"second": out, "first": out_op}


# ET2 additive realization

def _gen_et2(rng, cat, max_dim):
    return {"phi1": _phi(rng, cat, max_dim), "phi2": _phi(rng, cat, max_dim)}


@register("karoubi.et2_additive", _gen_et2, target="u")
def _verify_et2(cat, d, tam: Tamper) -> dict:
    t1, t2 = r_realize(cat, d["phi1"]), r_realize(cat, d["phi2"])
    s = triangle_sum(t1, t2)
    moved = FTriangle(tam("u", s.u), s.v, s.cls, s.base)
    f_seq_equivalent(cat, moved, r_realize(cat, f_direct_sum(d["phi1"], d["phi2"])))
    return {"dims": list(s.mid.image_dims())}


# well-definedness of the realization

def _gen_alt_rep(rng, cat, max_dim):
    phi = _phi(rng, cat, max_dim)
    xi = phi.cocycle
    c, a = xi.quotient, xi.sub
    f = cat.field
    vs = [Matrix._wrap(f, rng.integers(0, f.p, size=(a.dims[v], c.dims[v]))) for v in range(len(a.dims))]
    blocks = tuple(b + vs[t] @ c.arrow_maps[k] - a.arrow_maps[k] @ vs[s]
                   for k, ((s, t), b) in enumerate(zip(cat.quiver.arrows, xi.blocks)))
    return {"phi": phi, "alt": ExtCocycle(c, a, blocks)}


@register("karoubi.well_defined_rep", _gen_alt_rep, target="r")
def _verify_alt_rep(cat, d, tam: Tamper) -> dict:
    phi, alt = d["phi"], d["alt"]
    conf = cocycle_to_ses(alt)
    require(e_group(cat, alt.quotient, alt.sub).same_class(alt, phi.cocycle), "representatives differ in class")
    q, p = phi.sub.idem, phi.quotient.idem
    r = tam("r", idem_fill_on(cat, conf, q, p))
    t = triangle_from_conflation(conf, q, r, p, phi)
    f_seq_equivalent(cat, t, r_realize(cat, phi))
    return {"dims": list(t.mid.image_dims())}


def _gen_alt_fill(rng, cat, max_dim):
    phi = _phi(rng, cat, max_dim)
    conf = s_realize(cat, phi.cocycle)
    k = gen_constrained(rng, conf.mid, conf.mid, pre=[(conf.x, RepMorphism.zero(conf.sub, conf.mid))],
                        post=[(conf.y, RepMorphism.zero(conf.mid, conf.quotient))])
    return {"phi": phi, "k": k}


@register("karoubi.well_defined_fill", _gen_alt_fill, target="r")
def _verify_alt_fill(cat, d, tam: Tamper) -> dict:
    phi, k = d["phi"], d["k"]
    conf = s_realize(cat, phi.cocycle)
    q, p = phi.sub.idem, phi.quotient.idem
    i = fill_between(cat, conf, conf, q, p) + k
    r = tam("r", idem_fill_on(cat, conf, q, p, fill=i))
    t = triangle_from_conflation(conf, q, r, p, phi)
    f_seq_equivalent(cat, t, r_realize(cat, phi))
    return {"dims": list(t.mid.image_dims())}


# standard form

def _gen_standard(rng, cat, max_dim):
    phi = _phi(rng, cat, max_dim)
    t = r_realize(cat, phi)
    return {"phi": phi, "h": _kar_auto(rng, t.mid)}


@register("karoubi.standard_form", _gen_standard, target="u")
def _verify_standard(cat, d, tam: Tamper) -> dict:
    phi, h = d["phi"], d["h"]
    t = r_realize(cat, phi)
    hinv = kar_inverse(h)
    moved = FTriangle(tam("u", h @ t.u), t.v @ hinv, phi)
    u1, v1 = standard_form(moved)
    q, p = phi.sub.idem, phi.quotient.idem
    require(u1 @ q == moved.u.map and p @ v1 == moved.v.map, "maps do not factor through the idempotents")
    require(moved.u.map == (h.map @ t.base.x) @ q, "u' != (h x) q")
    require(moved.v.map == p @ (t.base.y @ hinv.map), "v' != p (y h⁻¹)")
    realizes(cat, moved)
    return {"dims": list(t.mid.image_dims())}


# ET3 and its dual

def _gen_et3(rng, cat, max_dim):
    phi1, phi2 = _phi(rng, cat, max_dim), _phi(rng, cat, max_dim)
    t1, t2 = r_realize(cat, phi1), r_realize(cat, phi2)
    a, b = _kar_square(rng, cat, (t1.left, t2.left), (t1.mid, t2.mid), lambda m: m @ t1.u, lambda m: t2.u @ m)
    return {"phi1": phi1, "phi2": phi2, "a": a, "b": b}


@register("karoubi.et3", _gen_et3, target="c")
def _verify_et3(cat, d, tam: Tamper) -> dict:
    t1, t2 = r_realize(cat, d["phi1"]), r_realize(cat, d["phi2"])
    a, b = d["a"], d["b"]
    c = tam("c", et3_tilde(cat, a, b, t1, t2))
    require(c @ t1.v == t2.v @ b, "right square does not commute")
    require(f_push(cat, a, t1.cls) == f_pull(cat, c, t2.cls), "a_*φ != c^*φ'")
    return {"ranks": list(c.map.ranks())}


def _gen_et3_op(rng, cat, max_dim):
    phi1, phi2 = _phi(rng, cat, max_dim), _phi(rng, cat, max_dim)
    t1, t2 = r_realize(cat, phi1), r_realize(cat, phi2)
    c, b = _kar_square(rng, cat, (t1.right, t2.right), (t1.mid, t2.mid), lambda m: t2.v @ m, lambda m: m @ t1.v)
    return {"phi1": phi1, "phi2": phi2, "b": b, "c": c}


@register("karoubi.et3_op", _gen_et3_op, target="a")
def _verify_et3_op(cat, d, tam: Tamper) -> dict:
    t1, t2 = r_realize(cat, d["phi1"]), r_realize(cat, d["phi2"])
    b, c = d["b"], d["c"]
    a = tam("a", op(et3_tilde(cat.opposite(), op(c), op(b), op(t2), op(t1))))
    require(b @ t1.u == t2.u @ a, "left square does not commute")
    require(f_push(cat, a, t1.cls) == f_pull(cat, c, t2.cls), "a_*φ != c^*φ'")
    return {"ranks": list(a.map.ranks())}


# weak kernels and cokernels, exactness

def _gen_wkc(rng, cat, max_dim):
    phi = _phi(rng, cat, max_dim)
    t = r_realize(cat, phi)
    test = _kobj(rng, cat, max_dim)
    g = _annihilating(rng, cat, t.mid, test, lambda m: m @ t.u)
    g2 = _annihilating(rng, cat, test, t.mid, lambda m: t.v @ m)
    return {"phi": phi, "g": g, "g2": g2}


@register("karoubi.weak_cokernel", _gen_wkc, target="h")
def _verify_wkc(cat, d, tam: Tamper) -> dict:
    t = r_realize(cat, d["phi"])
    g, g2 = d["g"], d["g2"]
    h = tam("h", weak_cokernel_solve(cat, t, g))
    require(h @ t.v == g, "h ∘ v != g")
    k = weak_kernel_solve(cat, t, g2)
    require(t.u @ k == g2, "u ∘ k != g")
    return {"dims": list(t.mid.image_dims())}


def _gen_exact(rng, cat, max_dim):
    return {"phi": _phi(rng, cat, max_dim), "test": _kobj(rng, cat, max_dim)}


@register("karoubi.f_exactness", _gen_exact, target="cls")
def _verify_exact(cat, d, tam: Tamper) -> dict:
    t = r_realize(cat, d["phi"])
    t = FTriangle(t.u, t.v, tam("cls", t.cls), t.base)
    return f_exactness_check(cat, t, d["test"])


# mapping cones

def _gen_fcone(rng, cat, max_dim):
    phi = _phi(rng, cat, max_dim)
    e = _kobj(rng, cat, max_dim)
    return {"phi": phi, "h": gen_kar_morphism(rng, e, phi.quotient)}


@register("karoubi.mapping_cone", _gen_fcone, target="g")
def _verify_fcone(cat, d, tam: Tamper) -> dict:
    phi, h = d["phi"], d["h"]
    g, cone = f_mapping_cone(cat, phi, h)
    g = tam("g", g)
    first = kar_projection([h.src, g.dst], 0) @ cone.u
    moved = FTriangle(kar_column([first, g]), cone.v, cone.cls)
    realizes(cat, moved)
    return {"dims": list(cone.mid.image_dims())}


def _gen_corollary(rng, cat, max_dim):
    a, z, c = (_kobj(rng, cat, max_dim) for _ in range(3))
    return {"delta": gen_class(rng, cat, z, a), "w0": gen_kar_morphism(rng, c, z)}


def _corollary_input(cat, delta: FClass, w0: KarMorphism):
    eps = f_pull(cat, w0, delta)
    t_eps, t_delta = r_realize(cat, eps), r_realize(cat, delta)
    q = delta.sub.idem
    b = fill_between(cat, t_eps.base, t_delta.base, q, w0.map)
    u = KarMorphism(t_eps.mid, t_delta.mid, t_delta.mid.idem @ b @ t_eps.mid.idem)
    return t_eps, t_delta, u


@register("karoubi.cone_corollary", _gen_corollary, target="w")
def _verify_corollary(cat, d, tam: Tamper) -> dict:
    t_eps, t_delta, u = _corollary_input(cat, d["delta"], d["w0"])
    w, cone = f_cone_corollary(cat, t_eps, t_delta, u)
    w = tam("w", w)
    require(w @ t_eps.v == t_delta.v @ u, "w ∘ v_ε != v_δ ∘ u")
    require(f_pull(cat, w, t_delta.cls) == t_eps.cls, "w^*δ != ε")
    return {"dims": list(cone.mid.image_dims())}


# ET4 and its dual

def _gen_et4(rng, cat, max_dim):
    phi1 = _phi(rng, cat, max_dim)
    t1 = r_realize(cat, phi1)
    f = _kobj(rng, cat, max_dim)
    return {"phi1": phi1, "phi2": gen_class(rng, cat, f, t1.mid)}


@register("karoubi.et4", _gen_et4, target="d_bar")
def _verify_et4(cat, d, tam: Tamper) -> dict:
    t1, t2 = r_realize(cat, d["phi1"]), r_realize(cat, d["phi2"])
    res = et4_tilde(cat, t1, t2)
    d_bar = tam("d_bar", res.d_bar)
    require(f_pull(cat, d_bar, res.delta3) == t1.cls, "d̄^*δ'' != δ")
    require(f_push(cat, t1.u, res.delta3) == f_pull(cat, res.e_bar, t2.cls), "(fq)_*δ'' != ē^*δ'")
    realizes(cat, FTriangle(d_bar, res.e_bar, f_push(cat, t1.v, t2.cls)))
    return {"E": list(res.Ew.image_dims()), "delta3_in_v": res.delta3_in_v}


def _gen_et4_op(rng, cat, max_dim):
    phi1 = _phi(rng, cat, max_dim)
    t1 = r_realize(cat, phi1)
    x = _kobj(rng, cat, max_dim)
    return {"phi1": phi1, "phi2": gen_class(rng, cat, t1.mid, x)}


@register("karoubi.et4_op", _gen_et4_op, target="d_bar")
def _verify_et4_op(cat, d, tam: Tamper) -> dict:
    t1, t2 = r_realize(cat, d["phi1"]), r_realize(cat, d["phi2"])
    res = et4_tilde(cat.opposite(), op(t1), op(t2))
    d_bar = tam("d_bar", op(res.d_bar))
    delta3 = op(res.delta3)
    require(f_push(cat, d_bar, delta3) == t1.cls, "d̄_*δ'' != δ")
    require(f_pull(cat, t1.v, delta3) == f_push(cat, op(res.e_bar), t2.cls), "f^*δ'' != ē_*δ'")
    realizes(cat, FTriangle(op(res.e_bar), d_bar, f_pull(cat, t1.u, t2.cls)))
    return {"E": list(res.Ew.image_dims()), "delta3_in_v": res.delta3_in_v}


# embedding of the base category

def _gen_embed(rng, cat, max_dim):
    a, c = gen_object(rng, cat, max_dim)[0], gen_object(rng, cat, max_dim)[0]
    a2, c2 = gen_object(rng, cat, max_dim)[0], gen_object(rng, cat, max_dim)[0]
    return {"delta": gen_ext(rng, cat, c, a), "f": gen_morphism(rng, c2, c), "g": gen_morphism(rng, a, a2)}


@register("karoubi.embedding", _gen_embed, target="push")
def _verify_embed(cat, d, tam: Tamper) -> dict:
    delta, f, g = d["delta"], d["f"], d["g"]
    embedding_functor_check(cat, delta, f, g)
    lhs = tam("push", embed(reduce(cat, pullback(f, pushforward(g, delta)))))
    require(lhs == f_act(cat, embed(f), embed(g), embed(reduce(cat, delta))), "Γ is not natural")
    return {"ext": e_group(cat, delta.quotient, delta.sub).dim}


# idempotent fills

def gen_idem_fill_data(rng, cat, max_dim):
    a, sa = gen_object(rng, cat, max_dim)
    c, sc = gen_object(rng, cat, max_dim)
    e, _, _ = gen_idempotent(rng, cat, a, sa)
    f, _, _ = gen_idempotent(rng, cat, c, sc)
    xi = gen_ext(rng, cat, c, a)
    delta = reduce(cat, pullback(f, pushforward(e, xi)))
    return {"delta": delta, "e": e, "f": f}


@register("karoubi.idem_fill", gen_idem_fill_data, target="g")
def verify_idem_fill(cat, d, tam: Tamper) -> dict:
    delta, e, f = d["delta"], d["e"], d["f"]
    conf = s_realize(cat, delta)
    g = tam("g", idem_fill(cat, delta, e, f))
    require(g @ g == g, "g² != g")
    require(g @ conf.x == conf.x @ e, "g ∘ x != x ∘ e")
    require(conf.y @ g == f @ conf.y, "y ∘ g != f ∘ y")
    return {"ranks": list(g.ranks())}


# idempotent completeness

def gen_split_data(rng, cat, max_dim):
    obj, summands = gen_object(rng, cat, max_dim)
    p, s, c = gen_idempotent(rng, cat, obj, summands)
    sigma, _, _ = gen_idempotent(rng, cat, obj, summands, within=(s, c))
    k = KarObject(obj, p)
    return {"obj": k, "sigma": KarMorphism(k, k, sigma)}


@register("karoubi.split_in_tilde", gen_split_data, target="r_image")
def verify_split(cat, d, tam: Tamper) -> dict:
    k, sigma = d["obj"], d["sigma"]
    sp = split_in_tilde(k, sigma)
    r = tam("r_image", sp.r_image)
    require(sp.c_image @ r == sigma, "c ∘ r != σ")
    require(r @ sp.c_image == sp.image.identity(), "r ∘ c != 1")
    require(sp.c_kernel @ sp.r_kernel == k.identity() - sigma, "complement witnesses fail")
    return {"ranks": list(sigma.map.ranks())}

