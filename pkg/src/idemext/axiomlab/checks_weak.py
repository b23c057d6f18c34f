"""Checks on the weak idempotent completion."""

from __future__ import annotations

from ..basecat import formal_decompose, s_realize
from ..karoubi import KarMorphism, KarObject, f_seq_equivalent, kar_hom_basis, r_realize
from ..quiverrep import image_subrep
from ..weakcomp import (
    DoesNotSplit,
    SplitWitness,
    hat_realize,
    is_weak_object,
    kernel_factor,
    retraction_kernel,
    split_idem_fill,
    splits_in_base,
    transport_witness,
    weak_extension_closed_check,
    weak_object,
)
from .core import Tamper, combine, kernel_combo, register, require, vec
from .gen import gen_class, gen_idempotent, gen_kar_object, gen_object


def _weak_phi(rng, cat, max_dim):
    x = gen_kar_object(rng, cat, max_dim, weak=True)
    z = gen_kar_object(rng, cat, max_dim, weak=True)
    return {"phi": gen_class(rng, cat, z, x)}


@register("weak.split_fill", _weak_phi, target="g")
def _verify_split_fill(cat, d, tam: Tamper) -> dict:
    phi = d["phi"]
    conf = s_realize(cat, phi.cocycle)
    wq, wp = weak_object(cat, phi.sub).witness, weak_object(cat, phi.quotient).witness
    sf = split_idem_fill(cat, conf, wq, wp)
    g = tam("g", sf.g)
    q, p = phi.sub.idem, phi.quotient.idem
    require(g @ g == g, "g² != g")
    require(g @ conf.x == conf.x @ q, "g ∘ x != x ∘ q")
    require(conf.y @ g == p @ conf.y, "y ∘ g != p ∘ y")
    sf.witness.verify(g)
    return {"split_through": list(sf.witness.obj.dims)}


@register("weak.extension_closed", _weak_phi, target="witness_c")
def _verify_ext_closed(cat, d, tam: Tamper) -> dict:
    phi = d["phi"]
    info = weak_extension_closed_check(cat, phi)
    hat = hat_realize(cat, phi)
    canon = r_realize(cat, phi)
    eq = f_seq_equivalent(cat, hat.triangle, canon)
    moved = transport_witness(hat.mid, eq.forward)
    w = moved.witness
    SplitWitness(w.obj, w.r, tam("witness_c", w.c)).verify(canon.mid.idem)
    return info


def _gen_char(rng, cat, max_dim):
    return {"obj": gen_kar_object(rng, cat, max_dim)}


@register("weak.characterization", _gen_char, target="r")
def _verify_char(cat, d, tam: Tamper) -> dict:
    k = d["obj"]
    verdict = splits_in_base(cat, k.base, k.idem)
    ranks = k.idem.ranks()
    if cat.kind == "balanced":
        expected = cat.constraint.holds(ranks)
    elif cat.kind == "formal":
        expected = formal_decompose(cat, image_subrep(k.idem)[0]) is not None
    else:
        expected = True
    require((verdict is not DoesNotSplit) == expected, "splitting verdict disagrees with the image criterion")
    require(is_weak_object(cat, k) == expected, "is_weak_object disagrees with splits_in_base")
    if verdict is not DoesNotSplit:
        # r∘c = 1 forces dim X = rank p at every vertex
        require(verdict.obj.dims == ranks, "splitting object has the wrong dimensions")
        SplitWitness(verdict.obj, tam("r", verdict.r), verdict.c).verify(k.idem)
    return {"split": verdict is not DoesNotSplit, "ranks": list(ranks)}


def _gen_retraction(rng, cat, max_dim):
    obj, summands = gen_object(rng, cat, max_dim)
    p, s, c = gen_idempotent(rng, cat, obj, summands, weak=True)
    sigma, _, _ = gen_idempotent(rng, cat, obj, summands, weak=True, within=(s, c))
    a, b = KarObject(obj, p), KarObject(obj, sigma)
    test = gen_kar_object(rng, cat, max_dim)
    basis = kar_hom_basis(test, a)
    rho = KarMorphism(a, b, sigma)
    coeffs = kernel_combo(rng, [vec(rho @ m) for m in basis], cat.field.p)
    g = combine(basis, coeffs, test.zero_to(a))
    return {"rho": rho, "section": KarMorphism(b, a, sigma), "g": g}


@register("weak.retraction_kernel", _gen_retraction, target="k")
def _verify_retraction(cat, d, tam: Tamper) -> dict:
    rho, sec, g = d["rho"], d["section"], d["g"]
    require(is_weak_object(cat, rho.src) and is_weak_object(cat, rho.dst), "retraction is not in the weak completion")
    kobj, k = retraction_kernel(cat, rho, sec)
    k = tam("k", k)
    require((rho @ k).is_zero(), "ρ ∘ k != 0")
    t = kernel_factor(rho, k, g)
    require(k @ t == g, "g does not factor through the kernel")
    return {"kernel_split_through": list(kobj.witness.obj.dims)}


@register("weak.hat_realize", _weak_phi, target="mid_r")
def _verify_hat(cat, d, tam: Tamper) -> dict:
    wt = hat_realize(cat, d["phi"])
    for w in (wt.left, wt.mid, wt.right):
        w.witness.verify(w.underlying.idem)
    m = wt.mid.witness
    SplitWitness(m.obj, tam("mid_r", m.r), m.c).verify(wt.triangle.mid.idem)
    require(wt.triangle.left == d["phi"].sub and wt.triangle.right == d["phi"].quotient, "ends changed")
    return {"mid": list(wt.triangle.mid.image_dims())}
