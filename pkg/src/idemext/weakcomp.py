"""The weak idempotent completion as the full subcategory of split objects.

An object (A, p) of the completion is weak when p = c∘r with r∘c = 1 through
an object X of the base category.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .basecat import BaseCategory, formal_decompose, fill_between, membership, s_realize
from .karoubi import (
    FClass,
    FTriangle,
    KarMorphism,
    KarObject,
    f_seq_equivalent,
    kar_inverse,
    r_realize,
)
from .quiverrep import Conflation, Rep, RepMorphism, image_subrep, pullback, pushforward


class Verdict(enum.Enum):
    DOES_NOT_SPLIT = "DoesNotSplit"


DoesNotSplit = Verdict.DOES_NOT_SPLIT


@dataclass(frozen=True)
class SplitWitness:
    """X in the base with r: A -> X and c: X -> A, c∘r = p and r∘c = 1_X."""

    obj: Rep
    r: RepMorphism
    c: RepMorphism

    def verify(self, p: RepMorphism) -> None:
        if self.c @ self.r != p:
            raise AssertionError("c ∘ r != p")
        if self.r @ self.c != self.obj.identity():
            raise AssertionError("r ∘ c != 1")


@dataclass(frozen=True)
class WeakObject:
    underlying: KarObject
    witness: SplitWitness

    def __post_init__(self) -> None:
        self.witness.verify(self.underlying.idem)


def splits_in_base(cat: BaseCategory, a: Rep, p: RepMorphism) -> SplitWitness | Verdict:
    """A splitting of p through an object of the base, or DoesNotSplit.

    Raises SearchInconclusive in the formal backend when the bounded search
    cannot decide.
    """
    if p.src != a or p.dst != a or not p.is_idempotent():
        raise ValueError("p must be an idempotent endomorphism of a")
    im, inc, co = image_subrep(p)
    if cat.kind == "formal":
        found = formal_decompose(cat, im)
        if found is None:
            return DoesNotSplit
        obj, iso = found
        x = cat.formal_rep(obj)
        w = SplitWitness(x, iso @ co, inc @ iso.inverse())
    else:
        if not membership(cat, im):
            return DoesNotSplit
        w = SplitWitness(im, co, inc)
    w.verify(p)
    return w


def is_weak_object(cat: BaseCategory, k: KarObject) -> bool:
    return splits_in_base(cat, k.base, k.idem) is not DoesNotSplit


def weak_object(cat: BaseCategory, k: KarObject) -> WeakObject:
    w = splits_in_base(cat, k.base, k.idem)
    if w is DoesNotSplit:
        raise ValueError("idempotent does not split in the base")
    return WeakObject(k, w)


@dataclass(frozen=True)
class SplitFill:
    """A split idempotent g on the middle term with its splitting through Y."""

    g: RepMorphism
    witness: SplitWitness
    r1: RepMorphism
    r2: RepMorphism


def split_idem_fill(cat: BaseCategory, conf: Conflation, we: SplitWitness, wf: SplitWitness) -> SplitFill:
    """Split idempotent g with g∘a = a∘e and b∘g = f∘b, for split (e, f) on δ.

    Realizes (e2)_*(f1)^*δ on X -> Y -> Z, fills (e1, f1) and (e2, f2) to r1
    and r2, inverts r2∘r1 to h and sets g = r1∘h∘r2.
    """
    e, f = we.c @ we.r, wf.c @ wf.r
    if e.src != conf.sub or f.src != conf.quotient:
        raise ValueError("idempotents do not act on the ends of the conflation")
    delta = conf.cls
    e1, e2, f1, f2 = we.c, we.r, wf.c, wf.r
    eps = pushforward(e2, pullback(f1, delta))
    small = s_realize(cat, eps)
    r1 = fill_between(cat, small, conf, e1, f1)
    r2 = fill_between(cat, conf, small, e2, f2)
    h = (r2 @ r1).inverse()
    g = r1 @ h @ r2
    w = SplitWitness(small.mid, r2, r1 @ h)
    w.verify(g)
    if g @ g != g:
        raise AssertionError("g is not idempotent")
    if g @ conf.x != conf.x @ e or conf.y @ g != f @ conf.y:
        raise AssertionError("(e, g, f) does not commute with the conflation")
    return SplitFill(g, w, r1, r2)


@dataclass(frozen=True)
class WeakTriangle:
    triangle: FTriangle
    left: WeakObject
    mid: WeakObject
    right: WeakObject


def transport_witness(w: WeakObject, iso: KarMorphism) -> WeakObject:
    """Closure under isomorphism: p1 = f∘c and p2 = r∘f⁻¹ split the target."""
    if iso.src != w.underlying:
        raise ValueError("isomorphism must start at the weak object")
    inv = kar_inverse(iso)
    p1 = iso.map @ w.witness.c
    p2 = w.witness.r @ inv.map
    return WeakObject(iso.dst, SplitWitness(w.witness.obj, p2, p1))


def hat_realize(cat: BaseCategory, phi: FClass) -> WeakTriangle:
    """The realization of φ inside the weak completion, middle fill split."""
    left, right = weak_object(cat, phi.sub), weak_object(cat, phi.quotient)
    conf = s_realize(cat, phi.cocycle)
    sf = split_idem_fill(cat, conf, left.witness, right.witness)
    t = r_realize(cat, phi, fill=sf.g)
    if t.mid.idem != sf.g:
        raise AssertionError("fill formula changed a split idempotent")
    mid = WeakObject(t.mid, sf.witness)
    return WeakTriangle(t, left, mid, right)


def weak_extension_closed_check(cat: BaseCategory, phi: FClass) -> dict:
    """The middle of 𝔯(φ) is weak whenever both ends are.

    Compares the canonical realization with the split-fill one and transports
    the split witness along the equivalence of middle objects.
    """
    hat = hat_realize(cat, phi)
    canon = r_realize(cat, phi)
    eq = f_seq_equivalent(cat, hat.triangle, canon)
    moved = transport_witness(hat.mid, eq.forward)
    if moved.underlying != canon.mid:
        raise AssertionError("transported witness is on the wrong object")
    if not is_weak_object(cat, canon.mid):
        raise AssertionError("middle of the canonical realization is not weak")
    return {
        "mid_dims": list(canon.mid.image_dims()),
        "split_through": list(moved.witness.obj.dims),
    }


def retraction_kernel(cat: BaseCategory, rho: KarMorphism, sigma: KarMorphism) -> tuple[WeakObject, KarMorphism]:
    """Kernel (A, p - σρ) of a retraction ρ: (A,p) -> (B,q) with section σ."""
    src = rho.src
    if rho @ sigma != rho.dst.identity():
        raise ValueError("σ is not a section of ρ")
    k_idem = src.idem - sigma.map @ rho.map
    K = KarObject(src.base, k_idem)
    k = KarMorphism(K, src, k_idem)
    if not (rho @ k).is_zero():
        raise AssertionError("ρ ∘ k != 0")
    return weak_object(cat, K), k


def kernel_factor(rho: KarMorphism, k: KarMorphism, g: KarMorphism) -> KarMorphism:
    """The unique t with k∘t = g for g with ρ∘g = 0."""
    if not (rho @ g).is_zero():
        raise ValueError("ρ ∘ g != 0")
    t = KarMorphism(g.src, k.src, k.map @ g.map)
    if k @ t != g:
        raise AssertionError("k ∘ t != g")
    return t


def embed_weak(cat: BaseCategory, a: Rep) -> WeakObject:
    return WeakObject(KarObject.trivial(a), SplitWitness(a, a.identity(), a.identity()))


