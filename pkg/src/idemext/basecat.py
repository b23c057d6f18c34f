"""The base extriangulated category and the constructions its axioms use.

Two backends are provided. The balanced backend is the full subcategory of
representations whose dimension vector satisfies a linear constraint; it is
extension-closed but usually not idempotent complete. The formal backend is
the additive closure of a list of generators with the split exact structure.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exactlin import NoSolution, PrimeField
from .quiverrep import (
    DEFAULT_BOUNDS,
    Conflation,
    ExtCocycle,
    ExtSpace,
    NotIsomorphic,
    Quiver,
    Rep,
    RepMorphism,
    SearchBounds,
    SearchInconclusive,
    affine_search,
    affine_solutions,
    cocycle_to_ses,
    direct_sum,
    ext_direct_sum,
    ext_space,
    iso_find,
    morphism_block,
    morphism_column,
    morphism_diag,
    morphism_row,
    projection,
    pullback,
    pushforward,
    quotient_rep,
    ses_to_cocycle,
    solve_morphism,
    vertex_rank_test,
    _unvec,
)


class NotEquivalent(NotIsomorphic):
    """Two sequences with equal ends are not equivalent."""


@dataclass(frozen=True)
class DimConstraint:
    """Objects A with sum_v weights[v] * dim A_v = 0."""

    weights: tuple[int, ...]

    def value(self, dims: Sequence[int]) -> int:
        return sum(w * d for w, d in zip(self.weights, dims))

    def holds(self, dims: Sequence[int]) -> bool:
        return self.value(dims) == 0


def default_weights(n: int) -> tuple[int, ...]:
    return tuple([1, -1] + [0] * (n - 2)) if n >= 2 else (0,) * n


@dataclass(frozen=True)
class FormalObject:
    """A formal direct sum of generators, given by multiplicities."""

    multiplicities: tuple[int, ...]


@dataclass(frozen=True)
class BaseCategory:
    """A base category over a quiver and prime field.

    Exactly one of ``constraint`` (balanced backend) and ``generators``
    (formal backend) is set; with neither, the category is all of rep(Q).
    """

    quiver: Quiver
    field: PrimeField
    constraint: DimConstraint | None = None
    generators: tuple[Rep, ...] | None = None
    bounds: SearchBounds = DEFAULT_BOUNDS
    formal_bound: int = 4

    def __post_init__(self) -> None:
        if self.constraint is not None and self.generators is not None:
            raise ValueError("choose either a dimension constraint or a generator list")
        if self.constraint is not None and len(self.constraint.weights) != self.quiver.vertices:
            raise ValueError("one weight per vertex required")
        if self.generators is not None:
            for g in self.generators:
                if g.quiver != self.quiver or g.field != self.field:
                    raise ValueError("generator over the wrong quiver or field")

    @property
    def kind(self) -> str:
        if self.constraint is not None:
            return "balanced"
        if self.generators is not None:
            return "formal"
        return "ambient"

    def opposite(self) -> "BaseCategory":
        gens = None if self.generators is None else tuple(opposite_transport(g) for g in self.generators)
        return BaseCategory(self.quiver.opposite(), self.field, self.constraint, gens, self.bounds, self.formal_bound)

    def zero(self) -> Rep:
        return Rep.zero(self.quiver, self.field)

    def formal_rep(self, obj: FormalObject) -> Rep:
        parts = [g for g, m in zip(self.generators, obj.multiplicities) for _ in range(m)]
        return direct_sum(parts) if parts else self.zero()


def balanced(quiver: Quiver, field: PrimeField, weights: Sequence[int] | None = None,
             bounds: SearchBounds = DEFAULT_BOUNDS) -> BaseCategory:
    w = tuple(weights) if weights is not None else default_weights(quiver.vertices)
    return BaseCategory(quiver, field, constraint=DimConstraint(w), bounds=bounds)


def formal(quiver: Quiver, field: PrimeField, generators: Sequence[Rep],
           bounds: SearchBounds = DEFAULT_BOUNDS, bound: int = 4) -> BaseCategory:
    return BaseCategory(quiver, field, generators=tuple(generators), bounds=bounds, formal_bound=bound)


def ambient(quiver: Quiver, field: PrimeField) -> BaseCategory:
    return BaseCategory(quiver, field)


@functools.lru_cache(maxsize=4096)
def formal_decompose(cat: BaseCategory, m: Rep) -> tuple[FormalObject, RepMorphism] | None:
    """Multiplicities and an iso ``m -> formal_rep`` if m lies in add(generators).

    Returns None when the bounded search proves no decomposition exists;
    raises SearchInconclusive if some candidate could not be decided.
    """
    gens = cat.generators
    inconclusive = False
    for mult in itertools.product(range(cat.formal_bound + 1), repeat=len(gens)):
        dims = tuple(sum(k * g.dims[v] for k, g in zip(mult, gens)) for v in range(cat.quiver.vertices))
        if dims != m.dims:
            continue
        obj = FormalObject(tuple(mult))
        try:
            return obj, iso_find(m, cat.formal_rep(obj), cat.bounds)
        except SearchInconclusive:
            inconclusive = True
        except NotIsomorphic:
            pass
    if inconclusive:
        raise SearchInconclusive("formal decomposition search was inconclusive")
    return None


def membership(cat: BaseCategory, m: Rep) -> bool:
    if m.quiver != cat.quiver or m.field != cat.field:
        return False
    if cat.kind == "balanced":
        return cat.constraint.holds(m.dims)
    if cat.kind == "formal":
        return formal_decompose(cat, m) is not None
    return True


def require_member(cat: BaseCategory, *reps: Rep) -> None:
    for m in reps:
        if not membership(cat, m):
            raise ValueError(f"object with dims {m.dims} is not in the category")


@functools.lru_cache(maxsize=8192)
def _formal_ext(quotient: Rep, sub: Rep) -> ExtSpace:
    n = ext_space(quotient, sub).cocycle_dim
    return ExtSpace.from_image(quotient, sub, np.eye(n, dtype=np.int64))


def e_group(cat: BaseCategory, quotient: Rep, sub: Rep) -> ExtSpace:
    """𝔼(quotient, sub); the ambient Ext^1 except in the formal backend, where it is 0."""
    if cat.kind == "formal":
        return _formal_ext(quotient, sub)
    return ext_space(quotient, sub)


def reduce(cat: BaseCategory, xi: ExtCocycle) -> ExtCocycle:
    return e_group(cat, xi.quotient, xi.sub).reduce(xi)


def same_class(cat: BaseCategory, a: ExtCocycle, b: ExtCocycle) -> bool:
    return e_group(cat, a.quotient, a.sub).same_class(a, b)


def is_morphism_of_extensions(cat: BaseCategory, a: RepMorphism, c: RepMorphism,
                              delta: ExtCocycle, delta2: ExtCocycle) -> bool:
    """Whether a_*δ = c^*δ' in 𝔼(C, A')."""
    return same_class(cat, pushforward(a, delta), pullback(c, delta2))


def s_realize(cat: BaseCategory, delta: ExtCocycle) -> Conflation:
    """Canonical conflation realizing the class of δ."""
    conf = cocycle_to_ses(reduce(cat, delta))
    if cat.kind == "balanced":
        require_member(cat, delta.sub, delta.quotient, conf.mid)
    return conf


def conflation_class_ok(cat: BaseCategory, conf: Conflation) -> bool:
    return same_class(cat, ses_to_cocycle(conf.x, conf.y), conf.cls)


def conflation_sum(s1: Conflation, s2: Conflation) -> Conflation:
    return Conflation(morphism_diag([s1.x, s2.x]), morphism_diag([s1.y, s2.y]), ext_direct_sum(s1.cls, s2.cls))


def seq_equivalent(cat: BaseCategory, s1: Conflation, s2: Conflation) -> RepMorphism:
    """An isomorphism b with b∘x1 = x2 and y2∘b = y1.

    Raises NotEquivalent when no such isomorphism exists and SearchInconclusive
    when the sampled search fails.
    """
    if s1.sub != s2.sub or s1.quotient != s2.quotient:
        raise ValueError("sequences have different ends")
    if s1.mid.dims != s2.mid.dims:
        raise NotEquivalent("middle terms have different dimensions")
    try:
        part, ker = affine_solutions(s1.mid, s2.mid, pre=[(s1.x, s2.x)], post=[(s2.y, s1.y)])
    except NoSolution:
        raise NotEquivalent("no morphism of sequences") from None
    try:
        v = affine_search(part, ker, vertex_rank_test(s1.mid, s2.mid, s1.mid.dims), cat.field.p, cat.bounds)
    except SearchInconclusive:
        raise
    except NotIsomorphic:
        raise NotEquivalent("no invertible morphism of sequences") from None
    return _unvec(s1.mid, s2.mid, v)


def fill_between(cat: BaseCategory, s1: Conflation, s2: Conflation, a: RepMorphism, c: RepMorphism) -> RepMorphism:
    """Canonical b with b∘x1 = x2∘a and y2∘b = c∘y1, for (a, c) a morphism of extensions."""
    if not is_morphism_of_extensions(cat, a, c, s1.cls, s2.cls):
        raise ValueError("(a, c) is not a morphism of extensions")
    return solve_morphism(s1.mid, s2.mid, pre=[(s1.x, s2.x @ a)], post=[(s2.y, c @ s1.y)])


def lift_fill(cat: BaseCategory, a: RepMorphism, c: RepMorphism, delta: ExtCocycle, delta2: ExtCocycle) -> RepMorphism:
    """The canonical middle map realizing (a, c) on the canonical realizations."""
    return fill_between(cat, s_realize(cat, delta), s_realize(cat, delta2), a, c)


def et3_on(cat: BaseCategory, s1: Conflation, s2: Conflation, a: RepMorphism, b: RepMorphism) -> RepMorphism:
    """Given b∘x1 = x2∘a, the c with c∘y1 = y2∘b; asserts a_*δ = c^*δ'."""
    if b @ s1.x != s2.x @ a:
        raise ValueError("left square does not commute")
    c = solve_morphism(s1.quotient, s2.quotient, pre=[(s1.y, s2.y @ b)])
    if not is_morphism_of_extensions(cat, a, c, s1.cls, s2.cls):
        raise AssertionError("ET3: (a, c) is not a morphism of extensions")
    return c


def et3_complete(cat: BaseCategory, a: RepMorphism, b: RepMorphism, delta: ExtCocycle, delta2: ExtCocycle) -> RepMorphism:
    return et3_on(cat, s_realize(cat, delta), s_realize(cat, delta2), a, b)


@dataclass(frozen=True)
class ET4Base:
    E: Rep
    h: RepMorphism
    h_prime: RepMorphism
    d: RepMorphism
    e: RepMorphism
    delta3: ExtCocycle
    conf3: Conflation


def et4_on(cat: BaseCategory, s1: Conflation, s2: Conflation) -> ET4Base:
    """ET4 for A -f-> B -f'-> D and B -g-> C -g'-> F given as conflations."""
    if s2.sub != s1.mid:
        raise ValueError("second conflation must start at the middle of the first")
    f, f1 = s1.x, s1.y
    g, g1 = s2.x, s2.y
    h = g @ f
    E, h1 = quotient_rep(s2.mid, h)
    delta3 = reduce(cat, ses_to_cocycle(h, h1))
    conf3 = Conflation(h, h1, delta3)
    d = solve_morphism(s1.quotient, E, pre=[(f1, h1 @ g)])
    e = solve_morphism(E, s2.quotient, pre=[(h1, g1)])
    row = Conflation(d, e, reduce(cat, pushforward(f1, s2.cls)))
    if not conflation_class_ok(cat, row):
        raise AssertionError("ET4 (i): D -> E -> F does not realize f'_*δ'")
    seq_equivalent(cat, row, s_realize(cat, row.cls))
    if not same_class(cat, pullback(d, delta3), s1.cls):
        raise AssertionError("ET4 (ii): d^*δ'' != δ")
    if not same_class(cat, pushforward(f, delta3), pullback(e, s2.cls)):
        raise AssertionError("ET4 (iii): f_*δ'' != e^*δ'")
    if cat.kind == "balanced":
        require_member(cat, E)
    return ET4Base(E, h, h1, d, e, delta3, conf3)


def et4_base(cat: BaseCategory, delta: ExtCocycle, delta2: ExtCocycle) -> ET4Base:
    """ET4 on canonical realizations; δ2 must have the middle of 𝔰(δ) as sub object."""
    return et4_on(cat, s_realize(cat, delta), s_realize(cat, delta2))


def mapping_cone_base(cat: BaseCategory, conf: Conflation, f: RepMorphism) -> tuple[RepMorphism, Conflation]:
    """For f: A -> D, the g: B -> E and the cone A -> D⊕B -> E with class e^*δ."""
    if f.src != conf.sub:
        raise ValueError("f must start at the sub object")
    other = s_realize(cat, pushforward(f, conf.cls))
    d, e = other.x, other.y
    g = fill_between(cat, conf, other, f, conf.quotient.identity())
    cone = Conflation(morphism_column([-f, conf.x]), morphism_row([d, g]), reduce(cat, pullback(e, conf.cls)))
    if not conflation_class_ok(cat, cone):
        raise AssertionError("mapping cone does not realize e^*δ")
    return g, cone


def mapping_cone_dual(cat: BaseCategory, conf: Conflation, h: RepMorphism) -> tuple[RepMorphism, Conflation]:
    """For h: E -> C, the g: D -> B and the cone D -> E⊕B -> C with class d_*δ."""
    if h.dst != conf.quotient:
        raise ValueError("h must end at the quotient object")
    other = s_realize(cat, pullback(h, conf.cls))
    d, e = other.x, other.y
    g = fill_between(cat, other, conf, conf.sub.identity(), h)
    cone = Conflation(morphism_column([-e, g]), morphism_row([h, conf.y]), reduce(cat, pushforward(d, conf.cls)))
    if not conflation_class_ok(cat, cone):
        raise AssertionError("dual mapping cone does not realize d_*δ")
    return g, cone


def summand_cancel(cat: BaseCategory, x: RepMorphism, u: RepMorphism, v: RepMorphism,
                   y: RepMorphism, w: RepMorphism, cls: ExtCocycle) -> Conflation:
    """Cancel a common summand A from X⊕A -> Y⊕A -> Z.

    The inflation is the block matrix ((x, u), (v, 1)) and the deflation is
    (y, w). Returns X -t-> Y -y-> Z with t = x - u∘v and class p_*cls.
    """
    A = u.src
    big = Conflation(morphism_block([[x, u], [v, A.identity()]]), morphism_row([y, w]), cls)
    if not conflation_class_ok(cat, big):
        raise ValueError("input sequence does not realize its class")
    X = x.src
    p = projection([X, A], 0, big.sub)
    out = Conflation(x - u @ v, y, reduce(cat, pushforward(p, cls)))
    if not conflation_class_ok(cat, out):
        raise AssertionError("reduced sequence does not realize p_*δ")
    return out


# transport to the opposite quiver

@functools.singledispatch
def opposite_transport(datum):
    """The corresponding datum over the opposite quiver (an involution)."""
    raise TypeError(f"no opposite transport for {type(datum).__name__}")


@opposite_transport.register
def _(q: Quiver) -> Quiver:
    return q.opposite()


@opposite_transport.register
def _(m: Rep) -> Rep:
    return Rep(m.quiver.opposite(), m.field, m.dims, tuple(a.T for a in m.arrow_maps))


@opposite_transport.register
def _(f: RepMorphism) -> RepMorphism:
    return RepMorphism(opposite_transport(f.dst), opposite_transport(f.src), tuple(a.T for a in f.vertex_maps))


@opposite_transport.register
def _(xi: ExtCocycle) -> ExtCocycle:
    return ExtCocycle(opposite_transport(xi.sub), opposite_transport(xi.quotient), tuple(b.T for b in xi.blocks))


@opposite_transport.register
def _(c: Conflation) -> Conflation:
    return Conflation(opposite_transport(c.y), opposite_transport(c.x), opposite_transport(c.cls))


@opposite_transport.register
def _(cat: BaseCategory) -> BaseCategory:
    return cat.opposite()


@opposite_transport.register
def _(t: tuple) -> tuple:
    return tuple(opposite_transport(x) for x in t)


@opposite_transport.register
def _(t: list) -> list:
    return [opposite_transport(x) for x in t]
