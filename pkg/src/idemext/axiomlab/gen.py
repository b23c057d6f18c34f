"""Seeded generators for objects, morphisms, idempotents and classes."""

from __future__ import annotations

import itertools

import numpy as np

from ..basecat import BaseCategory, e_group, membership
from ..exactlin import Matrix, invert, rank
from ..karoubi import FClass, KarMorphism, KarObject, _kar_hom_kernel, _kmk, f_space
from ..quiverrep import (
    Rep,
    RepMorphism,
    _hom_kernel,
    _mk,
    _unvec,
    affine_solutions,
    direct_sum,
    morphism_diag,
)


def _rand_matrix(rng: np.random.Generator, field, r: int, c: int) -> Matrix:
    return Matrix._wrap(field, rng.integers(0, field.p, size=(r, c), dtype=np.int64))


def gen_dims(rng: np.random.Generator, cat: BaseCategory, max_dim: int) -> tuple[int, ...]:
    """A nonzero dimension vector of an object of the category."""
    n = cat.quiver.vertices
    cands = [d for d in itertools.product(range(max_dim + 1), repeat=n)
             if any(d) and (cat.kind != "balanced" or cat.constraint.holds(d))]
    return cands[int(rng.integers(len(cands)))]


def gen_rep(rng: np.random.Generator, cat: BaseCategory, dims) -> Rep:
    maps = tuple(_rand_matrix(rng, cat.field, dims[t], dims[s]) for s, t in cat.quiver.arrows)
    return Rep(cat.quiver, cat.field, tuple(dims), maps)


def _split_dims(rng: np.random.Generator, dims, k: int) -> list[tuple[int, ...]]:
    parts = [[0] * len(dims) for _ in range(k)]
    for v, d in enumerate(dims):
        for _ in range(d):
            parts[int(rng.integers(k))][v] += 1
    return [tuple(p) for p in parts if any(p)]


def gen_object(rng: np.random.Generator, cat: BaseCategory, max_dim: int = 3) -> tuple[Rep, list[Rep]]:
    """An object together with a direct sum decomposition into summands."""
    if cat.kind == "formal":
        gens = cat.generators
        k = int(rng.integers(1, 4))
        summands = [gens[int(rng.integers(len(gens)))] for _ in range(k)]
        return direct_sum(summands), summands
    dims = gen_dims(rng, cat, max_dim)
    k = int(rng.integers(1, 4))
    summands = [gen_rep(rng, cat, d) for d in _split_dims(rng, dims, k)]
    return direct_sum(summands), summands


def gen_morphism(rng: np.random.Generator, a: Rep, b: Rep) -> RepMorphism:
    k = _hom_kernel(a, b)
    c = rng.integers(0, a.field.p, size=k.shape[1], dtype=np.int64)
    return _unvec(a, b, (k @ c) % a.field.p)


def gen_constrained(rng: np.random.Generator, a: Rep, b: Rep, pre=(), post=()) -> RepMorphism:
    """A random solution of the given composition constraints."""
    part, k = affine_solutions(a, b, pre, post)
    c = rng.integers(0, a.field.p, size=k.shape[1], dtype=np.int64)
    return _unvec(a, b, (part + k @ c) % a.field.p)


def gen_automorphism(rng: np.random.Generator, a: Rep, tries: int = 8) -> RepMorphism:
    for _ in range(tries):
        f = gen_morphism(rng, a, a)
        if f.is_iso():
            return f
    return a.identity()


def _projection_onto(summands: list[Rep], keep) -> RepMorphism:
    total = direct_sum(summands)
    f = total.field
    blocks = []
    for i, s in enumerate(summands):
        blocks.append(RepMorphism(s, s, tuple((f.eye(d) if i in keep else f.zeros(d, d)) for d in s.dims)))
    return _mk(total, total, morphism_diag(blocks).vertex_maps)


def _conjugate(e: RepMorphism, c: RepMorphism) -> RepMorphism:
    return c @ e @ c.inverse()


def subsets(n: int) -> list[frozenset]:
    return [frozenset(s) for r in range(n + 1) for s in itertools.combinations(range(n), r)]


def _split_subset(cat: BaseCategory, summands: list[Rep], s) -> bool:
    parts = [summands[i] for i in sorted(s)]
    return not parts or membership(cat, direct_sum(parts))


def gen_idempotent(rng: np.random.Generator, cat: BaseCategory, obj: Rep, summands: list[Rep],
                   weak: bool = False, within=None) -> tuple[RepMorphism, frozenset, RepMorphism]:
    """c·E_S·c⁻¹ for a random subset S of summands and random automorphism c.

    With ``weak`` the subset is chosen so that the image lies in the category;
    ``within`` restricts S to a subset of a given one (conjugator reused).
    """
    n = len(summands)
    cands = subsets(n)
    if within is not None:
        keep, c = within
        cands = [s for s in cands if s <= keep]
    else:
        c = gen_automorphism(rng, obj)
    if weak:
        cands = [s for s in cands if _split_subset(cat, summands, s)]
    s = cands[int(rng.integers(len(cands)))]
    return _conjugate(_projection_onto(summands, s), c), s, c


def gen_kar_object(rng: np.random.Generator, cat: BaseCategory, max_dim: int = 3,
                   weak: bool = False) -> KarObject:
    obj, summands = gen_object(rng, cat, max_dim)
    p, _, _ = gen_idempotent(rng, cat, obj, summands, weak=weak)
    return KarObject(obj, p)


def gen_kar_morphism(rng: np.random.Generator, a: KarObject, b: KarObject) -> KarMorphism:
    k = _kar_hom_kernel(a, b)
    p = a.base.field.p
    c = rng.integers(0, p, size=k.shape[1], dtype=np.int64)
    return _kmk(a, b, _unvec(a.base, b.base, (k @ c) % p))


def gen_ext(rng: np.random.Generator, cat: BaseCategory, quotient: Rep, sub: Rep):
    sp = e_group(cat, quotient, sub)
    return sp.from_coords(rng.integers(0, cat.field.p, size=sp.dim, dtype=np.int64))


def gen_class(rng: np.random.Generator, cat: BaseCategory, zp: KarObject, xq: KarObject) -> FClass:
    sp = f_space(cat, zp, xq)
    return sp.element(rng.integers(0, cat.field.p, size=sp.dim, dtype=np.int64))


def gen_iso_copy(rng: np.random.Generator, a: Rep) -> tuple[Rep, RepMorphism]:
    """A vertexwise change of basis b of a together with the iso a -> b."""
    f = a.field
    mats = []
    for d in a.dims:
        for _ in range(16):
            m = _rand_matrix(rng, f, d, d)
            if rank(m) == d:
                break
        else:
            m = f.eye(d)
        mats.append(m)
    inv = [invert(m) for m in mats]
    maps = tuple(mats[t] @ a.arrow_maps[k] @ inv[s] for k, (s, t) in enumerate(a.quiver.arrows))
    b = Rep(a.quiver, f, a.dims, maps)
    return b, RepMorphism(a, b, tuple(mats))

