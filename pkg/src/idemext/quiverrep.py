"""Representations of finite acyclic quivers over F_p.

Hom spaces are kernels of the commuting-square system, Ext^1 is the cokernel
of the coboundary map on vertexwise homs, and extensions are realized by a
block upper-triangular middle term with the sub object first.
"""

from __future__ import annotations

import functools
import graphlib
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .exactlin import (
    Matrix,
    PrimeField,
    _kernel_array,
    _reduce_with,
    _rref_array,
    _solve_array,
    batched_rank,
    block,
    block_diag,
    complement_basis,
    hstack,
    invert,
    rank,
    solve_canonical,
    vstack,
)


class NotIsomorphic(LookupError):
    """An exhaustive search found no invertible element."""


class SearchInconclusive(RuntimeError):
    """A sampled search found no invertible element; the answer is unknown."""


@dataclass(frozen=True)
class SearchBounds:
    """Limits for invertible-element searches in affine spaces of morphisms."""

    max_enumeration: int = 2 ** 16
    samples: int = 512
    seed: int = 0


DEFAULT_BOUNDS = SearchBounds()


@dataclass(frozen=True)
class Quiver:
    vertices: int
    arrows: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "arrows", tuple((int(s), int(t)) for s, t in self.arrows))
        if self.vertices < 0:
            raise ValueError("vertex count must be nonnegative")
        for s, t in self.arrows:
            if not (0 <= s < self.vertices and 0 <= t < self.vertices):
                raise ValueError(f"arrow ({s}, {t}) out of range")
        ts = graphlib.TopologicalSorter({v: set() for v in range(self.vertices)})
        for s, t in self.arrows:
            ts.add(t, s)
        try:
            ts.prepare()
        except graphlib.CycleError as exc:
            raise ValueError(f"quiver has a directed cycle: {exc.args[1]}") from None

    @classmethod
    def linear(cls, n: int) -> "Quiver":
        """The A_n quiver 0 -> 1 -> ... -> n-1."""
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple((t, s) for s, t in self.arrows))


@dataclass(frozen=True)
class Rep:
    quiver: Quiver
    field: PrimeField
    dims: tuple[int, ...]
    arrow_maps: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "arrow_maps", tuple(self.arrow_maps))
        if len(self.dims) != self.quiver.vertices:
            raise ValueError(f"expected {self.quiver.vertices} dims, got {len(self.dims)}")
        if any(d < 0 for d in self.dims):
            raise ValueError("dimensions must be nonnegative")
        if len(self.arrow_maps) != len(self.quiver.arrows):
            raise ValueError("one matrix per arrow required")
        for (s, t), m in zip(self.quiver.arrows, self.arrow_maps):
            if m.field != self.field:
                raise ValueError("arrow matrix over the wrong field")
            if m.shape != (self.dims[t], self.dims[s]):
                raise ValueError(f"arrow {s}->{t} needs shape {(self.dims[t], self.dims[s])}, got {m.shape}")

    @classmethod
    def build(cls, quiver: Quiver, field: PrimeField, dims: Sequence[int], maps: Sequence) -> "Rep":
        mats = []
        for (s, t), m in zip(quiver.arrows, maps):
            mats.append(m if isinstance(m, Matrix) else field.matrix(m, shape=(dims[t], dims[s])))
        return cls(quiver, field, tuple(dims), tuple(mats))

    @classmethod
    def zero(cls, quiver: Quiver, field: PrimeField) -> "Rep":
        return cls.build(quiver, field, [0] * quiver.vertices, [field.zeros(0, 0)] * len(quiver.arrows))

    @classmethod
    def simple(cls, quiver: Quiver, field: PrimeField, v: int) -> "Rep":
        dims = [1 if u == v else 0 for u in range(quiver.vertices)]
        return cls.build(quiver, field, dims, [field.zeros(dims[t], dims[s]) for s, t in quiver.arrows])

    def identity(self) -> "RepMorphism":
        return RepMorphism(self, self, tuple(self.field.eye(d) for d in self.dims))

    def zero_to(self, other: "Rep") -> "RepMorphism":
        return RepMorphism.zero(self, other)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0


@dataclass(frozen=True)
class RepMorphism:
    src: Rep
    dst: Rep
    vertex_maps: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertex_maps", tuple(self.vertex_maps))
        if self.src.quiver != self.dst.quiver or self.src.field != self.dst.field:
            raise ValueError("morphism between representations of different quivers or fields")
        if len(self.vertex_maps) != self.src.quiver.vertices:
            raise ValueError("one matrix per vertex required")
        for v, m in enumerate(self.vertex_maps):
            if m.shape != (self.dst.dims[v], self.src.dims[v]):
                raise ValueError(f"vertex {v} needs shape {(self.dst.dims[v], self.src.dims[v])}, got {m.shape}")
        for k, (s, t) in enumerate(self.src.quiver.arrows):
            if self.dst.arrow_maps[k] @ self.vertex_maps[s] != self.vertex_maps[t] @ self.src.arrow_maps[k]:
                raise ValueError(f"square for arrow {s}->{t} does not commute")

    @classmethod
    def zero(cls, src: Rep, dst: Rep) -> "RepMorphism":
        return cls(src, dst, tuple(src.field.zeros(dst.dims[v], src.dims[v]) for v in range(len(src.dims))))

    @property
    def field(self) -> PrimeField:
        return self.src.field

    def __matmul__(self, other: "RepMorphism") -> "RepMorphism":
        """Composition ``self ∘ other``."""
        if other.dst != self.src:
            raise ValueError("composition of non-composable morphisms")
        return _mk(other.src, self.dst, [a @ b for a, b in zip(self.vertex_maps, other.vertex_maps)])

    def _same(self, other: "RepMorphism") -> None:
        if other.src != self.src or other.dst != self.dst:
            raise ValueError("morphisms have different source or target")

    def __add__(self, other: "RepMorphism") -> "RepMorphism":
        self._same(other)
        return _mk(self.src, self.dst, [a + b for a, b in zip(self.vertex_maps, other.vertex_maps)])

    def __sub__(self, other: "RepMorphism") -> "RepMorphism":
        self._same(other)
        return _mk(self.src, self.dst, [a - b for a, b in zip(self.vertex_maps, other.vertex_maps)])

    def __neg__(self) -> "RepMorphism":
        return _mk(self.src, self.dst, [-a for a in self.vertex_maps])

    def __mul__(self, scalar: int) -> "RepMorphism":
        return _mk(self.src, self.dst, [a * scalar for a in self.vertex_maps])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.vertex_maps)

    def ranks(self) -> tuple[int, ...]:
        return tuple(rank(m) for m in self.vertex_maps)

    def is_injective(self) -> bool:
        return self.ranks() == self.src.dims

    def is_surjective(self) -> bool:
        return self.ranks() == self.dst.dims

    def is_iso(self) -> bool:
        return self.src.dims == self.dst.dims and self.is_injective()

    def is_idempotent(self) -> bool:
        return self.src == self.dst and self @ self == self

    def inverse(self) -> "RepMorphism":
        return _mk(self.dst, self.src, [invert(m) for m in self.vertex_maps])

    def vec(self) -> np.ndarray:
        return _vec(self)


def _mk(src: Rep, dst: Rep, maps: Sequence[Matrix]) -> RepMorphism:
    # trusted constructor for results of operations that preserve the invariant
    m = object.__new__(RepMorphism)
    object.__setattr__(m, "src", src)
    object.__setattr__(m, "dst", dst)
    object.__setattr__(m, "vertex_maps", tuple(maps))
    return m


# direct sums

def direct_sum(reps: Sequence[Rep]) -> Rep:
    first = reps[0]
    dims = tuple(sum(r.dims[v] for r in reps) for v in range(first.quiver.vertices))
    maps = tuple(block_diag([r.arrow_maps[k] for r in reps]) for k in range(len(first.quiver.arrows)))
    return Rep(first.quiver, first.field, dims, maps)


def inclusion(reps: Sequence[Rep], i: int, total: Rep | None = None) -> RepMorphism:
    total = total or direct_sum(reps)
    f = reps[0].field
    maps = []
    for v in range(total.quiver.vertices):
        maps.append(vstack([f.eye(r.dims[v]) if j == i else f.zeros(r.dims[v], reps[i].dims[v])
                            for j, r in enumerate(reps)]))
    return _mk(reps[i], total, maps)


def projection(reps: Sequence[Rep], i: int, total: Rep | None = None) -> RepMorphism:
    total = total or direct_sum(reps)
    f = reps[0].field
    maps = []
    for v in range(total.quiver.vertices):
        maps.append(hstack([f.eye(r.dims[v]) if j == i else f.zeros(reps[i].dims[v], r.dims[v])
                            for j, r in enumerate(reps)]))
    return _mk(total, reps[i], maps)


def morphism_row(fs: Sequence[RepMorphism]) -> RepMorphism:
    """The map (f_1 ... f_k) out of a direct sum into a common target."""
    src = direct_sum([g.src for g in fs])
    return _mk(src, fs[0].dst, [hstack([g.vertex_maps[v] for g in fs]) for v in range(len(src.dims))])


def morphism_column(fs: Sequence[RepMorphism]) -> RepMorphism:
    """The map (f_1, ..., f_k)^T from a common source into a direct sum."""
    dst = direct_sum([g.dst for g in fs])
    return _mk(fs[0].src, dst, [vstack([g.vertex_maps[v] for g in fs]) for v in range(len(dst.dims))])


def morphism_diag(fs: Sequence[RepMorphism]) -> RepMorphism:
    src = direct_sum([g.src for g in fs])
    dst = direct_sum([g.dst for g in fs])
    return _mk(src, dst, [block_diag([g.vertex_maps[v] for g in fs]) for v in range(len(src.dims))])


def morphism_block(rows: Sequence[Sequence[RepMorphism]]) -> RepMorphism:
    src = direct_sum([g.src for g in rows[0]])
    dst = direct_sum([r[0].dst for r in rows])
    maps = [block([[g.vertex_maps[v] for g in r] for r in rows]) for v in range(len(src.dims))]
    return _mk(src, dst, maps)


# linear systems in the unknown vertex maps of a morphism

def _offsets(src: Rep, dst: Rep) -> list[int]:
    off = [0]
    for a, b in zip(src.dims, dst.dims):
        off.append(off[-1] + a * b)
    return off


def _vec(f: RepMorphism) -> np.ndarray:
    if not f.vertex_maps:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate([m.a.reshape(-1) for m in f.vertex_maps])


def _unvec(src: Rep, dst: Rep, v: np.ndarray) -> RepMorphism:
    off = _offsets(src, dst)
    maps = [Matrix._wrap(src.field, np.array(v[off[i]:off[i + 1]], dtype=np.int64).reshape(dst.dims[i], src.dims[i]))
            for i in range(len(src.dims))]
    return _mk(src, dst, maps)


def _eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def _kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])


def morphism_system(src: Rep, dst: Rep,
                    pre: Iterable[tuple[RepMorphism, RepMorphism]] = (),
                    post: Iterable[tuple[RepMorphism, RepMorphism]] = ()) -> tuple[np.ndarray, np.ndarray]:
    """Linear system ``A vec(b) = rhs`` for a morphism b: src -> dst.

    Rows encode the commuting squares, ``b ∘ x = T`` for each ``(x, T)`` in
    ``pre`` and ``y ∘ b = T`` for each ``(y, T)`` in ``post``.
    """
    p = src.field.p
    off = _offsets(src, dst)
    n = off[-1]
    blocks: list[np.ndarray] = []
    rhs: list[np.ndarray] = []
    for k, (s, t) in enumerate(src.quiver.arrows):
        # dst_a b_s - b_t src_a = 0
        rows = dst.dims[t] * src.dims[s]
        if rows == 0:
            continue
        m = np.zeros((rows, n), dtype=np.int64)
        m[:, off[s]:off[s + 1]] += _kron(dst.arrow_maps[k].a, _eye(src.dims[s]))
        m[:, off[t]:off[t + 1]] -= _kron(_eye(dst.dims[t]), src.arrow_maps[k].a.T)
        blocks.append(m)
        rhs.append(np.zeros(rows, dtype=np.int64))
    for x, T in pre:
        if x.dst != src or T.src != x.src or T.dst != dst:
            raise ValueError("precomposition constraint has mismatched objects")
        for v in range(len(src.dims)):
            rows = dst.dims[v] * x.src.dims[v]
            if rows == 0:
                continue
            m = np.zeros((rows, n), dtype=np.int64)
            m[:, off[v]:off[v + 1]] = _kron(_eye(dst.dims[v]), x.vertex_maps[v].a.T)
            blocks.append(m)
            rhs.append(T.vertex_maps[v].a.reshape(-1))
    for y, T in post:
        if y.src != dst or T.src != src or T.dst != y.dst:
            raise ValueError("postcomposition constraint has mismatched objects")
        for v in range(len(src.dims)):
            rows = y.dst.dims[v] * src.dims[v]
            if rows == 0:
                continue
            m = np.zeros((rows, n), dtype=np.int64)
            m[:, off[v]:off[v + 1]] = _kron(y.vertex_maps[v].a, _eye(src.dims[v]))
            blocks.append(m)
            rhs.append(T.vertex_maps[v].a.reshape(-1))
    if not blocks:
        return np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.vstack(blocks) % p, np.concatenate(rhs) % p


def solve_morphism(src: Rep, dst: Rep, pre=(), post=()) -> RepMorphism:
    """Canonical solution b of the constraints in :func:`morphism_system`.

    Raises NoSolution if the constraints are inconsistent.
    """
    a, b = morphism_system(src, dst, pre, post)
    x = _solve_array(a, b.reshape(-1, 1), src.field.p)
    return _unvec(src, dst, x[:, 0])


def affine_solutions(src: Rep, dst: Rep, pre=(), post=()) -> tuple[np.ndarray, np.ndarray]:
    """Particular solution and kernel basis (columns) of the same system."""
    a, b = morphism_system(src, dst, pre, post)
    p = src.field.p
    x = _solve_array(a, b.reshape(-1, 1), p)[:, 0]
    return x, _kernel_array(a, p)


@functools.lru_cache(maxsize=8192)
def _hom_kernel(src: Rep, dst: Rep) -> np.ndarray:
    a, _ = morphism_system(src, dst)
    k = _kernel_array(a, src.field.p)
    k.flags.writeable = False
    return k


def hom_basis(m: Rep, n: Rep) -> list[RepMorphism]:
    """Canonical basis of Hom(m, n)."""
    k = _hom_kernel(m, n)
    return [_unvec(m, n, k[:, j]) for j in range(k.shape[1])]


def hom_dim(m: Rep, n: Rep) -> int:
    return _hom_kernel(m, n).shape[1]


# Ext^1 as cocycles modulo coboundaries

@dataclass(frozen=True)
class ExtCocycle:
    """A cocycle for Ext^1(quotient, sub): one block per arrow."""

    quotient: Rep
    sub: Rep
    blocks: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(self.blocks))
        q = self.quotient.quiver
        if q != self.sub.quiver:
            raise ValueError("cocycle ends live over different quivers")
        if len(self.blocks) != len(q.arrows):
            raise ValueError("one block per arrow required")
        for (s, t), m in zip(q.arrows, self.blocks):
            if m.shape != (self.sub.dims[t], self.quotient.dims[s]):
                raise ValueError(f"block for {s}->{t} needs shape {(self.sub.dims[t], self.quotient.dims[s])}")

    @classmethod
    def zero(cls, quotient: Rep, sub: Rep) -> "ExtCocycle":
        f = quotient.field
        return cls(quotient, sub, tuple(f.zeros(sub.dims[t], quotient.dims[s]) for s, t in quotient.quiver.arrows))

    @classmethod
    def from_vec(cls, quotient: Rep, sub: Rep, v: np.ndarray) -> "ExtCocycle":
        f = quotient.field
        out, i = [], 0
        for s, t in quotient.quiver.arrows:
            r, c = sub.dims[t], quotient.dims[s]
            out.append(Matrix._wrap(f, np.array(v[i:i + r * c], dtype=np.int64).reshape(r, c) % f.p))
            i += r * c
        return cls(quotient, sub, tuple(out))

    @property
    def field(self) -> PrimeField:
        return self.quotient.field

    def vec(self) -> np.ndarray:
        if not self.blocks:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([m.a.reshape(-1) for m in self.blocks])

    def _same(self, other: "ExtCocycle") -> None:
        if other.quotient != self.quotient or other.sub != self.sub:
            raise ValueError("cocycles have different ends")

    def __add__(self, other: "ExtCocycle") -> "ExtCocycle":
        self._same(other)
        return ExtCocycle(self.quotient, self.sub, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "ExtCocycle") -> "ExtCocycle":
        self._same(other)
        return ExtCocycle(self.quotient, self.sub, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self) -> "ExtCocycle":
        return ExtCocycle(self.quotient, self.sub, tuple(-a for a in self.blocks))

    def __mul__(self, scalar: int) -> "ExtCocycle":
        return ExtCocycle(self.quotient, self.sub, tuple(a * scalar for a in self.blocks))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.blocks)


def coboundary_matrix(quotient: Rep, sub: Rep) -> np.ndarray:
    """Matrix of Φ(f)_α = f_t·M_α − N_α·f_s from vertexwise homs to cocycles."""
    m, nn = quotient, sub
    off = _offsets(m, nn)
    rows = sum(nn.dims[t] * m.dims[s] for s, t in m.quiver.arrows)
    out = np.zeros((rows, off[-1]), dtype=np.int64)
    r = 0
    for k, (s, t) in enumerate(m.quiver.arrows):
        h = nn.dims[t] * m.dims[s]
        if h:
            out[r:r + h, off[t]:off[t + 1]] += _kron(_eye(nn.dims[t]), m.arrow_maps[k].a.T)
            out[r:r + h, off[s]:off[s + 1]] -= _kron(nn.arrow_maps[k].a, _eye(m.dims[s]))
        r += h
    return out % m.field.p


@dataclass(frozen=True)
class ExtSpace:
    quotient: Rep
    sub: Rep
    cocycle_dim: int
    coboundary_image: Matrix
    class_basis: Matrix
    _rows: np.ndarray = field(repr=False, compare=False)
    _pivots: tuple[int, ...] = field(repr=False, compare=False)
    _free: tuple[int, ...] = field(repr=False, compare=False)

    @classmethod
    def from_image(cls, quotient: Rep, sub: Rep, image: np.ndarray) -> "ExtSpace":
        """Build the quotient of the cocycle space by the column span of ``image``."""
        p = quotient.field.p
        n = image.shape[0]
        if image.shape[1]:
            r, piv = _rref_array(image.T, p)
            rows = r[: len(piv)]
        else:
            rows, piv = np.zeros((0, n), dtype=np.int64), []
        free = [j for j in range(n) if j not in set(piv)]
        basis = np.zeros((n, len(free)), dtype=np.int64)
        for k, j in enumerate(free):
            basis[j, k] = 1
        rows.flags.writeable = False
        f = quotient.field
        return cls(quotient, sub, n, Matrix._wrap(f, rows.T.copy()), Matrix._wrap(f, basis),
                   rows, tuple(piv), tuple(free))

    @property
    def dim(self) -> int:
        return len(self._free)

    def _check(self, xi: ExtCocycle) -> None:
        if xi.quotient != self.quotient or xi.sub != self.sub:
            raise ValueError("cocycle does not belong to this Ext space")

    def reduce_vec(self, v: np.ndarray) -> np.ndarray:
        return _reduce_with(v.reshape(-1, 1), self._rows, list(self._pivots), self.quotient.field.p)[:, 0]

    def reduce(self, xi: ExtCocycle) -> ExtCocycle:
        """Canonical representative of the class of ``xi``."""
        self._check(xi)
        return ExtCocycle.from_vec(self.quotient, self.sub, self.reduce_vec(xi.vec()))

    def coords(self, xi: ExtCocycle) -> np.ndarray:
        self._check(xi)
        return self.reduce_vec(xi.vec())[list(self._free)]

    def from_coords(self, coords: Sequence[int]) -> ExtCocycle:
        v = np.zeros(self.cocycle_dim, dtype=np.int64)
        v[list(self._free)] = np.asarray(coords, dtype=np.int64)
        return ExtCocycle.from_vec(self.quotient, self.sub, v)

    def basis(self) -> list[ExtCocycle]:
        return [self.from_coords(np.eye(self.dim, dtype=np.int64)[i]) for i in range(self.dim)]

    def same_class(self, a: ExtCocycle, b: ExtCocycle) -> bool:
        self._check(a)
        self._check(b)
        return not self.reduce_vec((a.vec() - b.vec()) % self.quotient.field.p).any()


@functools.lru_cache(maxsize=8192)
def ext_space(quotient: Rep, sub: Rep) -> ExtSpace:
    """Ext^1(quotient, sub) of the ambient representation category."""
    if quotient.quiver != sub.quiver:
        raise ValueError("representations over different quivers")
    return ExtSpace.from_image(quotient, sub, coboundary_matrix(quotient, sub))


@dataclass(frozen=True)
class Conflation:
    """A short exact sequence sub --x--> mid --y--> quotient with its class."""

    x: RepMorphism
    y: RepMorphism
    cls: ExtCocycle

    def __post_init__(self) -> None:
        check_short_exact(self.x, self.y)
        if self.cls.sub != self.x.src or self.cls.quotient != self.y.dst:
            raise ValueError("class ends do not match the sequence")

    @property
    def sub(self) -> Rep:
        return self.x.src

    @property
    def mid(self) -> Rep:
        return self.x.dst

    @property
    def quotient(self) -> Rep:
        return self.y.dst


def check_short_exact(x: RepMorphism, y: RepMorphism) -> None:
    if x.dst != y.src:
        raise ValueError("maps are not composable")
    if not (y @ x).is_zero():
        raise ValueError("y ∘ x is not zero")
    if not x.is_injective():
        raise ValueError("x is not injective")
    if not y.is_surjective():
        raise ValueError("y is not surjective")
    if any(b != a + c for a, b, c in zip(x.src.dims, x.dst.dims, y.dst.dims)):
        raise ValueError("sequence is not exact in the middle")


def cocycle_to_ses(xi: ExtCocycle) -> Conflation:
    a, c = xi.sub, xi.quotient
    f = a.field
    dims = tuple(x + y for x, y in zip(a.dims, c.dims))
    maps = []
    for k, (s, t) in enumerate(a.quiver.arrows):
        maps.append(block([[a.arrow_maps[k], xi.blocks[k]],
                           [f.zeros(c.dims[t], a.dims[s]), c.arrow_maps[k]]]))
    b = Rep(a.quiver, f, dims, tuple(maps))
    x = _mk(a, b, [vstack([f.eye(a.dims[v]), f.zeros(c.dims[v], a.dims[v])]) for v in range(len(dims))])
    y = _mk(b, c, [hstack([f.zeros(c.dims[v], a.dims[v]), f.eye(c.dims[v])]) for v in range(len(dims))])
    return Conflation(x, y, xi)


def ses_to_cocycle(x: RepMorphism, y: RepMorphism) -> ExtCocycle:
    """A cocycle for the class of a short exact sequence.

    Sections of y are taken vertexwise as the canonical solutions of y_v s_v = 1.
    """
    check_short_exact(x, y)
    a, b, c = x.src, x.dst, y.dst
    f = a.field
    sec = [solve_canonical(y.vertex_maps[v], f.eye(c.dims[v])) for v in range(len(b.dims))]
    blocks = []
    for k, (s, t) in enumerate(a.quiver.arrows):
        target = b.arrow_maps[k] @ sec[s] - sec[t] @ c.arrow_maps[k]
        blocks.append(solve_canonical(x.vertex_maps[t], target))
    return ExtCocycle(c, a, tuple(blocks))


def pushforward(a: RepMorphism, xi: ExtCocycle) -> ExtCocycle:
    """a_*ξ for a: sub -> sub'."""
    if a.src != xi.sub:
        raise ValueError("pushforward along a morphism not starting at the sub object")
    arrows = xi.quotient.quiver.arrows
    return ExtCocycle(xi.quotient, a.dst, tuple(a.vertex_maps[t] @ m for (s, t), m in zip(arrows, xi.blocks)))


def pullback(c: RepMorphism, xi: ExtCocycle) -> ExtCocycle:
    """c^*ξ for c: quotient' -> quotient."""
    if c.dst != xi.quotient:
        raise ValueError("pullback along a morphism not ending at the quotient object")
    arrows = xi.quotient.quiver.arrows
    return ExtCocycle(c.src, xi.sub, tuple(m @ c.vertex_maps[s] for (s, t), m in zip(arrows, xi.blocks)))


def ext_direct_sum(xi: ExtCocycle, eta: ExtCocycle) -> ExtCocycle:
    return ExtCocycle(direct_sum([xi.quotient, eta.quotient]), direct_sum([xi.sub, eta.sub]),
                      tuple(block_diag([a, b]) for a, b in zip(xi.blocks, eta.blocks)))


def diagonal(c: Rep) -> RepMorphism:
    """Δ_C: C -> C ⊕ C."""
    return morphism_column([c.identity(), c.identity()])


def codiagonal(a: Rep) -> RepMorphism:
    """∇_A: A ⊕ A -> A."""
    return morphism_row([a.identity(), a.identity()])


def ext_add(xi: ExtCocycle, eta: ExtCocycle) -> ExtCocycle:
    """Baer sum computed as ∇_* Δ^* (ξ ⊕ η); equal to the blockwise sum."""
    xi._same(eta)
    s = pushforward(codiagonal(xi.sub), pullback(diagonal(xi.quotient), ext_direct_sum(xi, eta)))
    if s != xi + eta:
        raise AssertionError("Baer sum disagrees with blockwise addition")
    return s


# invertible-element searches

def _chunks(total: int, cap: int):
    """Geometrically growing [start, stop) windows; early hits stay cheap."""
    start, size = 0, 8
    while start < total:
        stop = min(total, start + size)
        yield start, stop
        start, size = stop, min(cap, size * 4)


def affine_search(particular: np.ndarray, kernel: np.ndarray, accept: Callable[[np.ndarray], np.ndarray],
                  p: int, bounds: SearchBounds = DEFAULT_BOUNDS, chunk: int = 2048) -> np.ndarray:
    """First accepted point of ``particular + span(kernel)``.

    Enumerates coefficient vectors in lexicographic order when the space has at
    most ``bounds.max_enumeration`` points, otherwise tries the particular point
    and then random samples. Raises NotIsomorphic or SearchInconclusive.
    """
    k = kernel.shape[1]
    total = p ** k if k < 64 else None
    if total is not None and total <= bounds.max_enumeration:
        weights = p ** np.arange(k - 1, -1, -1, dtype=np.int64)
        for start, stop in _chunks(total, chunk):
            idx = np.arange(start, stop, dtype=np.int64)
            coeff = (idx[:, None] // weights[None, :]) % p
            cand = (particular[None, :] + coeff @ kernel.T) % p
            ok = accept(cand)
            if ok.any():
                return cand[int(np.argmax(ok))]
        raise NotIsomorphic("no invertible element in the search space")
    rng = np.random.default_rng(bounds.seed)
    coeff = rng.integers(0, p, size=(bounds.samples, k), dtype=np.int64)
    coeff[0] = 0
    for start, stop in _chunks(bounds.samples, chunk):
        cand = (particular[None, :] + coeff[start:stop] @ kernel.T) % p
        ok = accept(cand)
        if ok.any():
            return cand[int(np.argmax(ok))]
    raise SearchInconclusive(f"no invertible element among {bounds.samples} samples")


def vertex_rank_test(src: Rep, dst: Rep, targets: Sequence[int]) -> Callable[[np.ndarray], np.ndarray]:
    """Acceptor: every vertex block of a candidate has the prescribed rank."""
    off = _offsets(src, dst)
    p = src.field.p

    def accept(cand: np.ndarray) -> np.ndarray:
        ok = np.ones(cand.shape[0], dtype=bool)
        for v in range(len(src.dims)):
            r, c = dst.dims[v], src.dims[v]
            if r == 0 or c == 0:
                ok &= targets[v] == 0
                continue
            blocks = cand[:, off[v]:off[v + 1]].reshape(-1, r, c)
            ok &= batched_rank(blocks, p) == targets[v]
        return ok

    return accept


def iso_find(m: Rep, n: Rep, bounds: SearchBounds = DEFAULT_BOUNDS) -> RepMorphism:
    """An isomorphism m -> n, or NotIsomorphic / SearchInconclusive."""
    if m.quiver != n.quiver or m.dims != n.dims:
        raise NotIsomorphic("dimension vectors differ")
    k = _hom_kernel(m, n)
    zero = np.zeros(k.shape[0], dtype=np.int64)
    v = affine_search(zero, k, vertex_rank_test(m, n, m.dims), m.field.p, bounds)
    return _unvec(m, n, v)


# images and quotients

def image_subrep(f: RepMorphism) -> tuple[Rep, RepMorphism, RepMorphism]:
    """(image, inclusion, corestriction) with f = inclusion ∘ corestriction."""
    src, dst = f.src, f.dst
    fld = f.field
    bases = []
    for v, m in enumerate(f.vertex_maps):
        if m.cols == 0 or m.rows == 0:
            bases.append(fld.zeros(dst.dims[v], 0))
            continue
        r, piv = _rref_array(m.a.T, fld.p)
        bases.append(Matrix._wrap(fld, r[: len(piv)].T.copy()))
    dims = tuple(b.cols for b in bases)
    maps = []
    for k, (s, t) in enumerate(src.quiver.arrows):
        maps.append(solve_canonical(bases[t], dst.arrow_maps[k] @ bases[s]) if dims[t] else fld.zeros(0, dims[s]))
    im = Rep(src.quiver, fld, dims, tuple(maps))
    inc = RepMorphism(im, dst, tuple(bases))
    co = RepMorphism(src, im, tuple(solve_canonical(bases[v], f.vertex_maps[v]) if dims[v] else fld.zeros(0, src.dims[v])
                                    for v in range(len(dims))))
    return im, inc, co


def quotient_rep(c: Rep, sub_inclusion: RepMorphism) -> tuple[Rep, RepMorphism]:
    """Quotient of c by an injective morphism into it, with the projection."""
    if sub_inclusion.dst != c:
        raise ValueError("inclusion does not land in c")
    if not sub_inclusion.is_injective():
        raise ValueError("quotient by a non-injective morphism")
    fld = c.field
    comps, projs = [], []
    for v in range(len(c.dims)):
        i = sub_inclusion.vertex_maps[v]
        k = complement_basis(i, c.dims[v])
        t = hstack([i, k])
        tinv = invert(t)
        comps.append(k)
        projs.append(Matrix._wrap(fld, tinv.a[i.cols:].copy()))
    dims = tuple(k.cols for k in comps)
    maps = tuple(projs[t] @ c.arrow_maps[k] @ comps[s] for k, (s, t) in enumerate(c.quiver.arrows))
    q = Rep(c.quiver, fld, dims, maps)
    return q, RepMorphism(c, q, tuple(projs))
