"""Check registry and the fault hook used by negative controls."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from ..basecat import BaseCategory
from ..exactlin import Matrix, _kernel_array
from ..karoubi import FClass, KarMorphism, _kmk
from ..quiverrep import ExtCocycle, RepMorphism, _mk, _vec


class Tamper:
    """Flips one matrix entry of the intermediate named by ``fault["target"]``."""

    def __init__(self, fault: dict | None):
        self.fault = fault
        self.hit = False

    def __call__(self, name: str, value: Any) -> Any:
        if not self.fault or self.fault.get("target") != name:
            return value
        out = _flip(value, self.fault)
        self.hit = out is not value
        return out


def _flip_list(mats: tuple[Matrix, ...], fault: dict) -> tuple[Matrix, ...] | None:
    n = len(mats)
    if n == 0:
        return None
    start = int(fault.get("vertex", 0)) % n
    for off in range(n):
        i = (start + off) % n
        m = mats[i]
        if m.rows and m.cols:
            a = m.a.copy()
            a[int(fault.get("row", 0)) % m.rows, int(fault.get("col", 0)) % m.cols] += 1
            out = list(mats)
            out[i] = Matrix._wrap(m.field, a % m.p)
            return tuple(out)
    return None


def _flip(value: Any, fault: dict) -> Any:
    if isinstance(value, RepMorphism):
        mats = _flip_list(value.vertex_maps, fault)
        return value if mats is None else _mk(value.src, value.dst, mats)
    if isinstance(value, KarMorphism):
        inner = _flip(value.map, fault)
        return value if inner is value.map else _kmk(value.src, value.dst, inner)
    if isinstance(value, ExtCocycle):
        mats = _flip_list(value.blocks, fault)
        return value if mats is None else ExtCocycle(value.quotient, value.sub, mats)
    if isinstance(value, FClass):
        inner = _flip(value.cocycle, fault)
        return value if inner is value.cocycle else FClass(value.quotient, value.sub, inner)
    raise TypeError(f"cannot corrupt a {type(value).__name__}")


@dataclass(frozen=True)
class Check:
    name: str
    gen: Callable[[np.random.Generator, BaseCategory, int], dict]
    verify: Callable[[BaseCategory, dict, Tamper], dict]
    target: str

    @property
    def suite(self) -> str:
        return self.name.split(".")[0]


REGISTRY: dict[str, Check] = {}


def register(name: str, gen, target: str):
    def deco(verify):
        REGISTRY[name] = Check(name, gen, verify, target)
        return verify
    return deco


def require(cond: bool, msg: str) -> None:
    if not cond:
        raise AssertionError(msg)


def kernel_combo(rng: np.random.Generator, cols: list[np.ndarray], p: int) -> np.ndarray:
    """Random element of the kernel of the matrix with the given columns."""
    if not cols:
        return np.zeros(0, dtype=np.int64)
    m = np.stack(cols, axis=1) % p
    k = _kernel_array(m, p)
    if k.shape[1] == 0:
        return np.zeros(len(cols), dtype=np.int64)
    return (k @ rng.integers(0, p, size=k.shape[1], dtype=np.int64)) % p


def combine(ms: list, coeffs: np.ndarray, zero):
    out = zero
    for m, c in zip(ms, coeffs):
        if c:
            out = out + m * int(c)
    return out


def vec(m) -> np.ndarray:
    return _vec(m.map if isinstance(m, KarMorphism) else m)
