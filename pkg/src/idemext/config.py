"""Category description files: parsing and validation with field-level diagnostics."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .basecat import BaseCategory, balanced, formal, membership
from .exactlin import Matrix, PrimeField
from .karoubi import KarObject
from .quiverrep import Quiver, Rep, RepMorphism


class ConfigParseError(ValueError):
    """The file is not valid JSON."""


class ConfigError(ValueError):
    """The file parses but describes an invalid category; ``path`` names the field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class CategoryConfig:
    category: BaseCategory
    objects: dict[str, Rep] = field(default_factory=dict)
    idempotents: dict[str, tuple[str, RepMorphism]] = field(default_factory=dict)
    fault: dict | None = None

    def obj(self, name: str) -> Rep:
        if name not in self.objects:
            raise ConfigError(f"objects.{name}", "no such object")
        return self.objects[name]

    def kar_object(self, obj_name: str, idem_name: str | None) -> KarObject:
        """(A, p) for a named object and an optional named idempotent on it."""
        a = self.obj(obj_name)
        if idem_name is None:
            return KarObject.trivial(a)
        if idem_name not in self.idempotents:
            raise ConfigError(f"idempotents.{idem_name}", "no such idempotent")
        owner, p = self.idempotents[idem_name]
        if owner != obj_name:
            raise ConfigError(f"idempotents.{idem_name}.object", f"is on {owner!r}, not {obj_name!r}")
        return KarObject(a, p)


def _get(d: Any, key: str, path: str, kind: type | tuple[type, ...]) -> Any:
    if not isinstance(d, dict) or key not in d:
        raise ConfigError(f"{path}{key}", "missing")
    v = d[key]
    if not isinstance(v, kind) or isinstance(v, bool):
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise ConfigError(f"{path}{key}", f"expected {name}, got {type(v).__name__}")
    return v


def _int_list(v: Any, path: str) -> list[int]:
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise ConfigError(path, "expected a list of integers")
    return v


def _matrix(fd: PrimeField, d: Any, path: str, shape: tuple[int, int] | None = None) -> Matrix:
    sh = _int_list(_get(d, "shape", path + ".", list), path + ".shape")
    if len(sh) != 2 or min(sh) < 0:
        raise ConfigError(path + ".shape", "expected [rows, cols] with nonnegative entries")
    if shape is not None and tuple(sh) != shape:
        raise ConfigError(path + ".shape", f"expected {list(shape)}, got {sh}")
    entries = _int_list(_get(d, "entries", path + ".", list), path + ".entries")
    if len(entries) != sh[0] * sh[1]:
        raise ConfigError(path + ".entries", f"shape {sh} needs {sh[0] * sh[1]} entries, got {len(entries)}")
    r, c = sh
    return fd.matrix([entries[i * c:(i + 1) * c] for i in range(r)], shape=(r, c))


def _rep(q: Quiver, fd: PrimeField, d: Any, path: str) -> Rep:
    dims = _int_list(_get(d, "dims", path + ".", list), path + ".dims")
    if len(dims) != q.vertices or any(x < 0 for x in dims):
        raise ConfigError(path + ".dims", f"expected {q.vertices} nonnegative dimensions")
    arrows = _get(d, "arrows", path + ".", list)
    if len(arrows) != len(q.arrows):
        raise ConfigError(path + ".arrows", f"expected {len(q.arrows)} matrices, got {len(arrows)}")
    mats = tuple(_matrix(fd, m, f"{path}.arrows[{k}]", (dims[t], dims[s]))
                 for k, ((s, t), m) in enumerate(zip(q.arrows, arrows)))
    return Rep(q, fd, tuple(dims), mats)


def parse_config(raw: Any) -> CategoryConfig:
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "expected an object")
    p = _get(raw, "prime", "", int)
    try:
        fd = PrimeField(p)
    except ValueError as exc:
        raise ConfigError("prime", str(exc)) from None
    qd = _get(raw, "quiver", "", dict)
    n = _get(qd, "vertices", "quiver.", int)
    arrows = _get(qd, "arrows", "quiver.", list)
    for k, a in enumerate(arrows):
        _int_list(a, f"quiver.arrows[{k}]")
        if len(a) != 2:
            raise ConfigError(f"quiver.arrows[{k}]", "expected [source, target]")
    try:
        q = Quiver(n, tuple(tuple(a) for a in arrows))
    except ValueError as exc:
        raise ConfigError("quiver", str(exc)) from None
    bd = _get(raw, "backend", "", dict)
    kind = _get(bd, "kind", "backend.", str)
    if kind == "balanced":
        w = bd.get("weights")
        if w is not None:
            _int_list(w, "backend.weights")
            if len(w) != n:
                raise ConfigError("backend.weights", f"expected {n} weights, got {len(w)}")
        cat = balanced(q, fd, w)
    elif kind == "formal":
        gens = _get(bd, "generators", "backend.", list)
        if not gens:
            raise ConfigError("backend.generators", "at least one generator required")
        reps = [_rep(q, fd, g, f"backend.generators[{i}]") for i, g in enumerate(gens)]
        bound = bd.get("bound", 4)
        if not isinstance(bound, int) or isinstance(bound, bool) or bound < 1:
            raise ConfigError("backend.bound", "expected a positive integer")
        cat = formal(q, fd, reps, bound=bound)
    else:
        raise ConfigError("backend.kind", f"expected 'balanced' or 'formal', got {kind!r}")
    objects: dict[str, Rep] = {}
    for name, od in sorted(raw.get("objects", {}).items()):
        m = _rep(q, fd, od, f"objects.{name}")
        if not membership(cat, m):
            raise ConfigError(f"objects.{name}", "object does not lie in the category")
        objects[name] = m
    idems: dict[str, tuple[str, RepMorphism]] = {}
    for name, idd in sorted(raw.get("idempotents", {}).items()):
        path = f"idempotents.{name}"
        owner = _get(idd, "object", path + ".", str)
        if owner not in objects:
            raise ConfigError(path + ".object", f"unknown object {owner!r}")
        a = objects[owner]
        maps = _get(idd, "maps", path + ".", list)
        if len(maps) != n:
            raise ConfigError(path + ".maps", f"expected {n} matrices, got {len(maps)}")
        mats = tuple(_matrix(fd, m, f"{path}.maps[{v}]", (a.dims[v], a.dims[v])) for v, m in enumerate(maps))
        try:
            e = RepMorphism(a, a, mats)
        except ValueError as exc:
            raise ConfigError(path + ".maps", str(exc)) from None
        if not e.is_idempotent():
            raise ConfigError(path + ".maps", "not idempotent")
        idems[name] = (owner, e)
    fault = raw.get("fault")
    if fault is not None:
        if not isinstance(fault, dict) or not isinstance(fault.get("target"), str):
            raise ConfigError("fault", "expected an object with a string 'target'")
    return CategoryConfig(cat, objects, idems, fault)


def load_config(path: str | Path) -> CategoryConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{path}: {exc}") from None
    return parse_config(raw)
