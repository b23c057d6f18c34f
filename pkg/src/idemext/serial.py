"""Tagged JSON encoding of categories, objects, morphisms, classes and triangles.

Matrices are row-major integer lists with an explicit shape. Values inside a
payload share the quiver and field of the enclosing category.
"""

from __future__ import annotations

import json
from typing import Any

from .basecat import BaseCategory, ambient, balanced, formal
from .exactlin import Matrix, PrimeField
from .karoubi import FClass, FTriangle, KarMorphism, KarObject
from .quiverrep import Conflation, ExtCocycle, Quiver, Rep, RepMorphism
from .weakcomp import SplitWitness


def dump_matrix(m: Matrix) -> dict:
    return {"shape": list(m.shape), "entries": [int(x) for x in m.entries()]}


def load_matrix(field: PrimeField, d: dict) -> Matrix:
    r, c = d["shape"]
    flat = d["entries"]
    if len(flat) != r * c:
        raise ValueError(f"matrix of shape {(r, c)} needs {r * c} entries, got {len(flat)}")
    return field.matrix([flat[i * c:(i + 1) * c] for i in range(r)], shape=(r, c))


def dump_quiver(q: Quiver) -> dict:
    return {"vertices": q.vertices, "arrows": [list(a) for a in q.arrows]}


def load_quiver(d: dict) -> Quiver:
    return Quiver(int(d["vertices"]), tuple(tuple(int(x) for x in a) for a in d["arrows"]))


def dump_rep(m: Rep) -> dict:
    return {"dims": list(m.dims), "arrows": [dump_matrix(a) for a in m.arrow_maps]}


def load_rep(q: Quiver, field: PrimeField, d: dict) -> Rep:
    dims = tuple(int(x) for x in d["dims"])
    if len(dims) != q.vertices:
        raise ValueError(f"dims has {len(dims)} entries for {q.vertices} vertices")
    if len(d["arrows"]) != len(q.arrows):
        raise ValueError(f"expected {len(q.arrows)} arrow matrices, got {len(d['arrows'])}")
    return Rep(q, field, dims, tuple(load_matrix(field, a) for a in d["arrows"]))


def dump_category(cat: BaseCategory) -> dict:
    out: dict[str, Any] = {"prime": cat.field.p, "quiver": dump_quiver(cat.quiver)}
    if cat.kind == "balanced":
        out["backend"] = {"kind": "balanced", "weights": list(cat.constraint.weights)}
    elif cat.kind == "formal":
        out["backend"] = {"kind": "formal", "generators": [dump_rep(g) for g in cat.generators],
                          "bound": cat.formal_bound}
    else:
        out["backend"] = {"kind": "ambient"}
    return out


def load_category(d: dict) -> BaseCategory:
    field = PrimeField(int(d["prime"]))
    q = load_quiver(d["quiver"])
    b = d["backend"]
    if b["kind"] == "balanced":
        return balanced(q, field, b.get("weights"))
    if b["kind"] == "formal":
        return formal(q, field, [load_rep(q, field, g) for g in b["generators"]], bound=int(b.get("bound", 4)))
    if b["kind"] == "ambient":
        return ambient(q, field)
    raise ValueError(f"unknown backend kind {b['kind']!r}")


class Codec:
    """Tagged encoder and decoder for values over a fixed quiver and field."""

    def __init__(self, quiver: Quiver, field: PrimeField):
        self.quiver, self.field = quiver, field

    def dump(self, v: Any) -> Any:
        if isinstance(v, Rep):
            return {"t": "rep", **dump_rep(v)}
        if isinstance(v, RepMorphism):
            return {"t": "mor", "src": self.dump(v.src), "dst": self.dump(v.dst),
                    "maps": [dump_matrix(m) for m in v.vertex_maps]}
        if isinstance(v, ExtCocycle):
            return {"t": "coc", "quotient": self.dump(v.quotient), "sub": self.dump(v.sub),
                    "blocks": [dump_matrix(m) for m in v.blocks]}
        if isinstance(v, Conflation):
            return {"t": "conf", "x": self.dump(v.x), "y": self.dump(v.y), "cls": self.dump(v.cls)}
        if isinstance(v, KarObject):
            return {"t": "kobj", "base": self.dump(v.base), "idem": self.dump(v.idem)}
        if isinstance(v, KarMorphism):
            return {"t": "kmor", "src": self.dump(v.src), "dst": self.dump(v.dst), "map": self.dump(v.map)}
        if isinstance(v, FClass):
            return {"t": "fcls", "quotient": self.dump(v.quotient), "sub": self.dump(v.sub),
                    "cocycle": self.dump(v.cocycle)}
        if isinstance(v, FTriangle):
            return {"t": "ftri", "u": self.dump(v.u), "v": self.dump(v.v), "cls": self.dump(v.cls),
                    "base": None if v.base is None else self.dump(v.base)}
        if isinstance(v, SplitWitness):
            return {"t": "split", "obj": self.dump(v.obj), "r": self.dump(v.r), "c": self.dump(v.c)}
        if isinstance(v, dict):
            return {"t": "dict", "items": {k: self.dump(x) for k, x in v.items()}}
        if isinstance(v, (list, tuple)):
            return {"t": "list", "items": [self.dump(x) for x in v]}
        if v is None or isinstance(v, (bool, str)):
            return v
        if isinstance(v, int) or hasattr(v, "__index__"):
            return int(v)
        raise TypeError(f"cannot serialize {type(v).__name__}")

    def load(self, d: Any) -> Any:
        if not isinstance(d, dict):
            return d
        t = d["t"]
        f = self.field
        if t == "rep":
            return load_rep(self.quiver, f, d)
        if t == "mor":
            return RepMorphism(self.load(d["src"]), self.load(d["dst"]), tuple(load_matrix(f, m) for m in d["maps"]))
        if t == "coc":
            return ExtCocycle(self.load(d["quotient"]), self.load(d["sub"]), tuple(load_matrix(f, m) for m in d["blocks"]))
        if t == "conf":
            return Conflation(self.load(d["x"]), self.load(d["y"]), self.load(d["cls"]))
        if t == "kobj":
            return KarObject(self.load(d["base"]), self.load(d["idem"]))
        if t == "kmor":
            return KarMorphism(self.load(d["src"]), self.load(d["dst"]), self.load(d["map"]))
        if t == "fcls":
            return FClass(self.load(d["quotient"]), self.load(d["sub"]), self.load(d["cocycle"]))
        if t == "ftri":
            base = d.get("base")
            return FTriangle(self.load(d["u"]), self.load(d["v"]), self.load(d["cls"]),
                             None if base is None else self.load(base))
        if t == "split":
            return SplitWitness(self.load(d["obj"]), self.load(d["r"]), self.load(d["c"]))
        if t == "dict":
            return {k: self.load(x) for k, x in d["items"].items()}
        if t == "list":
            return [self.load(x) for x in d["items"]]
        raise ValueError(f"unknown tag {t!r}")


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
