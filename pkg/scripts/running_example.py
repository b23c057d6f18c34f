"""Walk through the A2 / F_2 example: groups, realizations, splitting and weak objects."""

from __future__ import annotations

from pathlib import Path

from idemext.basecat import e_group
from idemext.config import load_config
from idemext.karoubi import f_space, kar_hom_dim, kar_iso_find, kar_sum, r_realize
from idemext.weakcomp import is_weak_object, splits_in_base, weak_extension_closed_check

FIX = Path(__file__).resolve().parents[1] / "fixtures"


def main() -> None:
    cfg = load_config(FIX / "a2_balanced.json")
    cat, g = cfg.category, cfg.objects["G"]
    ge, gf = cfg.kar_object("G", "e"), cfg.kar_object("G", "f")
    print("dim E(G,G)          =", e_group(cat, g, g).dim)
    print("dim F((G,e),(G,f))  =", f_space(cat, ge, gf).dim)
    print("dim F((G,f),(G,e))  =", f_space(cat, gf, ge).dim)
    print("dim Hom((G,e),(G,e)) =", kar_hom_dim(ge, ge))
    t = r_realize(cat, f_space(cat, ge, gf).element([1]))
    print("middle of the realization: dims", t.mid.base.dims, "image", t.mid.image_dims())
    iso = kar_iso_find(t.mid, cfg.kar_object("P", None), cat)
    print("iso to (P,1):", [m.a.tolist() for m in iso.map.vertex_maps])
    print("(G,e) splits in the base:", splits_in_base(cat, g, ge.idem))
    gg = kar_sum([ge, gf])
    print("(G+G, e+f) is weak:", is_weak_object(cat, gg))
    print("extension closure:", weak_extension_closed_check(cat, f_space(cat, gg, gg).element([1])))


if __name__ == "__main__":
    main()
