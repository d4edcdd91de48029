#!/usr/bin/env python3
"""Dump the standard JSON fixtures (groups, cocycles, elements, sets) to data/."""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from twistlab import fixtures, serialize
from twistlab.algebra import delta
from twistlab.cocycles import TableCocycle
from twistlab.groups import FreeGroup, FiniteTableGroup

OUT = pathlib.Path(__file__).resolve().parents[1] / "data"


def dump(name, obj):
    path = OUT / name
    serialize.dump_json(obj, path)
    print(f"wrote {path}")


def main():
    OUT.mkdir(exist_ok=True)

    z2 = fixtures.cyclic(2)
    s3 = fixtures.symmetric(3)
    z4sq = fixtures.cyclic_product([4, 4])
    f2 = FreeGroup(2)
    q8ext = fixtures.q8_extension()
    s4ext = fixtures.s4_v4_extension()

    for name, g in [("group_z2", z2), ("group_s3", s3), ("group_z4xz4", z4sq),
                    ("group_f2", f2), ("group_q8_extension", q8ext),
                    ("group_s4_v4_extension", s4ext)]:
        dump(f"{name}.json", g.describe())

    dump("cocycle_trivial.json", {"kind": "trivial"})
    sign = TableCocycle(z2, np.array([[1, 1], [1, -1]], dtype=complex))
    dump("cocycle_z2_sign.json", sign.to_json())
    for n in range(2, 7):
        g, q = fixtures.clock_shift_group(n), fixtures.clock_shift_cocycle(n)
        dump(f"group_z{n}sq.json", g.describe())
        dump(f"cocycle_clock_shift_{n}.json", q.to_json())
    broken = TableCocycle(s3, np.exp(2j * np.pi *
                                     np.arange(36).reshape(6, 6) / 7.0))
    dump("cocycle_s3_broken.json", broken.to_json())
    dump("cocycle_f2_random_coboundary.json",
         {"kind": "coboundary", "beta": {"random-seed": 1}})
    dump("cocycle_q8ext_coboundary.json",
         fixtures.random_coboundary(q8ext, seed=7).to_json())

    dump("element_z2_ones.json",
         serialize.element_to_json(delta(z2, 0) + delta(z2, 1)))
    x, y = f2.generator(1), f2.generator(2)
    xi, yi = f2.invert(x), f2.invert(y)
    sphere1 = delta(f2, x) + delta(f2, xi) + delta(f2, y) + delta(f2, yi)
    dump("element_f2_sphere1.json", serialize.element_to_json(sphere1))
    dump("element_f2_ux.json",
         serialize.element_to_json(delta(f2, x) + delta(f2, xi)))
    dump("element_f2_t_x.json", serialize.element_to_json(delta(f2, x)))
    dump("element_f2_t_e.json", serialize.element_to_json(delta(f2, f2.identity())))
    dump("element_delta_e_ref.json",
         {"group": "ref", "terms": [{"g": "", "re": 1.0, "im": 0.0}]})

    dump("set_z4xz4_S.json", serialize.element_set_to_json(
        z4sq, [z4sq.index_of_label(l) for l in [(1, 0), (0, 1), (1, 1)]]))
    yy = f2.compose(y, y)
    dump("set_f2_F_y_y2.json", serialize.element_set_to_json(f2, [y, yy]))
    dump("set_f2_F_x_xinv.json", serialize.element_set_to_json(f2, [x, xi]))
    dump("set_f2_F_xy_xy2.json", serialize.element_set_to_json(
        f2, [f2.compose(x, y), f2.compose(x, yy)]))


if __name__ == "__main__":
    main()
