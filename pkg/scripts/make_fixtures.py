"""Regenerate the shipped .rot fixtures from straight-line drawings.

Run from the repository root:  python3 scripts/make_fixtures.py
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
from workbench.plane_graph import PlaneGraph, emit_rotation_text  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "src" / "workbench" / "data" / "fixtures"


def ring(k, r, start=90.0):
    return [
        (r * math.cos(math.radians(start - 360 * i / k)), r * math.sin(math.radians(start - 360 * i / k)))
        for i in range(k)
    ]


def cyc(k, first=1):
    return [(first + i, first + (i + 1) % k) for i in range(k)]


fx = {}
for k in (3, 4, 5, 6):
    fx["K3" if k == 3 else f"C{k}"] = (dict(enumerate(ring(k, 3), 1)), cyc(k), None, None, None)
fx["C5_chord"] = (dict(enumerate(ring(5, 3), 1)), cyc(5) + [(1, 3)], None, None, "C5 with the chord 1-3")
fx["K4"] = (dict(enumerate(ring(3, 4) + [(0, 0)], 1)), [(1, 2), (2, 3), (3, 1), (1, 4), (2, 4), (3, 4)], None, None, None)
fx["K4_minus_edge"] = (
    {1: (0, 0), 2: (2, 1), 3: (2, -1), 4: (4, 0)},
    [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)], None, None, "two triangles sharing the edge 2-3",
)
fx["bowtie"] = (
    {1: (0, 0), 2: (-2, 1), 3: (-2, -1), 4: (2, 1), 5: (2, -1)},
    [(1, 2), (2, 3), (3, 1), (1, 4), (4, 5), (5, 1)], None, None, "two triangles sharing vertex 1",
)
fx["bowtie_spacer"] = (
    {1: (-4, 1), 2: (-4, -1), 3: (-2, 0), 4: (0, 0), 5: (2, 0), 6: (4, 1), 7: (4, -1)},
    [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6), (6, 7), (7, 5)], None, None,
    "triangles 123 and 567 joined by the path 3-4-5",
)
fx["single_edge"] = ({1: (0, 0), 2: (1, 0)}, [(1, 2)], None, None, None)
fx["double_pyramid"] = (
    {1: (0, 0), 2: (10, 0), 3: (5, 8), 4: (5, 3), 5: (5, 20)},
    [(1, 2), (2, 3), (3, 1), (4, 1), (4, 2), (4, 3), (5, 1), (5, 2), (5, 3)],
    ["x", "y", "z", "a", "b"], None, "triangle xyz with apex a on one side and apex b on the other",
)
tri = [ring(6, 1.5)[i] for i in (0, 2, 4)]
fx["B9"] = (
    dict(enumerate(ring(6, 4) + tri, 1)),
    cyc(6) + [(7, 8), (8, 9), (9, 7), (1, 7), (3, 8), (5, 9)],
    ["u1", "u2", "u3", "u4", "u5", "u6", "t1", "t2", "t3"], None,
    "bad 6-cycle u1..u6; alternate vertices u1,u3,u5 matched to the triangle t1,t2,t3",
)

# Internal triangles whose final charge closes at exactly zero.  Hexagon 1..6
# is the outer cycle; x=7, y=8, w=9 form the triangle; donors dx=10, dy=11
# reach degree 5 through short leaves.
HEX = dict(enumerate(ring(6, 20), 1))
U1, U3, U4, U5 = 1, 3, 4, 5


def balance(kind):
    pts = dict(HEX)
    pts.update({7: (-2, 0), 8: (2, 0), 9: (0, 3)})
    edges = cyc(6) + [(7, 8), (8, 9), (9, 7), (9, U1)]
    nxt = 10

    def add(p):
        nonlocal nxt
        pts[nxt] = p
        nxt += 1
        return nxt - 1

    def donor(at, cycle_nbrs, leaves, attach):
        d = add(at)
        edges.append((attach, d))
        edges.extend((d, u) for u in cycle_nbrs)
        for p in leaves:
            edges.append((d, add(p)))

    dx = ((-7, -4), (U4, U5), [(-8, -2), (-5, -6)], 7)
    dy = ((7, -4), (U4, U3), [(8, -2), (5, -6)], 8)
    if kind == "334":
        donor(*dx); donor(*dy)
        edges.append((9, add((-2, 6))))
    elif kind == "335":
        donor(*dx); donor(*dy)
        edges.append((9, add((-2, 6))))
        edges.append((9, add((2, 6))))
    elif kind == "344":
        donor(*dx)
        edges.append((8, U3))
        edges.append((8, add((4, 1))))
        edges.append((9, add((-2, 6))))
    elif kind == "333":
        donor(*dx); donor(*dy)
    return pts, edges


notes = {
    "334": "internal (3,3,4)-face 7,8,9: 2 from the 4-vertex, 1/2 from each pendant 5-vertex",
    "335": "internal (3,3,5)-face 7,8,9: 7/4 from the 5-vertex, 5/8 from each pendant 5-vertex",
    "344": "internal (3,4,4)-face 7,8,9: 5/4 from each 4-vertex, 1/2 from the pendant 5-vertex",
    "333": "internal (3,3,3)-face 7,8,9: 1 from each pendant neighbour (two 5-vertices and C)",
}
for kind, note in notes.items():
    pts, edges = balance(kind)
    fx[f"balance_{kind}"] = (pts, edges, None, [1, 2, 3, 4, 5, 6], note)

# special vertex v (on an internal 5-face, both face-neighbours 4-) and its
# pendant 5-neighbour x
pent = ring(5, 3)
pts = dict(HEX)
pts.update(dict(enumerate(pent, 7)))   # 7 = v at the top, 8..11 clockwise
pts.update({12: (0, 8), 13: (-2, 10)})  # x and a leaf of x
edges = cyc(6) + cyc(5, 7) + [(7, 12), (12, U1), (12, 2), (12, 6), (12, 13), (8, U3), (9, U4)]
fx["special_gadget"] = (
    pts, edges, ["u1", "u2", "u3", "u4", "u5", "u6", "v", "p2", "p3", "p4", "p5", "x", "leaf"],
    [1, 2, 3, 4, 5, 6], "special vertex v on an internal 5-face with a pendant 5-neighbour x",
)

# colorability gadgets for the lemma oracle
pts = dict(enumerate(ring(5, 10), 1))
pts.update({6: (-3, 4), 7: (3, -2)})
fx["gadget_L1"] = (pts, cyc(5) + [(1, 6), (6, 7), (7, 3)], None, [1, 2, 3, 4, 5],
                   "internal 2-vertices 6 and 7 inside the outer 5-cycle")

pts = dict(enumerate(ring(5, 10), 1))
pts.update({6: (0, 0), 7: (0, 4), 8: (3, -1), 9: (-3, -1)})
fx["gadget_L2"] = (pts, cyc(5) + [(6, 7), (6, 8), (6, 9), (7, 1), (8, 3), (9, 4)], None, [1, 2, 3, 4, 5],
                   "internal 3-vertex 6 whose neighbours are internal 4- vertices off C")

pts = dict(enumerate(ring(6, 10), 1))
pts.update({7: (-3, -2), 8: (3, -2), 9: (0, 3), 10: (6, -3)})
fx["gadget_L7"] = (
    pts, cyc(6) + [(7, 8), (8, 9), (9, 7), (9, 1), (7, 5), (8, 10), (10, 3)],
    ["u1", "u2", "u3", "u4", "u5", "u6", "x", "y", "z", "y'"], [1, 2, 3, 4, 5, 6],
    "internal (3,3,3)-face x,y,z whose pendant neighbour y' is an internal 2-vertex",
)

if __name__ == "__main__":
    for name, (p, e, lab, outer, note) in fx.items():
        g = PlaneGraph.from_coordinates(p, e, outer=outer, labels=lab)
        print(f"{name:16s} n={g.n:2d} m={g.m:2d} faces={sorted(f.degree for f in g.faces)}")
        txt = emit_rotation_text(g)
        if note:
            txt = f"# {note}\n" + txt
        (OUT / f"{name}.rot").write_text(txt)
