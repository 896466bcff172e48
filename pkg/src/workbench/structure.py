"""Class membership and the structural taxonomy used by discharging.

Conventions:

* A face is *internal* when none of its vertices lies on the outer cycle C.
* ``k-`` / ``k+`` degree bounds are inclusive.
* Pendant relations are stored per incidence: ``(donor, three_vertex, face)``
  for pendant 3-faces and ``(donor, special_vertex, face)`` for pendant
  special 5-faces.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Sequence

from workbench.errors import NoOuterCycle, NotA6Cycle, NotACycle
from workbench.plane_graph import (
    Cycle,
    Face,
    PlaneGraph,
    canonical_cycle,
    check_cycle,
    cycles_of_length,
)

F3_ONE, F3_MANY, F5_ONE, F5_MANY = "F3'", "F3''", "F5'", "F5''"
INTERNAL, OUTER, OTHER = "internal", "outer", "other"

# pendant 3-face signatures that R3b, R2b and several lemmas talk about
LIGHT_PENDANT = ("3,3,5-", "3,4,4")


# ---------------------------------------------------------------------------
# degree patterns


def _token_ok(deg: int, token: str) -> bool:
    if token.endswith("+"):
        return deg >= int(token[:-1])
    if token.endswith("-"):
        return deg <= int(token[:-1])
    return deg == int(token)


@lru_cache(maxsize=4096)
def _matches(signature: tuple[int, ...], pattern: str) -> bool:
    tokens = [t.strip() for t in pattern.split(",")]
    if len(tokens) != len(signature):
        return False
    return any(
        all(_token_ok(d, t) for d, t in zip(perm, tokens))
        for perm in set(permutations(signature))
    )


def matches(signature: Sequence[int], pattern: str) -> bool:
    """Whether a degree multiset fits a pattern such as ``"3,4-,4"``.

    >>> matches((3, 3, 4), "3,4-,4")
    True
    >>> matches((3, 5, 5), "3,3,5-")
    False
    """
    return _matches(tuple(sorted(signature)), pattern)


def face_signature(g: PlaneGraph, f: Face) -> tuple[int, ...]:
    return tuple(sorted(g.degree(v) for v in f.vertices))


# ---------------------------------------------------------------------------
# triangles and class membership


def triangles(g: PlaneGraph) -> list[Cycle]:
    return cycles_of_length(g, 3)


def _distance_between(g: PlaneGraph, a: Sequence[int], b: Sequence[int]) -> int | float:
    target = set(b)
    dist = {v: 0 for v in a}
    queue = deque(a)
    while queue:
        v = queue.popleft()
        if v in target:
            return dist[v]
        for w in g.neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return math.inf


def _closest_triangles(g: PlaneGraph) -> tuple[int | float, tuple[Cycle, Cycle] | None]:
    tris = triangles(g)
    best: int | float = math.inf
    pair = None
    for i, t1 in enumerate(tris):
        for t2 in tris[i + 1:]:
            d = _distance_between(g, t1, t2)
            if d < best:
                best, pair = d, (t1, t2)
    return best, pair


def triangle_distance(g: PlaneGraph) -> int | float:
    """Least path length between the vertex sets of two distinct triangles.

    ``math.inf`` when the graph has fewer than two triangles.
    """
    return _closest_triangles(g)[0]


@dataclass(frozen=True)
class ClassVerdict:
    member: bool
    four_cycle: Cycle | None = None
    close_triangles: tuple[Cycle, Cycle] | None = None
    distance: int | float = math.inf

    def to_dict(self) -> dict:
        return {
            "in_class": self.member,
            "four_cycle": list(self.four_cycle) if self.four_cycle else None,
            "close_triangles": [list(t) for t in self.close_triangles] if self.close_triangles else None,
            "triangle_distance": None if self.distance == math.inf else self.distance,
        }


def is_class_member(g: PlaneGraph) -> ClassVerdict:
    """Plane, no 4-cycle and triangles at distance at least two."""
    fours = cycles_of_length(g, 4)
    dist, pair = _closest_triangles(g)
    four = fours[0] if fours else None
    close = pair if dist < 2 else None
    return ClassVerdict(four is None and close is None, four, close, dist)


# ---------------------------------------------------------------------------
# bad 6-cycles


def _side_faces(g: PlaneGraph, cycle: Cycle) -> tuple[set[int], set[int]]:
    """Split the faces into the two regions bounded by ``cycle``.

    Returns ``(interior, exterior)``; the exterior holds the outer face.
    """
    k = len(cycle)
    cut = {frozenset((cycle[i], cycle[(i + 1) % k])) for i in range(k)}
    nbrs: dict[int, set[int]] = {f.id: set() for f in g.faces}
    for u, v in g.edges():
        if frozenset((u, v)) in cut:
            continue
        a, b = g.face_of_dart(u, v).id, g.face_of_dart(v, u).id
        nbrs[a].add(b)
        nbrs[b].add(a)
    start = g.outer.face if g.outer is not None else 0
    exterior = {start}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for h in nbrs[f]:
            if h not in exterior:
                exterior.add(h)
                queue.append(h)
    interior = {f.id for f in g.faces} - exterior
    return interior, exterior


def matched_triangles(g: PlaneGraph, cycle: Sequence[int], interior_only: bool | None = None) -> list[Cycle]:
    """Triangles matched to alternate vertices of a 6-cycle.

    With ``interior_only`` the triangle must lie in the region of the cycle
    away from the outer face; by default that is required exactly when the
    graph has a designated outer cycle.
    """
    try:
        cyc = check_cycle(g, cycle, length=6)
    except NotACycle as exc:
        raise NotA6Cycle(str(exc)) from None
    if interior_only is None:
        interior_only = g.outer is not None
    on = set(cyc)
    found = []
    for tri in triangles(g):
        if on & set(tri):
            continue
        for cls in (cyc[0::2], cyc[1::2]):
            if any(all(g.has_edge(a, b) for a, b in zip(cls, perm)) for perm in permutations(tri)):
                found.append(tri)
                break
    if interior_only and found:
        interior, _ = _side_faces(g, cyc)
        found = [t for t in found if g.face_of_dart(t[0], g.neighbors(t[0])[0]).id in interior]
    return found


def classify_6cycle(g: PlaneGraph, cycle: Sequence[int], interior_only: bool | None = None) -> str:
    return "bad" if matched_triangles(g, cycle, interior_only) else "good"


def is_interior_triangle_of_bad_6cycle(g: PlaneGraph, tri: Sequence[int]) -> bool:
    target = canonical_cycle(tri)
    return any(
        target in {canonical_cycle(t) for t in matched_triangles(g, c)}
        for c in cycles_of_length(g, 6)
    )


# ---------------------------------------------------------------------------
# structure index


@dataclass(frozen=True)
class VertexInfo:
    degree: int
    on_outer: bool
    triangular: bool
    faces: tuple[int, ...]
    pendant_faces: tuple[int, ...]
    special_faces: tuple[int, ...]
    potentially_special: bool
    good_5: bool | None
    good_4plus: bool

    @property
    def special(self) -> bool:
        return bool(self.special_faces)


@dataclass(frozen=True)
class FaceInfo:
    id: int
    degree: int
    signature: tuple[int, ...]
    internal: bool
    f_class: str
    rich: bool


@dataclass
class StructureIndex:
    graph: PlaneGraph
    vertices: dict[int, VertexInfo]
    faces: list[FaceInfo]
    pendant: list[tuple[int, int, int]] = field(default_factory=list)
    pendant_special: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def outer(self):
        return self.graph.outer

    def face_vertices(self, fid: int) -> tuple[int, ...]:
        return self.graph.faces[fid].vertices

    def to_dict(self) -> dict:
        g = self.graph
        return {
            "outer": list(g.outer.vertices),
            "vertices": [
                {
                    "vertex": v,
                    "label": g.label(v),
                    "degree": info.degree,
                    "on_outer": info.on_outer,
                    "triangular": info.triangular,
                    "special": info.special,
                    "potentially_special": info.potentially_special,
                    "good_4plus": info.good_4plus,
                    "pendant_faces": list(info.pendant_faces),
                }
                for v, info in self.vertices.items()
            ],
            "faces": [
                {
                    "face": fi.id,
                    "degree": fi.degree,
                    "vertices": list(g.faces[fi.id].vertices),
                    "signature": list(fi.signature),
                    "class": fi.f_class,
                    "rich": fi.rich,
                }
                for fi in self.faces
            ],
            "pendant": [list(t) for t in self.pendant],
            "pendant_special": [list(t) for t in self.pendant_special],
        }


def _face_neighbours(f: Face, v: int) -> list[tuple[int, int]]:
    vs = f.vertices
    k = len(vs)
    return [(vs[i - 1], vs[(i + 1) % k]) for i in range(k) if vs[i] == v]


def build_structure_index(g: PlaneGraph) -> StructureIndex:
    if g.outer is None:
        raise NoOuterCycle("structure index needs a designated outer cycle")
    on_c = set(g.outer.vertices)
    deg = {v: g.degree(v) for v in g.vertices}

    f_class: dict[int, str] = {}
    internal: dict[int, bool] = {}
    for f in g.faces:
        k = len(f.vertex_set & on_c)
        internal[f.id] = k == 0 and f.id != g.outer.face
        if f.id == g.outer.face:
            f_class[f.id] = OUTER
        elif k == 0:
            f_class[f.id] = INTERNAL
        elif f.degree == 3:
            f_class[f.id] = F3_ONE if k == 1 else F3_MANY
        elif f.degree == 5:
            f_class[f.id] = F5_ONE if k == 1 else F5_MANY
        else:
            f_class[f.id] = OTHER
    sig = {f.id: face_signature(g, f) for f in g.faces}

    faces_at = {v: tuple(f.id for f in g.faces_at(v)) for v in g.vertices}
    triangular = {v: any(g.faces[i].degree == 3 for i in faces_at[v]) for v in g.vertices}

    pendant = []
    for f in g.faces:
        if f.degree != 3 or not internal[f.id]:
            continue
        for x in f.vertices:
            if deg[x] != 3:
                continue
            for v in g.neighbors(x):
                if v not in f.vertex_set:
                    pendant.append((v, x, f.id))
    pendant.sort()

    special_faces: dict[int, list[int]] = {v: [] for v in g.vertices}
    for f in g.faces:
        if f.degree != 5 or not internal[f.id]:
            continue
        for v in f.vertex_set:
            if deg[v] != 3:
                continue
            if any(deg[a] <= 4 and deg[b] <= 4 for a, b in _face_neighbours(f, v)):
                special_faces[v].append(f.id)

    pendant_special = []
    for v, fids in special_faces.items():
        for fid in fids:
            fv = g.faces[fid].vertex_set
            for x in g.neighbors(v):
                if x not in fv and (deg[x] >= 5 or x in on_c):
                    pendant_special.append((x, v, fid))
    pendant_special.sort()

    potentially = {
        v: deg[v] == 3
        and v not in on_c
        and sum(1 for w in g.neighbors(v) if deg[w] <= 4 and w not in on_c) >= 2
        for v in g.vertices
    }

    light_pendant_of: dict[int, set[int]] = {v: set() for v in g.vertices}
    for v, _x, fid in pendant:
        if any(matches(sig[fid], p) for p in LIGHT_PENDANT):
            light_pendant_of[v] |= g.faces[fid].vertex_set

    def good_5(v: int) -> bool:
        rot = g.neighbors(v)
        tri_nbrs = set()
        for fid in faces_at[v]:
            if g.faces[fid].degree == 3:
                tri_nbrs |= g.faces[fid].vertex_set - {v}
        ok = [
            not special_faces[w] and w not in light_pendant_of[v] and w not in tri_nbrs
            for w in rot
        ]
        return any(ok[i] and ok[(i + 1) % 5] and ok[(i + 2) % 5] for i in range(5))

    good5 = {v: (good_5(v) if deg[v] == 5 else None) for v in g.vertices}
    good4p = {
        v: v not in on_c
        and (
            (deg[v] == 4 and not triangular[v])
            or (deg[v] == 5 and bool(good5[v]))
            or deg[v] >= 6
        )
        for v in g.vertices
    }

    def rich(f: Face) -> bool:
        if f.degree != 5 or not internal[f.id]:
            return False
        vs = f.vertices
        for i, gv in enumerate(vs):
            if good4p[gv]:
                others = sum(1 for j, w in enumerate(vs) if j != i and deg[w] >= 5)
                if others >= 2:
                    return True
        return False

    pend_by_v: dict[int, list[int]] = {v: [] for v in g.vertices}
    for v, _x, fid in pendant:
        if fid not in pend_by_v[v]:
            pend_by_v[v].append(fid)

    vertices = {
        v: VertexInfo(
            degree=deg[v],
            on_outer=v in on_c,
            triangular=triangular[v],
            faces=faces_at[v],
            pendant_faces=tuple(pend_by_v[v]),
            special_faces=tuple(special_faces[v]),
            potentially_special=potentially[v],
            good_5=good5[v],
            good_4plus=good4p[v],
        )
        for v in g.vertices
    }
    faces = [
        FaceInfo(f.id, f.degree, sig[f.id], internal[f.id], f_class[f.id], rich(f))
        for f in g.faces
    ]
    return StructureIndex(g, vertices, faces, pendant, pendant_special)
