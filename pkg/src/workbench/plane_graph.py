"""Plane graphs given by rotation systems.

A plane graph is stored as a rotation system: for every vertex the cyclic,
clockwise sequence of its neighbours.  Faces are recovered by face tracing
with the fixed convention

    successor of dart (u, v) is (v, w), w the neighbour right after u
    in the clockwise rotation at v,

so the same rotation system always yields the same faces, in the same order.
Vertex ids are 1-based and contiguous, as in the file formats.
"""

from __future__ import annotations

import copy
import gzip
import math
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from workbench.errors import (
    InvariantError,
    LimitError,
    NotACycle,
    ParseError,
    PreconditionError,
)

PLANAR_CODE_HEADER = b">>planar_code<<"
MAX_CYCLE_LEN = 8

Dart = tuple[int, int]
Cycle = tuple[int, ...]


@dataclass(frozen=True)
class Face:
    id: int
    boundary: tuple[Dart, ...]

    @property
    def degree(self) -> int:
        # an edge walked twice (a bridge) counts twice
        return len(self.boundary)

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        """Cyclic vertex sequence of the boundary walk (may repeat on bridges)."""
        return tuple(u for u, _ in self.boundary)

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)


@dataclass(frozen=True)
class OuterCycle:
    vertices: tuple[int, ...]
    face: int

    @property
    def r(self) -> int:
        return len(self.vertices)


class PlaneGraph:
    """Immutable simple connected plane graph.

    ``rotation[v - 1]`` is the clockwise neighbour sequence of vertex ``v``.
    Construction validates symmetry, simplicity, connectivity and Euler's
    formula; a rotation system that is not a sphere embedding is rejected.
    """

    def __init__(
        self,
        rotation: Sequence[Sequence[int]],
        outer: Sequence[int] | None = None,
        labels: Sequence[str] | None = None,
    ):
        self._rotation = tuple(tuple(int(w) for w in nbrs) for nbrs in rotation)
        self.n = len(self._rotation)
        if self.n < 1:
            raise InvariantError("a graph needs at least one vertex")
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != self.n or len(set(labels)) != self.n:
                raise InvariantError("labels must be distinct, one per vertex")
        self.labels: tuple[str, ...] | None = labels
        self._check_rotation()
        self._adj = tuple(frozenset(nbrs) for nbrs in self._rotation)
        self._pos = tuple({w: i for i, w in enumerate(nbrs)} for nbrs in self._rotation)
        self.m = sum(len(nbrs) for nbrs in self._rotation) // 2
        self._check_connected()
        self.faces: tuple[Face, ...] = tuple(trace_faces(self))
        self._dart_face = {d: f.id for f in self.faces for d in f.boundary}
        if self.n - self.m + len(self.faces) != 2:
            raise InvariantError(
                f"rotation system is not planar: n - m + f = "
                f"{self.n - self.m + len(self.faces)}"
            )
        self._memo: dict = {}
        self.outer: OuterCycle | None = None
        if outer is not None:
            self.outer = self._locate_outer(outer)

    # -- construction helpers -------------------------------------------

    def _check_rotation(self) -> None:
        n = self.n
        for v, nbrs in enumerate(self._rotation, start=1):
            if len(set(nbrs)) != len(nbrs):
                raise InvariantError(f"parallel edges at vertex {v}")
            for w in nbrs:
                if not 1 <= w <= n:
                    raise InvariantError(f"vertex {v} lists unknown neighbour {w}")
                if w == v:
                    raise InvariantError(f"loop at vertex {v}")
        for v, nbrs in enumerate(self._rotation, start=1):
            for w in nbrs:
                if v not in self._rotation[w - 1]:
                    raise InvariantError(f"asymmetric rotation: {v} lists {w} but not conversely")

    def _check_connected(self) -> None:
        seen = {1}
        queue = deque([1])
        while queue:
            v = queue.popleft()
            for w in self._rotation[v - 1]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != self.n:
            raise InvariantError("graph is disconnected")

    def _locate_outer(self, cycle: Sequence[int]) -> OuterCycle:
        cyc = check_cycle(self, cycle)
        target = canonical_cycle(cyc)
        for f in self.faces:
            if f.degree == len(cyc) and len(f.vertex_set) == len(cyc):
                if canonical_cycle(f.vertices) == target:
                    return OuterCycle(tuple(cyc), f.id)
        raise PreconditionError(f"cycle {list(cyc)} does not bound a face")

    def with_outer(self, cycle: Sequence[int] | None) -> "PlaneGraph":
        """Same embedding with another designated outer cycle (no re-validation)."""
        g = copy.copy(self)
        g.outer = None if cycle is None else self._locate_outer(cycle)
        return g

    @classmethod
    def from_coordinates(
        cls,
        points: Mapping[int, tuple[float, float]],
        edges: Iterable[tuple[int, int]],
        outer: Sequence[int] | None = None,
        labels: Sequence[str] | None = None,
    ) -> "PlaneGraph":
        """Rotation system of a straight-line drawing (vertices ``1..n``)."""
        n = len(points)
        nbrs: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
        for u, v in edges:
            nbrs[u].append(v)
            nbrs[v].append(u)

        def clockwise(v: int) -> list[int]:
            x0, y0 = points[v]
            return sorted(
                nbrs[v],
                key=lambda w: -math.atan2(points[w][1] - y0, points[w][0] - x0),
            )

        return cls([clockwise(v) for v in range(1, n + 1)], outer=outer, labels=labels)

    # -- queries ----------------------------------------------------------

    @property
    def rotation(self) -> tuple[tuple[int, ...], ...]:
        return self._rotation

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._rotation[v - 1]

    def adjacency(self, v: int) -> frozenset[int]:
        return self._adj[v - 1]

    def degree(self, v: int) -> int:
        return len(self._rotation[v - 1])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u - 1]

    def edges(self) -> list[tuple[int, int]]:
        return [(v, w) for v in self.vertices for w in self.neighbors(v) if v < w]

    def next_cw(self, v: int, u: int) -> int:
        """Neighbour of ``v`` immediately after ``u`` in clockwise order."""
        nbrs = self._rotation[v - 1]
        return nbrs[(self._pos[v - 1][u] + 1) % len(nbrs)]

    def face_of_dart(self, u: int, v: int) -> Face:
        return self.faces[self._dart_face[(u, v)]]

    def faces_at(self, v: int) -> list[Face]:
        """Distinct faces around ``v`` in rotation order."""
        ids: list[int] = []
        for w in self.neighbors(v):
            fid = self._dart_face[(v, w)]
            if fid not in ids:
                ids.append(fid)
        return [self.faces[i] for i in ids]

    @property
    def outer_face(self) -> Face | None:
        return None if self.outer is None else self.faces[self.outer.face]

    def label(self, v: int) -> str:
        return self.labels[v - 1] if self.labels else str(v)

    def vertex_id(self, token: str | int) -> int:
        """Resolve a label or a 1-based id."""
        if isinstance(token, int):
            v = token
        else:
            token = token.strip()
            if self.labels and token in self.labels:
                return self.labels.index(token) + 1
            try:
                v = int(token)
            except ValueError:
                raise PreconditionError(f"unknown vertex {token!r}") from None
        if not 1 <= v <= self.n:
            raise PreconditionError(f"vertex {v} out of range 1..{self.n}")
        return v

    def __repr__(self) -> str:
        outer = "" if self.outer is None else f", outer={list(self.outer.vertices)}"
        return f"PlaneGraph(n={self.n}, m={self.m}, f={len(self.faces)}{outer})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlaneGraph):
            return NotImplemented
        return self._rotation == other._rotation and self.outer == other.outer

    def __hash__(self) -> int:
        return hash(self._rotation)


# ---------------------------------------------------------------------------
# faces and cycles


def trace_faces(g: PlaneGraph) -> list[Face]:
    """Trace every face; each dart lies on exactly one face."""
    if g.m == 0:
        return [Face(0, ())]
    faces: list[Face] = []
    used: set[Dart] = set()
    for u in g.vertices:
        for v in g.neighbors(u):
            if (u, v) in used:
                continue
            walk = []
            dart = (u, v)
            while dart not in used:
                used.add(dart)
                walk.append(dart)
                a, b = dart
                dart = (b, g.next_cw(b, a))
            faces.append(Face(len(faces), tuple(walk)))
    return faces


def canonical_cycle(cycle: Sequence[int]) -> Cycle:
    """Lexicographically least rotation/reflection of a cyclic sequence."""
    c = list(cycle)
    k = len(c)
    i = c.index(min(c))
    fwd = tuple(c[(i + j) % k] for j in range(k))
    bwd = tuple(c[(i - j) % k] for j in range(k))
    return min(fwd, bwd)


def check_cycle(g: PlaneGraph, cycle: Sequence[int], length: int | None = None) -> Cycle:
    cyc = tuple(int(v) for v in cycle)
    k = len(cyc)
    if k < 3 or len(set(cyc)) != k:
        raise NotACycle(f"{list(cyc)} is not a simple cycle")
    for v in cyc:
        if not 1 <= v <= g.n:
            raise NotACycle(f"vertex {v} not in graph")
    for i in range(k):
        if not g.has_edge(cyc[i], cyc[(i + 1) % k]):
            raise NotACycle(f"{cyc[i]}-{cyc[(i + 1) % k]} is not an edge")
    if length is not None and k != length:
        raise NotACycle(f"expected a {length}-cycle, got length {k}")
    return cyc


def enumerate_cycles(g: PlaneGraph, max_len: int) -> list[Cycle]:
    """All simple cycles of length 3..max_len, each once, canonically written.

    Ordered by length, then lexicographically.
    """
    if max_len > MAX_CYCLE_LEN:
        raise LimitError(f"max_len {max_len} exceeds {MAX_CYCLE_LEN}")
    key = ("cycles", max_len)
    if key not in g._memo:
        g._memo[key] = _enumerate_cycles(g, max_len)
    return list(g._memo[key])


def _enumerate_cycles(g: PlaneGraph, max_len: int) -> list[Cycle]:
    found: list[Cycle] = []
    for s in g.vertices:
        # cycles whose least vertex is s; path grows through larger vertices
        path = [s]
        on_path = {s}

        def extend(v: int) -> None:
            for w in g.neighbors(v):
                if w == s and len(path) >= 3 and path[1] < path[-1]:
                    found.append(tuple(path))
                elif w > s and w not in on_path and len(path) < max_len:
                    path.append(w)
                    on_path.add(w)
                    extend(w)
                    path.pop()
                    on_path.discard(w)

        extend(s)
    found.sort(key=lambda c: (len(c), c))
    return found


def cycles_of_length(g: PlaneGraph, k: int) -> list[Cycle]:
    return [c for c in enumerate_cycles(g, max(k, 3)) if len(c) == k]


def components_without(g: PlaneGraph, removed: Iterable[int]) -> list[set[int]]:
    gone = set(removed)
    comps: list[set[int]] = []
    seen = set(gone)
    for v in g.vertices:
        if v in seen:
            continue
        comp = {v}
        seen.add(v)
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for w in g.neighbors(x):
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(comp)
    return comps


def is_separating_cycle(g: PlaneGraph, cycle: Sequence[int]) -> bool:
    """True iff deleting the cycle's vertices disconnects the graph."""
    cyc = check_cycle(g, cycle)
    return len(components_without(g, cyc)) >= 2


@dataclass(frozen=True)
class CycleReport:
    chords: tuple[tuple[int, int], ...]
    common_neighbors: tuple[tuple[int, int, int], ...]

    @property
    def clean(self) -> bool:
        return not self.chords and not self.common_neighbors


def chords_and_common_neighbors(g: PlaneGraph, cycle: Sequence[int]) -> CycleReport:
    """Chords of a cycle, and off-cycle common neighbours of nonadjacent pairs."""
    cyc = check_cycle(g, cycle)
    k = len(cyc)
    on = set(cyc)
    consecutive = {frozenset((cyc[i], cyc[(i + 1) % k])) for i in range(k)}
    chords = []
    triples = []
    for i in range(k):
        for j in range(i + 1, k):
            x, y = sorted((cyc[i], cyc[j]))
            if frozenset((x, y)) in consecutive:
                continue
            if g.has_edge(x, y):
                chords.append((x, y))
                continue
            for v in sorted(g.adjacency(x) & g.adjacency(y)):
                if v not in on:
                    triples.append((x, y, v))
    return CycleReport(tuple(sorted(chords)), tuple(sorted(triples)))


# ---------------------------------------------------------------------------
# .rot text format

_LINE = re.compile(r"^\s*(\d+)\s*:(.*)$")


def parse_rotation_text(text: str) -> PlaneGraph:
    """Parse the ``.rot`` format.

    First significant line is ``n``; then one line ``i: a b c`` per vertex
    giving its clockwise neighbours.  ``#`` starts a comment.  A comment of
    the form ``# labels: name1 name2 ...`` attaches vertex names and
    ``# outer: v1 v2 ...`` (ids or names) designates the outer cycle.
    """
    labels = None
    outer = None
    lines = []
    for raw in text.splitlines():
        body, _, comment = raw.partition("#")
        comment = comment.strip()
        if comment.startswith("labels:"):
            labels = comment[len("labels:"):].split()
        elif comment.startswith("outer:"):
            outer = comment[len("outer:"):].split()
        if body.strip():
            lines.append(body.strip())
    if not lines:
        raise ParseError("empty input")
    try:
        n = int(lines[0])
    except ValueError:
        raise ParseError(f"first line must be the vertex count, got {lines[0]!r}") from None
    if n < 1:
        raise ParseError("vertex count must be positive")
    rotation: list[list[int] | None] = [None] * n
    for line in lines[1:]:
        mo = _LINE.match(line)
        if not mo:
            raise ParseError(f"bad line {line!r}")
        v = int(mo.group(1))
        if not 1 <= v <= n:
            raise ParseError(f"vertex {v} out of range 1..{n}")
        if rotation[v - 1] is not None:
            raise ParseError(f"vertex {v} listed twice")
        try:
            rotation[v - 1] = [int(tok) for tok in mo.group(2).split()]
        except ValueError:
            raise ParseError(f"bad neighbour list in {line!r}") from None
    missing = [i + 1 for i, r in enumerate(rotation) if r is None]
    if missing:
        raise ParseError(f"no rotation line for vertices {missing}")
    g = PlaneGraph(rotation, labels=labels)
    if outer is None:
        return g
    return g.with_outer([g.vertex_id(tok) for tok in outer])


def emit_rotation_text(g: PlaneGraph) -> str:
    out = [str(g.n)]
    if g.labels:
        out.append("# labels: " + " ".join(g.labels))
    if g.outer is not None:
        out.append("# outer: " + " ".join(g.label(v) for v in g.outer.vertices))
    for v in g.vertices:
        out.append(f"{v}: " + " ".join(str(w) for w in g.neighbors(v)))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# planar_code


def iter_planar_code(data: bytes) -> Iterator[PlaneGraph]:
    """Stream graphs out of a planar_code byte string.

    A header may appear at the start and, for concatenated files, at any
    record boundary.
    """
    pos = 0
    size = len(data)
    while pos < size:
        if data.startswith(PLANAR_CODE_HEADER, pos):
            pos += len(PLANAR_CODE_HEADER)
            continue
        n = data[pos]
        pos += 1
        if n == 0:
            raise ParseError(f"zero vertex count at byte {pos - 1}")
        rotation = []
        for v in range(1, n + 1):
            nbrs = []
            while True:
                if pos >= size:
                    raise ParseError(f"truncated record for vertex {v}")
                b = data[pos]
                pos += 1
                if b == 0:
                    break
                if b > n:
                    raise ParseError(f"neighbour {b} out of range for n={n}")
                nbrs.append(b)
            rotation.append(nbrs)
        yield PlaneGraph(rotation)


def parse_planar_code(data: bytes) -> list[PlaneGraph]:
    return list(iter_planar_code(data))


def emit_planar_code(graphs: Iterable[PlaneGraph], header: bool = True) -> bytes:
    out = bytearray(PLANAR_CODE_HEADER if header else b"")
    for g in graphs:
        if g.n > 255:
            raise LimitError("planar_code records hold at most 255 vertices")
        out.append(g.n)
        for v in g.vertices:
            out.extend(g.neighbors(v))
            out.append(0)
    return bytes(out)


# ---------------------------------------------------------------------------
# files

ROT, PLANAR_CODE = "rot", "planar_code"


def sniff_format(data: bytes) -> str:
    """``planar_code`` if the bytes carry the header or are not text, else ``rot``.

    Empty input counts as a planar_code stream with no graphs.
    """
    if not data or data.startswith(PLANAR_CODE_HEADER):
        return PLANAR_CODE
    try:
        data.decode("ascii")
    except UnicodeDecodeError:
        return PLANAR_CODE
    return ROT if all(b >= 9 for b in data) else PLANAR_CODE


def read_graph_bytes(data: bytes, fmt: str | None = None) -> Iterator[PlaneGraph]:
    """Graphs from raw file bytes; gzip is unwrapped transparently."""
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    fmt = fmt or sniff_format(data)
    if fmt == PLANAR_CODE:
        return iter_planar_code(data)
    if fmt == ROT:
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError:
            raise ParseError("a .rot file must be UTF-8 text") from None
        return iter([parse_rotation_text(text)])
    raise ValueError(f"unknown graph format {fmt!r}")


def read_graph_file(path: str | Path, fmt: str | None = None) -> Iterator[PlaneGraph]:
    return read_graph_bytes(Path(path).read_bytes(), fmt)
