"""Exact (c1, ..., ck)-colorings: verification, search, enumeration, superextension.

Colorings are plain ``dict`` objects mapping vertex -> color in ``1..k``.
A coloring is *valid* for caps ``(c1, ..., ck)`` when every vertex of color
``i`` has at most ``c_i`` neighbours of color ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping, Sequence

from workbench.errors import (
    InvalidPrecoloring,
    LimitError,
    PartialColoring,
    PreconditionError,
    TooManyColoredNeighbors,
    Uncolored,
)
from workbench.plane_graph import PlaneGraph, check_cycle

ENUMERATION_LIMIT = 12
SAT, UNSAT = "sat", "unsat"


@dataclass(frozen=True)
class ColorSpec:
    caps: tuple[int, ...]

    def __post_init__(self):
        if not self.caps:
            raise ValueError("at least one color is required")
        if any(c < 0 for c in self.caps):
            raise ValueError("impropriety caps must be nonnegative")

    @classmethod
    def parse(cls, text: str) -> "ColorSpec":
        try:
            return cls(tuple(int(t) for t in text.split(",")))
        except ValueError:
            raise ValueError(f"bad color spec {text!r}; expected e.g. 2,0,0") from None

    @property
    def k(self) -> int:
        return len(self.caps)

    def cap(self, color: int) -> int:
        return self.caps[color - 1]

    def __str__(self) -> str:
        return ",".join(map(str, self.caps))


SPEC_200 = ColorSpec((2, 0, 0))


@dataclass(frozen=True)
class Verdict:
    valid: bool
    violators: tuple[int, ...] = ()


@dataclass
class SolveResult:
    status: str
    coloring: dict[int, int] | None = None
    nodes: int = 0
    exhaustive: bool = False

    @property
    def sat(self) -> bool:
        return self.status == SAT

    def to_dict(self) -> dict:
        if self.sat:
            return {
                "status": SAT,
                "nodes": self.nodes,
                "coloring": [{"vertex": v, "color": c} for v, c in sorted(self.coloring.items())],
            }
        return {"status": UNSAT, "nodes": self.nodes}


# ---------------------------------------------------------------------------
# checks


def _check_colors(spec: ColorSpec, col: Mapping[int, int]) -> None:
    for v, c in col.items():
        if not 1 <= c <= spec.k:
            raise PreconditionError(f"vertex {v} has color {c} outside 1..{spec.k}")


def partial_violations(g: PlaneGraph, spec: ColorSpec, col: Mapping[int, int]) -> list[int]:
    """Colored vertices with more same-colored colored neighbours than allowed."""
    bad = []
    for v, c in sorted(col.items()):
        same = sum(1 for w in g.neighbors(v) if col.get(w) == c)
        if same > spec.cap(c):
            bad.append(v)
    return bad


def verify(g: PlaneGraph, spec: ColorSpec, col: Mapping[int, int]) -> Verdict:
    missing = [v for v in g.vertices if v not in col]
    if missing:
        raise PartialColoring(f"uncolored vertices {missing}")
    _check_colors(spec, col)
    bad = partial_violations(g, spec, col)
    return Verdict(not bad, tuple(bad))


def boundary_violations(g: PlaneGraph, cycle: Sequence[int], col: Mapping[int, int]) -> list[tuple[int, int]]:
    """Edges ``(v, u)``, v on the cycle and u off it, where both share a color."""
    on = set(cycle)
    return [
        (v, u)
        for v in cycle
        for u in g.neighbors(v)
        if u not in on and v in col and col.get(u) == col[v]
    ]


def is_superextension(g: PlaneGraph, cycle: Sequence[int], col: Mapping[int, int], spec: ColorSpec = SPEC_200) -> bool:
    """Total valid coloring whose off-cycle neighbours avoid each cycle vertex's color."""
    return verify(g, spec, col).valid and not boundary_violations(g, cycle, col)


# ---------------------------------------------------------------------------
# exact search


class _Search:
    """Backtracking over vertices in increasing id with cap propagation.

    ``same[v]`` counts the colored neighbours of a colored ``v`` that share its
    color; a neighbour already at its cap forbids that color at ``u``.
    """

    def __init__(self, adj, n: int, spec: ColorSpec, forbidden: Mapping[int, set[int]] | None, symmetry: bool):
        self.adj = adj
        self.n = n
        self.caps = (0,) + spec.caps
        self.k = spec.k
        self.color = [0] * (n + 1)
        self.same = [0] * (n + 1)
        self.forbidden = forbidden or {}
        self.symmetry = symmetry
        self.nodes = 0

    def allowed(self, u: int, c: int) -> bool:
        if c in self.forbidden.get(u, ()):
            return False
        cap = self.caps[c]
        color, same = self.color, self.same
        cnt = 0
        for w in self.adj[u]:
            if color[w] == c:
                if same[w] >= cap:
                    return False
                cnt += 1
        return cnt <= cap

    def assign(self, u: int, c: int) -> None:
        self.color[u] = c
        for w in self.adj[u]:
            if self.color[w] == c:
                self.same[w] += 1
                self.same[u] += 1

    def unassign(self, u: int) -> None:
        c = self.color[u]
        for w in self.adj[u]:
            if self.color[w] == c:
                self.same[w] -= 1
        self.same[u] = 0
        self.color[u] = 0

    def dead_end(self, u: int, c: int) -> bool:
        # uncoloured vertices whose options just shrank
        touched = set()
        for w in self.adj[u]:
            if self.color[w] == 0:
                touched.add(w)
            elif self.color[w] == c:
                touched.update(x for x in self.adj[w] if self.color[x] == 0)
        return any(
            not any(self.allowed(w, d) for d in range(1, self.k + 1)) for w in touched
        )

    def run(self, fixed: Mapping[int, int], order: Sequence[int]) -> bool:
        for v, c in fixed.items():
            if not self.allowed(v, c):
                return False
            self.assign(v, c)
        sym_classes = None
        if self.symmetry and not fixed:
            sym_classes = {c: [d for d in range(1, c) if self.caps[d] == self.caps[c]] for c in range(1, self.k + 1)}
        return self._extend(order, 0, sym_classes, set())

    def _extend(self, order, i, sym, used) -> bool:
        if i == len(order):
            return True
        u = order[i]
        for c in range(1, self.k + 1):
            if sym is not None and any(d not in used for d in sym[c]):
                # an unused interchangeable smaller color would do the same job
                continue
            if not self.allowed(u, c):
                continue
            self.nodes += 1
            self.assign(u, c)
            if not self.dead_end(u, c):
                fresh = c not in used
                used.add(c)
                if self._extend(order, i + 1, sym, used):
                    return True
                if fresh:
                    used.discard(c)
            self.unassign(u)
        return False


def _adjacency(g: PlaneGraph) -> list[tuple[int, ...]]:
    return [()] + [g.neighbors(v) for v in g.vertices]


def _solve(g, spec, fixed, forbidden=None, symmetry=False) -> SolveResult:
    _check_colors(spec, fixed)
    search = _Search(_adjacency(g), g.n, spec, forbidden, symmetry)
    order = [v for v in g.vertices if v not in fixed]
    if search.run(fixed, order):
        col = {v: search.color[v] for v in g.vertices}
        return SolveResult(SAT, col, search.nodes)
    return SolveResult(UNSAT, None, search.nodes, exhaustive=True)


def solve(
    g: PlaneGraph,
    spec: ColorSpec,
    partial: Mapping[int, int] | None = None,
    symmetry: bool = False,
) -> SolveResult:
    """Extend ``partial`` to a total valid coloring, or prove none exists.

    Vertices are branched in increasing id, colors in increasing index.
    ``symmetry`` prunes permutations of equal-cap colors (only without a
    partial coloring).
    """
    return _solve(g, spec, dict(partial or {}), symmetry=symmetry)


# ---------------------------------------------------------------------------
# brute-force enumeration (independent of the search above)


def iter_colorings(g: PlaneGraph, spec: ColorSpec) -> Iterator[dict[int, int]]:
    """All total valid colorings in lexicographic order of (c(1), ..., c(n))."""
    n = g.n
    col: dict[int, int] = {}

    def ok(v: int) -> bool:
        # v and its already coloured neighbours stay within caps
        c = col[v]
        if sum(1 for w in g.neighbors(v) if col.get(w) == c) > spec.cap(c):
            return False
        for w in g.neighbors(v):
            if col.get(w) == c and sum(1 for x in g.neighbors(w) if col.get(x) == c) > spec.cap(c):
                return False
        return True

    def rec(v: int) -> Iterator[dict[int, int]]:
        if v > n:
            yield dict(col)
            return
        for c in range(1, spec.k + 1):
            col[v] = c
            if ok(v):
                yield from rec(v + 1)
            del col[v]

    yield from rec(1)


def enumerate_all(g: PlaneGraph, spec: ColorSpec) -> list[dict[int, int]]:
    if g.n > ENUMERATION_LIMIT:
        raise LimitError(f"enumeration is limited to n <= {ENUMERATION_LIMIT}")
    return list(iter_colorings(g, spec))


# ---------------------------------------------------------------------------
# superextension


def _validate_precoloring(g: PlaneGraph, cyc, precol: Mapping[int, int], spec: ColorSpec) -> dict[int, int]:
    pre = {int(v): int(c) for v, c in precol.items()}
    if set(pre) != set(cyc):
        raise InvalidPrecoloring(f"precoloring must cover exactly the cycle {list(cyc)}")
    for v, c in pre.items():
        if not 1 <= c <= spec.k:
            raise InvalidPrecoloring(f"vertex {v} has color {c} outside 1..{spec.k}")
    for v in cyc:
        same = sum(1 for w in g.neighbors(v) if pre.get(w) == pre[v])
        if same > spec.cap(pre[v]):
            raise InvalidPrecoloring(f"precoloring violates the caps at vertex {v}")
    return pre


def _boundary_forbidden(g: PlaneGraph, cyc, pre: Mapping[int, int]) -> dict[int, set[int]]:
    on = set(cyc)
    forbidden: dict[int, set[int]] = {}
    for v in cyc:
        for u in g.neighbors(v):
            if u not in on:
                forbidden.setdefault(u, set()).add(pre[v])
    return forbidden


def peel_order(g: PlaneGraph, keep: set[int]) -> list[int]:
    """Vertices outside ``keep`` removable one at a time while of degree <= 2.

    Any coloring of what remains extends over them in reverse order with a
    proper color, so deleting them never changes extendability.
    """
    deg = {v: g.degree(v) for v in g.vertices}
    gone: set[int] = set()
    order = []
    stack = [v for v in g.vertices if v not in keep and deg[v] <= 2]
    while stack:
        v = stack.pop()
        if v in gone:
            continue
        gone.add(v)
        order.append(v)
        for w in g.neighbors(v):
            if w not in gone:
                deg[w] -= 1
                if w not in keep and deg[w] <= 2:
                    stack.append(w)
    return order


def _solve_reduced(g, spec, fixed, forbidden, keep) -> SolveResult:
    peeled = peel_order(g, keep)
    gone = set(peeled)
    adj = [()] + [tuple(w for w in g.neighbors(v) if w not in gone) if v not in gone else () for v in g.vertices]
    search = _Search(adj, g.n, spec, forbidden, False)
    order = [v for v in g.vertices if v not in fixed and v not in gone]
    if not search.run(fixed, order):
        return SolveResult(UNSAT, None, search.nodes, exhaustive=True)
    col = {v: search.color[v] for v in g.vertices if v not in gone}
    for v in reversed(peeled):
        taken = {col[w] for w in g.neighbors(v) if w in col} | forbidden.get(v, set())
        col[v] = next(c for c in range(1, spec.k + 1) if c not in taken)
    return SolveResult(SAT, dict(sorted(col.items())), search.nodes)


def superextend(
    g: PlaneGraph,
    cycle: Sequence[int],
    precol: Mapping[int, int],
    spec: ColorSpec = SPEC_200,
    reduce: bool = True,
) -> SolveResult:
    """Extend a precoloring of a cycle so no off-cycle neighbour repeats its color.

    With ``reduce`` the search runs on the graph left after peeling
    off-cycle vertices of degree at most two; the peeled vertices are then
    colored properly, which is always possible.
    """
    cyc = check_cycle(g, cycle)
    pre = _validate_precoloring(g, cyc, precol, spec)
    forbidden = _boundary_forbidden(g, cyc, pre)
    if reduce:
        return _solve_reduced(g, spec, pre, forbidden, set(cyc))
    return _solve(g, spec, pre, forbidden)


def cycle_precolorings(g: PlaneGraph, cycle: Sequence[int], spec: ColorSpec = SPEC_200) -> Iterator[dict[int, int]]:
    """Valid colorings of G[C] in lexicographic order along the cycle."""
    cyc = check_cycle(g, cycle)
    for colors in product(range(1, spec.k + 1), repeat=len(cyc)):
        pre = dict(zip(cyc, colors))
        if all(
            sum(1 for w in g.neighbors(v) if pre.get(w) == pre[v]) <= spec.cap(pre[v])
            for v in cyc
        ):
            yield pre


@dataclass
class SuperextVerdict:
    superextendable: bool
    witness: dict[int, int] | None = None
    checked: int = 0
    failures: list[dict[int, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "superextendable": self.superextendable,
            "precolorings_checked": self.checked,
            "witness": None if self.witness is None else [
                {"vertex": v, "color": c} for v, c in self.witness.items()
            ],
        }


def is_superextendable(
    g: PlaneGraph,
    cycle: Sequence[int],
    spec: ColorSpec = SPEC_200,
    all_failures: bool = False,
    reduce: bool = True,
) -> SuperextVerdict:
    """Whether every valid coloring of G[C] superextends; first failure is the witness."""
    cyc = check_cycle(g, cycle)
    verdict = SuperextVerdict(True)
    for pre in cycle_precolorings(g, cyc, spec):
        verdict.checked += 1
        if not superextend(g, cyc, pre, spec, reduce=reduce).sat:
            if verdict.witness is None:
                verdict.superextendable = False
                verdict.witness = pre
            if not all_failures:
                break
            verdict.failures.append(pre)
    return verdict


# ---------------------------------------------------------------------------
# local recoloring moves


ONE_SATURATED, NICELY_COLORED = "one_saturated", "nicely_colored"


def saturation_status(g: PlaneGraph, col: Mapping[int, int], v: int) -> str:
    if v not in col:
        raise Uncolored(f"vertex {v} is not colored")
    if col[v] == 1 and sum(1 for w in g.neighbors(v) if col.get(w) == 1) >= 2:
        return ONE_SATURATED
    return NICELY_COLORED


def nicely_recolor(g: PlaneGraph, col: Mapping[int, int], v: int) -> dict[int, int] | None:
    """Recolor ``v`` with 2 or 3 if free, else leave it at 1 with at most one 1-neighbour.

    Returns the new coloring, or ``None`` when neither move applies.
    """
    seen = [col[w] for w in g.neighbors(v) if w in col]
    if len(seen) > 3:
        raise TooManyColoredNeighbors(f"vertex {v} has {len(seen)} colored neighbours")
    out = dict(col)
    for c in (2, 3):
        if c not in seen:
            out[v] = c
            return out
    if seen.count(1) <= 1:
        out[v] = 1
        return out
    return None


def _proper_at(g: PlaneGraph, col: Mapping[int, int], v: int) -> bool:
    return all(col.get(w) != col[v] for w in g.neighbors(v))


def recolor_with_one(g: PlaneGraph, col: Mapping[int, int], v: int) -> dict[int, int] | None:
    """Give ``v`` color 1, properly recoloring its two colored neighbours if needed.

    ``v`` must have exactly two colored neighbours, both off the outer cycle.
    Only those two neighbours may change, and a changed neighbour must be
    properly colored before ``v`` takes color 1.  Returns the resulting
    coloring or ``None``.
    """
    if g.outer is None:
        raise PreconditionError("needs a designated outer cycle")
    on_c = set(g.outer.vertices)
    if v in on_c:
        raise PreconditionError(f"vertex {v} lies on the outer cycle")
    colored = [w for w in g.neighbors(v) if w in col]
    if len(colored) != 2 or any(w in on_c for w in colored):
        raise PreconditionError(f"vertex {v} needs exactly two colored neighbours inside C")
    base = {u: c for u, c in col.items() if u != v}
    if partial_violations(g, SPEC_200, base) or boundary_violations(g, g.outer.vertices, base):
        raise PreconditionError("the given partial coloring is not a valid superextension")
    v1, v2 = colored
    for c1 in [base[v1]] + [c for c in (1, 2, 3) if c != base[v1]]:
        for c2 in [base[v2]] + [c for c in (1, 2, 3) if c != base[v2]]:
            trial = dict(base)
            trial[v1], trial[v2] = c1, c2
            if c1 != base[v1] and not _proper_at(g, trial, v1):
                continue
            if c2 != base[v2] and not _proper_at(g, trial, v2):
                continue
            trial[v] = 1
            if not partial_violations(g, SPEC_200, trial) and not boundary_violations(g, g.outer.vertices, trial):
                return trial
    return None


def recolor_with_one_feasible(g: PlaneGraph, col: Mapping[int, int], v: int) -> bool:
    return recolor_with_one(g, col, v) is not None
