"""Exact discharging: initial charges, rules R1-R3, the outer-cycle audit,
reducible-configuration detectors and brute-force lemma oracles.

Elements are named ``"v<id>"`` for vertices, ``"f<id>"`` for faces other
than the outer face, and ``"C"`` for the outer cycle (which doubles as the
outer face).  All charges are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from workbench.coloring import SPEC_200
from workbench.errors import (
    AuditMismatch,
    BadOuterLength,
    IndexMismatch,
    LimitError,
    NoOuterCycle,
    PreconditionError,
)
from workbench.plane_graph import PlaneGraph, chords_and_common_neighbors, enumerate_cycles, is_separating_cycle
from workbench.structure import (
    F3_MANY,
    F3_ONE,
    F5_MANY,
    F5_ONE,
    LIGHT_PENDANT,
    StructureIndex,
    classify_6cycle,
    is_interior_triangle_of_bad_6cycle,
    matches,
)

OUTER_LENGTHS = (3, 5, 6)
OUTER = "C"

R1A, R1B = "R1a", "R1b"
R2A_INCIDENT, R2A_PENDANT, R2B, R2C, R2D = "R2a-incident", "R2a-pendant", "R2b", "R2c", "R2d"
R3A_VERTEX, R3A_FACE = "R3a-vertex", "R3a-face"
R3B_3FACE, R3B_5FACE, R3B_PENDANT, R3B_SPECIAL = "R3b-3face", "R3b-5face", "R3b-pendant", "R3b-special"
RULES = (
    R1A, R1B, R2A_INCIDENT, R2A_PENDANT, R2B, R2C, R2D,
    R3A_VERTEX, R3A_FACE, R3B_3FACE, R3B_5FACE, R3B_PENDANT, R3B_SPECIAL,
)

F = Fraction
UNIT = 24  # every rule constant is a multiple of 1/24


def units(num: int, den: int = 1) -> int:
    q, rem = divmod(num * UNIT, den)
    if rem:
        raise ValueError(f"{num}/{den} is not a multiple of 1/{UNIT}")
    return q


def vname(v: int) -> str:
    return f"v{v}"


def fname(g: PlaneGraph, fid: int) -> str:
    return OUTER if g.outer is not None and fid == g.outer.face else f"f{fid}"


def fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def is_light_pendant(signature: Sequence[int]) -> bool:
    return any(matches(signature, p) for p in LIGHT_PENDANT)


@dataclass(frozen=True)
class Transfer:
    source: str
    target: str
    units: int
    rule: str

    @property
    def amount(self) -> Fraction:
        return F(self.units, UNIT)

    def to_dict(self) -> dict:
        return {"from": self.source, "to": self.target, "amount": fmt(self.amount), "rule": self.rule}


@dataclass
class ChargeLedger:
    """Initial charges and rule-tagged transfers, kept in integer 1/24 units."""

    initial_units: dict[str, int]
    transfers: list[Transfer] = field(default_factory=list)

    def give(self, source: str, target: str, amount: Fraction | int, rule: str) -> None:
        q = F(amount) * UNIT
        if q.denominator != 1:
            raise ValueError(f"{amount} is not a multiple of 1/{UNIT}")
        self.transfers.append(Transfer(source, target, int(q), rule))

    def give_units(self, source: str, target: str, amount: int, rule: str) -> None:
        self.transfers.append(Transfer(source, target, amount, rule))

    def final_units(self) -> dict[str, int]:
        out = dict(self.initial_units)
        for t in self.transfers:
            out[t.source] -= t.units
            out[t.target] += t.units
        return out

    @property
    def initial(self) -> dict[str, Fraction]:
        return {k: F(v, UNIT) for k, v in self.initial_units.items()}

    @property
    def final(self) -> dict[str, Fraction]:
        return {k: F(v, UNIT) for k, v in self.final_units().items()}

    def total(self, which: str = "final") -> Fraction:
        src = self.final_units() if which == "final" else self.initial_units
        return F(sum(src.values()), UNIT)

    def by_rule(self, rule: str) -> list[Transfer]:
        return [t for t in self.transfers if t.rule == rule]

    def to_dict(self) -> dict:
        final = self.final
        return {
            "initial": [{"element": k, "charge": fmt(v)} for k, v in self.initial.items()],
            "transfers": [t.to_dict() for t in self.transfers],
            "final": [{"element": k, "charge": fmt(v)} for k, v in final.items()],
            "sum": fmt(sum(final.values(), 0)),
        }


def _require_outer(g: PlaneGraph) -> None:
    if g.outer is None:
        raise NoOuterCycle("discharging needs a designated outer cycle")
    if g.outer.r not in OUTER_LENGTHS:
        raise BadOuterLength(f"outer cycle has length {g.outer.r}; expected one of {OUTER_LENGTHS}")


def initial_charges(g: PlaneGraph) -> ChargeLedger:
    _require_outer(g)
    init: dict[str, int] = {}
    for v in g.vertices:
        init[vname(v)] = units(2 * g.degree(v) - 6)
    for f in g.faces:
        if f.id != g.outer.face:
            init[fname(g, f.id)] = units(f.degree - 6)
    init[OUTER] = units(g.outer.r + 6)
    return ChargeLedger(init)


def _r2a_amount(index: StructureIndex, v: int, fid: int, literal_five: bool) -> int:
    g = index.graph
    vs = g.faces[fid].vertices
    big = [i for i, w in enumerate(vs) if g.degree(w) >= 5]
    if len(big) == 2 and (big[1] - big[0]) % 5 in (1, 4):
        return units(3, 8)
    many = sum(1 for w in vs if (g.degree(w) == 5 if literal_five else g.degree(w) >= 5))
    rich = index.faces[fid].rich
    if not rich and many >= 3:
        return units(1, 3)
    info = index.vertices[v]
    if rich and info.degree == 5 and not info.good_5:
        return units(1, 4)
    return units(1, 2)


def _r2d_amount(others: Sequence[int]) -> int:
    a, b = sorted(others)
    if a == 3 and b == 3:
        return units(3)
    if a == 3:
        return units(2)
    if a >= 4:
        return units(1)
    return 0


def apply_rules(g: PlaneGraph, index: StructureIndex, literal_five: bool = False) -> ChargeLedger:
    """Run R1-R3 once over the whole graph.

    ``literal_five`` reads the 1/3 clause of R2a as "at least three
    5-vertices" instead of 5+-vertices.
    """
    if index.graph is not g and index.graph != g or index.outer != g.outer:
        raise IndexMismatch("structure index was built for a different graph")
    ledger = initial_charges(g)
    on_c = set(g.outer.vertices)
    finfo = index.faces
    deg = g.degree

    def internal_faces(v: int, size: int) -> list[int]:
        seen: list[int] = []
        for fid in index.vertices[v].faces:
            if finfo[fid].internal and finfo[fid].degree == size and fid not in seen:
                seen.append(fid)
        return seen

    for v in g.vertices:
        d = deg(v)
        if v in on_c:
            continue
        src = vname(v)
        if d == 4:
            tri = internal_faces(v, 3)
            has_334 = any(finfo[fid].signature == (3, 3, 4) for fid in tri)
            for fid in tri:
                amt = units(2) if finfo[fid].signature == (3, 3, 4) else units(5, 4)
                ledger.give_units(src, fname(g, fid), amt, R1A)
            for fid in internal_faces(v, 5):
                if not index.vertices[v].triangular:
                    ledger.give_units(src, fname(g, fid), units(1, 2), R1B)
                elif not has_334:
                    ledger.give_units(src, fname(g, fid), units(1, 4), R1B)
        elif d >= 5:
            for fid in internal_faces(v, 5):
                ledger.give_units(src, fname(g, fid), _r2a_amount(index, v, fid, literal_five), R2A_INCIDENT)
            for donor, _special, fid in index.pendant_special:
                if donor == v:
                    ledger.give_units(src, fname(g, fid), units(1, 4), R2A_PENDANT)
            for donor, _x, fid in index.pendant:
                if donor != v:
                    continue
                sig = finfo[fid].signature
                if sig == (3, 3, 3):
                    amt = units(1)
                elif sig == (3, 3, 5):
                    amt = units(5, 8)
                elif matches(sig, "3,4-,4"):
                    amt = units(1, 2)
                else:
                    continue
                ledger.give_units(src, fname(g, fid), amt, R2B)
            for fid in internal_faces(v, 3):
                sig = finfo[fid].signature
                if d == 5:
                    if matches(sig, "3,4-,5"):
                        amt = units(7, 4)
                    elif sig == (3, 5, 5):
                        amt = units(3, 2)
                    else:
                        amt = units(1)
                    ledger.give_units(src, fname(g, fid), amt, R2C)
                else:
                    others = list(sig)
                    others.remove(d)
                    amt = _r2d_amount(others)
                    if amt:
                        ledger.give_units(src, fname(g, fid), amt, R2D)

    for v in g.outer.vertices:
        ledger.give_units(vname(v), OUTER, units(2 * deg(v) - 6), R3A_VERTEX)
    for fi in finfo:
        if fi.id != g.outer.face and fi.degree >= 7:
            ledger.give_units(fname(g, fi.id), OUTER, units(1), R3A_FACE)
    for fi in finfo:
        if fi.f_class in (F3_ONE, F3_MANY):
            ledger.give_units(OUTER, fname(g, fi.id), units(3), R3B_3FACE)
        elif fi.f_class in (F5_ONE, F5_MANY):
            ledger.give_units(OUTER, fname(g, fi.id), units(1), R3B_5FACE)
    for donor, _x, fid in index.pendant:
        if donor in on_c and is_light_pendant(finfo[fid].signature):
            ledger.give_units(OUTER, fname(g, fid), units(1), R3B_PENDANT)
    for donor, _special, fid in index.pendant_special:
        if donor in on_c:
            ledger.give_units(OUTER, fname(g, fid), units(1, 4), R3B_SPECIAL)
    return ledger


# ---------------------------------------------------------------------------
# audits


@dataclass(frozen=True)
class OuterAudit:
    r: int
    e_cut: int
    chords: int
    f3_count: int
    f5_count: int
    t3: int
    t5: int
    a: int
    mu_star_C: Fraction

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in ("r", "e_cut", "chords", "f3_count", "f5_count", "t3", "t5", "a")}
        out["mu_star_C"] = fmt(self.mu_star_C)
        return out


def outer_audit(ledger: ChargeLedger, index: StructureIndex) -> OuterAudit:
    """Recount the outer-cycle balance from the index and compare with the ledger.

    Chords of C each add 4: both endpoints gain a degree that R3a turns into
    charge for C.  The term vanishes on chordless outer cycles.
    """
    g = index.graph
    cyc = g.outer.vertices
    on_c = set(cyc)
    r = len(cyc)
    cycle_edges = {frozenset((cyc[i], cyc[(i + 1) % r])) for i in range(r)}
    e_cut = chords = 0
    for u, v in g.edges():
        if (u in on_c) != (v in on_c):
            e_cut += 1
        elif u in on_c and frozenset((u, v)) not in cycle_edges:
            chords += 1
    f3 = sum(1 for fi in index.faces if fi.f_class in (F3_ONE, F3_MANY))
    f5 = sum(1 for fi in index.faces if fi.f_class in (F5_ONE, F5_MANY))
    t3 = sum(1 for d, _x, fid in index.pendant if d in on_c and is_light_pendant(index.faces[fid].signature))
    t5 = sum(1 for d, _s, _fid in index.pendant_special if d in on_c)
    a = sum(1 for fi in index.faces if fi.id != g.outer.face and fi.degree >= 7)
    mu = F(6 - r + 2 * e_cut + 4 * chords - 3 * f3 - f5 - t3 + a) - F(t5, 4)
    got = F(ledger.final_units()[OUTER], UNIT)
    if got != mu:
        raise AuditMismatch(f"ledger gives C final charge {fmt(got)}, the balance formula gives {fmt(mu)}")
    return OuterAudit(r, e_cut, chords, f3, f5, t3, t5, a, mu)


@dataclass
class ChargeReport:
    final: dict[str, Fraction]
    negative: list[str]
    total: Fraction

    def to_dict(self) -> dict:
        return {
            "final": [{"element": k, "charge": fmt(v)} for k, v in self.final.items()],
            "negative": self.negative,
            "sum": fmt(self.total),
        }


def final_charge_report(ledger: ChargeLedger) -> ChargeReport:
    final = ledger.final
    return ChargeReport(final, [k for k, v in final.items() if v < 0], sum(final.values(), 0))


# ---------------------------------------------------------------------------
# reducible configurations


@dataclass(frozen=True)
class Finding:
    lemma: str
    vertices: tuple[int, ...] = ()
    faces: tuple[int, ...] = ()
    note: str = ""

    def to_dict(self) -> dict:
        return {"lemma": self.lemma, "vertices": list(self.vertices), "faces": list(self.faces), "note": self.note}


def _light_pendant_count(index: StructureIndex, v: int) -> int:
    return sum(
        1 for d, _x, fid in index.pendant if d == v and is_light_pendant(index.faces[fid].signature)
    )


def _special_neighbours(index: StructureIndex, v: int) -> int:
    return sum(1 for w in index.graph.neighbors(v) if index.vertices[w].special)


def _l0(g: PlaneGraph) -> Iterable[Finding]:
    own = tuple(sorted(g.outer.vertices))
    for c in enumerate_cycles(g, 6):
        if len(c) == 4 or tuple(sorted(c)) == own:
            continue
        if not is_separating_cycle(g, c):
            continue
        if len(c) == 6 and classify_6cycle(g, c) == "bad":
            continue
        yield Finding("L0", c, note=f"separating {len(c)}-cycle")


def _lchord(g: PlaneGraph) -> Iterable[Finding]:
    rep = chords_and_common_neighbors(g, g.outer.vertices)
    for u, v in rep.chords:
        yield Finding("L-chord", (u, v), note="chord of C")
    for x, y, w in rep.common_neighbors:
        yield Finding("L-chord", (x, y, w), note="common neighbour of nonadjacent C-vertices")


def _l5(g: PlaneGraph, index: StructureIndex, on_c: set[int]) -> Iterable[Finding]:
    seen = set()
    for c in enumerate_cycles(g, 6):
        if len(c) != 6 or any(v in on_c for v in c):
            continue
        for s in range(6):
            for step in (1, -1):
                v1, v2, v3, v4, v5, v6 = (c[(s + step * i) % 6] for i in range(6))
                if not g.has_edge(v1, v3) or g.degree(v1) != 3 or g.degree(v3) != 3 or g.degree(v2) > 5:
                    continue
                if is_interior_triangle_of_bad_6cycle(g, (v1, v2, v3)):
                    continue
                k = _light_pendant_count(index, v4) + _special_neighbours(index, v4)
                if g.degree(v5) >= 5 and k <= g.degree(v4) - 3:
                    continue
                key = (v1, v2, v3, v4, v5, v6)
                if key not in seen:
                    seen.add(key)
                    yield Finding("L5", key, note=f"d(v5)={g.degree(v5)}, k={k}, d(v4)={g.degree(v4)}")


def scan_reducible_configurations(g: PlaneGraph, index: StructureIndex) -> list[Finding]:
    """Every occurrence of a configuration a minimal counterexample cannot contain."""
    if g.outer is None:
        raise NoOuterCycle("configuration scan needs a designated outer cycle")
    if index.graph is not g and index.graph != g:
        raise IndexMismatch("structure index was built for a different graph")
    on_c = set(g.outer.vertices)
    deg = g.degree
    vinfo, finfo = index.vertices, index.faces
    inner = [v for v in g.vertices if v not in on_c]
    out: list[Finding] = []

    out.extend(_l0(g))
    out.extend(_lchord(g))

    for v in inner:
        if deg(v) <= 2:
            out.append(Finding("L1", (v,), note=f"degree {deg(v)}"))

    for v in inner:
        if deg(v) == 3 and not any(deg(w) >= 5 or w in on_c for w in g.neighbors(v)):
            out.append(Finding("L2", (v,)))

    for v in inner:
        if deg(v) < 3:
            continue  # already an L1 finding
        m, t = _special_neighbours(index, v), _light_pendant_count(index, v)
        if m + t > deg(v) - 2:
            out.append(Finding("L4", (v,), note=f"m={m}, t={t}, d={deg(v)}"))

    out.extend(_l5(g, index, on_c))

    for v in inner:
        rot = g.neighbors(v)
        if deg(v) != 5 or any(w in on_c for w in rot):
            continue
        for i in range(5):
            v1, v2, v3 = rot[i], rot[(i + 1) % 5], rot[(i + 2) % 5]
            f1, f2 = g.face_of_dart(v1, v).id, g.face_of_dart(v2, v).id
            if not all(finfo[f].internal and finfo[f].degree == 5 for f in (f1, f2)):
                continue
            if all(deg(x) == 3 and _on_light_internal_triangle(index, x) for x in (v1, v3)) and deg(v2) < 4:
                out.append(Finding("L6", (v, v1, v2, v3), (f1, f2)))

    for fi in finfo:
        if fi.degree != 3 or not fi.internal or not matches(fi.signature, "3,3,5-"):
            continue
        fv = g.faces[fi.id].vertex_set
        for x in sorted(fv):
            if deg(x) != 3:
                continue
            for y in g.neighbors(x):
                if y not in fv and y not in on_c and deg(y) < 5:
                    out.append(Finding("L7", (x, y), (fi.id,), note="light pendant neighbour"))

    for v in inner:
        if deg(v) != 4:
            continue
        rot = g.neighbors(v)
        for i in range(4):
            a, b = rot[i], rot[(i + 1) % 4]
            fid = g.face_of_dart(a, v).id
            if not (finfo[fid].internal and finfo[fid].degree == 3 and finfo[fid].signature == (3, 3, 4)):
                continue
            for w in (rot[(i + 2) % 4], rot[(i + 3) % 4]):
                if deg(w) == 3 and w not in on_c:
                    out.append(Finding("L8", (v, a, b, w), (fid,)))

    out.extend(_l9(g, index, on_c))

    for fi in finfo:
        if not (fi.internal and fi.degree == 3 and fi.signature == (3, 3, 6)):
            continue
        z = next(w for w in g.faces[fi.id].vertices if deg(w) == 6)
        if any(w in on_c for w in g.neighbors(z)):
            continue
        ps = [w for w in g.neighbors(z) if vinfo[w].potentially_special]
        if len(ps) > 2:
            out.append(Finding("L10", (z, *ps), (fi.id,)))
    return out


def _on_light_internal_triangle(index: StructureIndex, x: int) -> bool:
    return any(
        index.faces[fid].internal and index.faces[fid].degree == 3 and is_light_pendant(index.faces[fid].signature)
        for fid in index.vertices[x].faces
    )


def _l9(g: PlaneGraph, index: StructureIndex, on_c: set[int]) -> Iterable[Finding]:
    deg = g.degree
    ps = {v: index.vertices[v].potentially_special for v in g.vertices}
    for fi in index.faces:
        if not (fi.internal and fi.degree == 3 and matches(fi.signature, "3,5-,5")):
            continue
        tri = g.faces[fi.id].vertices
        for z in tri:
            for y in tri:
                if z == y or deg(z) != 5 or deg(y) != 3:
                    continue
                x = next(w for w in tri if w not in (y, z))
                if deg(x) > 5:
                    continue
                rot = g.neighbors(z)
                i = rot.index(x)
                step = 1 if rot[(i - 1) % 5] == y else -1
                z1, z2, z3 = (rot[(i + step * j) % 5] for j in (1, 2, 3))
                y_out = next(w for w in g.neighbors(y) if w not in (x, z))
                for trio in ((z1, z2, y), (z1, z3, y)):
                    if sum(ps[w] for w in trio) > 1:
                        yield Finding("L9", (x, y, z, *trio), (fi.id,), note="two potentially special in a trio")
                if ps[z2] and ps[z3] and y_out not in on_c and deg(z1) < 5:
                    yield Finding("L9", (x, y, z, z1, z2, z3, y_out), (fi.id,), note="second clause")


# ---------------------------------------------------------------------------
# brute-force colorability of lemma reductions

ORACLE_LIMIT = 12


@dataclass(frozen=True)
class OracleVerdict:
    lemma: str
    holds: bool
    deleted: tuple[int, ...]
    recolorable: tuple[int, ...]
    base_colorings: int
    counterexample: dict[int, int] | None = None


def _locate(lemma: str, g: PlaneGraph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    on_c = set(g.outer.vertices)
    deg = g.degree
    inner = [v for v in g.vertices if v not in on_c]
    if lemma == "L1":
        for v in inner:
            if deg(v) <= 2:
                return (v,), ()
    elif lemma == "L2":
        for v in inner:
            nb = g.neighbors(v)
            if deg(v) == 3 and all(w not in on_c and deg(w) <= 4 for w in nb):
                return (v,), nb
    elif lemma == "L7":
        for f in g.faces:
            if f.degree != 3 or f.vertex_set & on_c or not matches(tuple(sorted(deg(w) for w in f.vertices)), "3,3,5-"):
                continue
            threes = [w for w in f.vertices if deg(w) == 3]
            for y in threes:
                x = next(w for w in threes if w != y)
                z = next(w for w in f.vertices if w not in (x, y))
                y_out = next(w for w in g.neighbors(y) if w not in f.vertex_set)
                if y_out not in on_c and deg(y_out) <= 4:
                    return (x, y), (z, y_out)
    else:
        raise PreconditionError(f"no colorability oracle for lemma {lemma!r}")
    raise PreconditionError(f"gadget does not contain the configuration of {lemma}")


def _superextensions(g: PlaneGraph, verts: Sequence[int], on_c: set[int]) -> Iterable[dict[int, int]]:
    """Valid (2,0,0)-colorings of G[verts] where C-vertices differ from off-C neighbours."""
    vs = list(verts)
    inside = set(vs)
    col: dict[int, int] = {}

    def ok(v: int) -> bool:
        c = col[v]
        for w in g.neighbors(v):
            if w not in col:
                continue
            if col[w] == c and ((v in on_c) != (w in on_c)):
                return False
        for u in [v, *(w for w in g.neighbors(v) if col.get(w) == c)]:
            if sum(1 for w in g.neighbors(u) if w in inside and col.get(w) == c) > SPEC_200.cap(c):
                return False
        return True

    def rec(i: int):
        if i == len(vs):
            yield dict(col)
            return
        v = vs[i]
        for c in (1, 2, 3):
            col[v] = c
            if ok(v):
                yield from rec(i + 1)
            del col[v]

    yield from rec(0)


def _completes(g: PlaneGraph, base: dict[int, int], free: Sequence[int], on_c: set[int]) -> bool:
    for colors in product((1, 2, 3), repeat=len(free)):
        col = dict(base)
        col.update(zip(free, colors))
        if _is_superext(g, col, on_c):
            return True
    return False


def _is_superext(g: PlaneGraph, col: dict[int, int], on_c: set[int]) -> bool:
    for v in g.vertices:
        c = col[v]
        same = 0
        for w in g.neighbors(v):
            if col[w] == c:
                if (v in on_c) != (w in on_c):
                    return False
                same += 1
        if same > SPEC_200.cap(c):
            return False
    return True


def lemma_colorability_oracle(lemma: str, gadget: PlaneGraph) -> OracleVerdict:
    """Check a lemma's extension claim on a gadget by brute force.

    The reduction deletes a set D, and the proof may recolor a set R of
    vertices off C.  The claim holds when every superextension of the
    precoloring to G - D agrees, outside D and R, with some superextension
    to G.
    """
    if gadget.n > ORACLE_LIMIT:
        raise LimitError(f"lemma oracle is limited to n <= {ORACLE_LIMIT}")
    if gadget.outer is None:
        raise NoOuterCycle("gadget needs a designated outer cycle")
    deleted, recolor = _locate(lemma, gadget)
    on_c = set(gadget.outer.vertices)
    rest = [v for v in gadget.vertices if v not in deleted]
    free = list(deleted) + [v for v in recolor if v not in on_c]
    count = 0
    for base in _superextensions(gadget, rest, on_c):
        count += 1
        kept = {v: c for v, c in base.items() if v not in free}
        if not _completes(gadget, kept, free, on_c):
            return OracleVerdict(lemma, False, deleted, tuple(recolor), count, base)
    return OracleVerdict(lemma, True, deleted, tuple(recolor), count)
