"""Command-line driver: ``workbench <command> FILE... [options]``.

Exit codes: 0 success / property holds, 1 UNSAT or violation, 2 parse
error, 3 precondition error.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from workbench.coloring import (
    SPEC_200,
    ColorSpec,
    is_superextendable,
    partial_violations,
    solve,
    superextend,
    verify,
)
from workbench.discharging import (
    apply_rules,
    final_charge_report,
    outer_audit,
    scan_reducible_configurations,
)
from workbench.errors import (
    AuditMismatch,
    InvariantError,
    ParseError,
    WorkbenchError,
)
from workbench.plane_graph import (
    PLANAR_CODE,
    ROT,
    PlaneGraph,
    check_cycle,
    enumerate_cycles,
    read_graph_bytes,
)
from workbench.structure import build_structure_index, classify_6cycle, is_class_member

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3
SPEC_222 = ColorSpec((2, 2, 2))


@dataclass
class RunConfig:
    command: str
    inputs: list[str]
    input_format: str | None = None
    output_format: str = "json"
    spec: ColorSpec = SPEC_200
    outer: list[str] | None = None
    precolor: dict[str, int] | None = None
    partial: dict[str, int] | None = None
    all_precolorings: bool = False
    limit_n: int = 11
    jobs: int = 1
    timeout: float | None = None
    symmetry: bool = False
    literal_five: bool = False
    checks: tuple[str, ...] = ("class", "color", "superextend", "discharge")
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# serialization helpers


def coloring_json(g: PlaneGraph, col: dict[int, int]) -> list[dict]:
    out = []
    for v, c in sorted(col.items()):
        rec = {"vertex": v, "color": c}
        if g.labels:
            rec["label"] = g.label(v)
        out.append(rec)
    return out


def parse_assignment(text: str) -> dict[str, int]:
    """``"t1=1,t2=2"`` -> ``{"t1": 1, "t2": 2}``."""
    out: dict[str, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, val = part.partition("=")
        if not sep:
            raise ValueError(f"bad assignment {part!r}; expected vertex=color")
        out[key.strip()] = int(val)
    return out


def _resolve(g: PlaneGraph, assignment: dict[str, int] | None) -> dict[int, int]:
    return {g.vertex_id(k): c for k, c in (assignment or {}).items()}


def _outer_ids(g: PlaneGraph, cfg: RunConfig) -> list[int]:
    if not cfg.outer:
        if g.outer is not None:
            return list(g.outer.vertices)
        raise WorkbenchError("--outer is required")
    return [g.vertex_id(t) for t in cfg.outer]


# ---------------------------------------------------------------------------
# per-graph commands; each returns (record, exit code)


def run_check_class(g: PlaneGraph, cfg: RunConfig) -> tuple[dict, int]:
    verdict = is_class_member(g)
    return {"in_class": verdict.member, "witness": verdict.to_dict()}, EXIT_OK if verdict.member else EXIT_FAIL


def run_color(g: PlaneGraph, cfg: RunConfig) -> tuple[dict, int]:
    partial = _resolve(g, cfg.partial)
    for c in partial.values():
        if not 1 <= c <= cfg.spec.k:
            raise WorkbenchError(f"color {c} outside 1..{cfg.spec.k}")
    if partial_violations(g, cfg.spec, partial):
        raise WorkbenchError("the partial coloring already violates the caps")
    res = solve(g, cfg.spec, partial, symmetry=cfg.symmetry)
    rec = {"spec": str(cfg.spec), **res.to_dict()}
    if res.sat:
        if not verify(g, cfg.spec, res.coloring).valid:
            raise AssertionError("solver produced a coloring that fails verification")
        rec["coloring"] = coloring_json(g, res.coloring)
        return rec, EXIT_OK
    return rec, EXIT_FAIL


def run_superextend(g: PlaneGraph, cfg: RunConfig) -> tuple[dict, int]:
    cyc = check_cycle(g, _outer_ids(g, cfg))
    if cfg.all_precolorings:
        verdict = is_superextendable(g, cyc)
        rec = {"cycle": list(cyc), **verdict.to_dict()}
        if verdict.witness is not None:
            rec["witness"] = coloring_json(g, verdict.witness)
        return rec, EXIT_OK if verdict.superextendable else EXIT_FAIL
    if cfg.precolor is None:
        raise WorkbenchError("give --precolor or --all-precolorings")
    res = superextend(g, cyc, _resolve(g, cfg.precolor))
    rec = {"cycle": list(cyc), **res.to_dict()}
    if res.sat:
        rec["coloring"] = coloring_json(g, res.coloring)
        return rec, EXIT_OK
    return rec, EXIT_FAIL


def run_discharge(g: PlaneGraph, cfg: RunConfig) -> tuple[dict, int]:
    h = g.with_outer(_outer_ids(g, cfg))
    index = build_structure_index(h)
    ledger = apply_rules(h, index, literal_five=cfg.literal_five)
    rec = {"outer": list(h.outer.vertices), "ledger": ledger.to_dict()}
    try:
        rec["audit"] = outer_audit(ledger, index).to_dict()
        audit_ok = True
    except AuditMismatch as exc:
        rec["audit"] = {"error": str(exc)}
        audit_ok = False
    report = final_charge_report(ledger)
    rec["negative"] = report.negative
    rec["sum"] = ledger.to_dict()["sum"]
    rec["audit_ok"] = audit_ok
    ok = audit_ok and report.total == 0
    return rec, EXIT_OK if ok else EXIT_FAIL


def run_scan(g: PlaneGraph, cfg: RunConfig) -> tuple[dict, int]:
    h = g.with_outer(_outer_ids(g, cfg))
    findings = scan_reducible_configurations(h, build_structure_index(h))
    rec = {"outer": list(h.outer.vertices), "findings": [f.to_dict() for f in findings]}
    rec["findings_count"] = len(findings)
    return rec, EXIT_OK


# ---------------------------------------------------------------------------
# corpus checks shared by batch mode and the acceptance suite


def cycles_to_superextend(g: PlaneGraph) -> list[tuple[int, ...]]:
    """Triangles, 5-cycles and good 6-cycles (bad/good decided side-agnostically)."""
    return [
        c
        for c in enumerate_cycles(g, 6)
        if len(c) != 4 and not (len(c) == 6 and classify_6cycle(g, c, interior_only=False) == "bad")
    ]


def outer_candidates(g: PlaneGraph) -> Iterator[PlaneGraph]:
    """``g`` re-rooted at each 3-, 5- and good 6-face bounded by a simple cycle."""
    for f in g.faces:
        if f.degree not in (3, 5, 6) or len(f.vertex_set) != f.degree:
            continue
        h = g.with_outer(f.vertices)
        if f.degree == 6 and classify_6cycle(h, h.outer.vertices) == "bad":
            continue
        yield h


def discharge_audit(g: PlaneGraph, literal_five: bool = False) -> dict:
    outers = 0
    failures = []
    for h in outer_candidates(g):
        outers += 1
        index = build_structure_index(h)
        ledger = apply_rules(h, index, literal_five=literal_five)
        total = sum(ledger.final_units().values())
        try:
            outer_audit(ledger, index)
            audit = True
        except AuditMismatch:
            audit = False
        if total != 0 or not audit:
            failures.append({"outer": list(h.outer.vertices), "sum_zero": total == 0, "audit": audit})
    return {"outers": outers, "failures": failures}


def superextension_summary(g: PlaneGraph) -> dict:
    cycles = cycles_to_superextend(g)
    failures = []
    checked = 0
    for c in cycles:
        verdict = is_superextendable(g, c)
        checked += verdict.checked
        if not verdict.superextendable:
            failures.append({"cycle": list(c), "witness": coloring_json(g, verdict.witness)})
    return {"cycles": len(cycles), "precolorings": checked, "failures": failures}


class _Timeout(Exception):
    pass


def _alarm(_signum, _frame):
    raise _Timeout


def analyze_graph(g: PlaneGraph, cfg: RunConfig) -> dict:
    """One batch record; ``violations`` lists every failed property."""
    rec: dict = {"n": g.n, "m": g.m}
    violations: list[str] = []
    member = None
    if "class" in cfg.checks or "color" in cfg.checks or "superextend" in cfg.checks:
        verdict = is_class_member(g)
        member = verdict.member
        rec["in_class"] = member
    if "color" in cfg.checks:
        for spec in (SPEC_200, SPEC_222):
            res = solve(g, spec)
            rec[f"color_{''.join(map(str, spec.caps))}"] = res.status
            if res.sat and not verify(g, spec, res.coloring).valid:
                violations.append(f"invalid coloring under {spec}")
        if member and rec["color_200"] != "sat":
            violations.append("class member is not (2,0,0)-colorable")
        if rec["color_222"] != "sat":
            violations.append("planar graph is not (2,2,2)-colorable")
    if "superextend" in cfg.checks and member and g.n <= cfg.limit_n:
        summary = superextension_summary(g)
        rec["superextension"] = summary
        if summary["failures"]:
            violations.append("cycle not superextendable")
    if "discharge" in cfg.checks:
        audit = discharge_audit(g, cfg.literal_five)
        rec["discharge"] = audit
        if audit["failures"]:
            violations.append("discharge audit failed")
    rec["violations"] = violations
    return rec


def _batch_worker(args: tuple[int, bytes, RunConfig]) -> dict:
    idx, rot_bytes, cfg = args
    g = next(read_graph_bytes(rot_bytes, ROT))
    return _guarded(idx, g, cfg)


def _guarded(idx: int, g: PlaneGraph, cfg: RunConfig) -> dict:
    use_timer = cfg.timeout and hasattr(signal, "setitimer")
    if use_timer:
        old = signal.signal(signal.SIGALRM, _alarm)
        signal.setitimer(signal.ITIMER_REAL, cfg.timeout)
    try:
        rec = analyze_graph(g, cfg)
        rec["status"] = "ok"
    except _Timeout:
        rec = {"n": g.n, "m": g.m, "status": "timeout", "violations": []}
    except WorkbenchError as exc:
        rec = {"n": g.n, "m": g.m, "status": "error", "error": str(exc), "violations": []}
    finally:
        if use_timer:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, old)
    return {"index": idx, **rec}


# ---------------------------------------------------------------------------
# driver


def _iter_inputs(cfg: RunConfig) -> Iterator[PlaneGraph]:
    for path in cfg.inputs:
        data = sys.stdin.buffer.read() if path == "-" else open(path, "rb").read()
        yield from read_graph_bytes(data, cfg.input_format)


def _emit(records: Iterable[dict], fmt: str, out) -> None:
    if fmt == "jsonl":
        for rec in records:
            out.write(json.dumps(rec, sort_keys=True) + "\n")
    elif fmt == "text":
        for rec in records:
            scalars = {k: v for k, v in rec.items() if isinstance(v, (str, int, float, bool)) or v is None}
            out.write(" ".join(f"{k}={json.dumps(v)}" for k, v in scalars.items()) + "\n")
    else:
        recs = list(records)
        doc = recs[0] if len(recs) == 1 else recs
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


COMMANDS: dict[str, Callable[[PlaneGraph, RunConfig], tuple[dict, int]]] = {
    "check-class": run_check_class,
    "color": run_color,
    "superextend": run_superextend,
    "discharge": run_discharge,
    "scan-configs": run_scan,
}


def run_single(cfg: RunConfig, out) -> int:
    records = []
    worst = EXIT_OK
    try:
        for i, g in enumerate(_iter_inputs(cfg)):
            rec, code = COMMANDS[cfg.command](g, cfg)
            records.append({"index": i, **rec})
            worst = max(worst, code)
    except (ParseError, InvariantError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (WorkbenchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if not records:
        print("error: no graphs in input", file=sys.stderr)
        return EXIT_PARSE
    _emit(records, cfg.output_format, out)
    return worst


def run_batch(cfg: RunConfig, out) -> int:
    fmt = "jsonl" if cfg.output_format == "json" else cfg.output_format
    failed = False

    def records() -> Iterator[dict]:
        nonlocal failed
        graphs = enumerate(_iter_inputs(cfg))
        if cfg.jobs > 1:
            from workbench.plane_graph import emit_rotation_text

            jobs = ((i, emit_rotation_text(g).encode(), cfg) for i, g in graphs)
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                for rec in pool.map(_batch_worker, jobs, chunksize=64):
                    failed |= bool(rec["violations"])
                    yield rec
        else:
            for i, g in graphs:
                rec = _guarded(i, g, cfg)
                failed |= bool(rec["violations"])
                yield rec

    try:
        _emit(records(), fmt, out)
    except (ParseError, InvariantError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="workbench", description="(2,0,0)-coloring and discharging workbench")
    p.add_argument("command", choices=[*COMMANDS, "batch"])
    p.add_argument("inputs", nargs="+", metavar="FILE", help=".rot or planar_code file (gzip ok, '-' for stdin)")
    p.add_argument("--input-format", choices=[ROT, PLANAR_CODE], help="default: detect from content")
    p.add_argument("--format", dest="output_format", choices=["json", "jsonl", "text"], default="json")
    p.add_argument("--spec", default="2,0,0", help="impropriety caps, e.g. 2,0,0")
    p.add_argument("--outer", help="outer cycle as comma-separated ids or labels")
    p.add_argument("--precolor", help="precoloring of the outer cycle, e.g. u1=1,u2=2")
    p.add_argument("--partial", help="partial coloring for the color command, e.g. t1=1")
    p.add_argument("--all-precolorings", action="store_true")
    p.add_argument("--limit-n", type=int, default=11, help="largest n for exhaustive superextension in batch")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timeout", type=float, help="per-graph seconds in batch mode")
    p.add_argument("--symmetry", action="store_true", help="prune color permutations while solving")
    p.add_argument("--literal-five", action="store_true", help='R2a 1/3 clause counts vertices of degree exactly 5')
    p.add_argument("--checks", default="class,color,superextend,discharge", help="batch checks to run")
    return p


def config_from_args(argv: list[str] | None = None) -> RunConfig:
    a = build_parser().parse_args(argv)
    if a.limit_n < 1 or a.jobs < 1 or (a.timeout is not None and a.timeout <= 0):
        raise ValueError("--limit-n, --jobs and --timeout must be positive")
    return RunConfig(
        command=a.command,
        inputs=a.inputs,
        input_format=a.input_format,
        output_format=a.output_format,
        spec=ColorSpec.parse(a.spec),
        outer=[t for t in a.outer.split(",") if t.strip()] if a.outer else None,
        precolor=parse_assignment(a.precolor) if a.precolor else None,
        partial=parse_assignment(a.partial) if a.partial else None,
        all_precolorings=a.all_precolorings,
        limit_n=a.limit_n,
        jobs=a.jobs,
        timeout=a.timeout,
        symmetry=a.symmetry,
        literal_five=a.literal_five,
        checks=tuple(c.strip() for c in a.checks.split(",") if c.strip()),
    )


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        cfg = config_from_args(argv)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if cfg.command == "batch":
        return run_batch(cfg, out)
    return run_single(cfg, out)


if __name__ == "__main__":
    sys.exit(main())
