"""Canonical small plane graphs shipped as ``.rot`` files."""

from __future__ import annotations

from importlib import resources
from typing import Sequence

from workbench.plane_graph import PlaneGraph, parse_rotation_text


def fixture_names() -> list[str]:
    root = resources.files("workbench") / "data" / "fixtures"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".rot"))


def fixture_text(name: str) -> str:
    path = resources.files("workbench") / "data" / "fixtures" / f"{name}.rot"
    if not path.is_file():
        raise KeyError(f"no fixture named {name!r}; have {fixture_names()}")
    return path.read_text()


def load_fixture(name: str, outer: Sequence[int | str] | None = None) -> PlaneGraph:
    """Load a fixture, optionally designating an outer cycle by ids or labels."""
    g = parse_rotation_text(fixture_text(name))
    if outer is None:
        return g
    return g.with_outer([g.vertex_id(v) for v in outer])
