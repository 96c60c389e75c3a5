"""DIMACS edge-format and JSON serialization for graphs.

The DIMACS dialect used here: optional ``c`` comment lines, exactly one
``p edge N M`` problem line, then one ``e u v`` line per edge with
1-indexed vertex ids.  Files written by this module list edges in
canonical order, so write -> read -> write is byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO

from .graphs import BaseGraph, Graph


class DimacsError(ValueError):
    """Malformed DIMACS input; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def write_dimacs(g: Graph, target: str | Path | IO[str]) -> None:
    """Write ``g`` in DIMACS edge format with 1-indexed vertices."""
    if hasattr(target, "write"):
        _write_dimacs(g, target)
    else:
        with open(target, "w") as fh:
            _write_dimacs(g, fh)


def _write_dimacs(g: Graph, fh: IO[str]) -> None:
    fh.write(f"p edge {g.num_vertices} {g.num_edges}\n")
    for u, v in g.edge_list:
        fh.write(f"e {u + 1} {v + 1}\n")


def read_dimacs(source: str | Path | IO[str]) -> Graph:
    """Parse a DIMACS edge-format graph; raises ``DimacsError`` on bad input."""
    if hasattr(source, "read"):
        return _read_dimacs(source)
    with open(source) as fh:
        return _read_dimacs(fh)


def _read_dimacs(fh: IO[str]) -> Graph:
    num_vertices = None
    declared_edges = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        if fields[0] == "p":
            if num_vertices is not None:
                raise DimacsError("duplicate problem line", lineno)
            if len(fields) != 4 or fields[1] != "edge":
                raise DimacsError(f"malformed problem line {line!r}", lineno)
            try:
                num_vertices = int(fields[2])
                declared_edges = int(fields[3])
            except ValueError:
                raise DimacsError(f"non-integer counts in {line!r}", lineno) from None
        elif fields[0] == "e":
            if num_vertices is None:
                raise DimacsError("edge line before problem line", lineno)
            if len(fields) != 3:
                raise DimacsError(f"malformed edge line {line!r}", lineno)
            try:
                u, v = int(fields[1]), int(fields[2])
            except ValueError:
                raise DimacsError(f"non-integer endpoint in {line!r}", lineno) from None
            if not (1 <= u <= num_vertices and 1 <= v <= num_vertices):
                raise DimacsError(f"endpoint out of range in {line!r}", lineno)
            if u == v:
                raise DimacsError(f"self-loop in {line!r}", lineno)
            edges.append((u - 1, v - 1))
        else:
            raise DimacsError(f"unknown line type {fields[0]!r}", lineno)
    if num_vertices is None:
        raise DimacsError("missing problem line", 0)
    if declared_edges != len(edges):
        raise DimacsError(
            f"problem line declares {declared_edges} edges, found {len(edges)}", 0
        )
    return Graph(num_vertices, edges)


def write_vertex_json(g: BaseGraph, target: str | Path | IO[str]) -> None:
    """Write the base graph's vertex bit patterns as a JSON document."""
    doc = {
        "n": g.n,
        "dimension": g.dimension,
        "num_vertices": g.num_vertices,
        "vertices": g.vertex_strings(),
    }
    dump_json(doc, target)


def dump_json(doc, target: str | Path | IO[str]) -> None:
    """Serialize ``doc`` deterministically (sorted keys, 2-space indent)."""
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w") as fh:
            fh.write(text)
