"""Reading and writing frames, points and graphs.

Frame files are JSON objects::

    {"sizes": [1, 1, 1],
     "subspaces": {"1,3": [[[1.0]]], "2,3": [[[1.0]]]}}

where each ``"i,j"`` entry is a list of ``n_i x n_j`` matrices given as
nested row lists. Point files hold ``{"order": n, "matrix": [[...], ...]}``
or, for dual points given by a triangular factor,
``{"order": n, "factor": [[...], ...]}``. Graph files are edge lists with a
header line ``n <count>`` followed by one ``u v`` pair per line; blank lines
and ``#`` comments are ignored.

Floats are written with Python's shortest round-trip representation, so a
frame written and read back is bit-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .exceptions import ParseError, ShapeMismatch
from .frame import IshiFrame, make_frame
from .graphs import PatternGraph

__all__ = [
    "frame_to_dict",
    "frame_from_dict",
    "dumps_frame",
    "loads_frame",
    "read_frame",
    "write_frame",
    "read_point",
    "loads_graph",
    "read_graph",
    "dumps_graph",
]


def frame_to_dict(frame: IshiFrame) -> dict:
    """Plain-data form of a frame; trivial subspaces are omitted."""
    subspaces = {}
    for (i, j), sub in sorted(frame.off_diag.items()):
        if sub.dim:
            subspaces[f"{i},{j}"] = [E.tolist() for E in sub.basis]
    return {"sizes": list(frame.sizes), "subspaces": subspaces}


def frame_from_dict(data) -> IshiFrame:
    if not isinstance(data, dict) or "sizes" not in data:
        raise ParseError("frame data must be an object with a 'sizes' key")
    sizes = data["sizes"]
    if not isinstance(sizes, list) or not sizes or not all(isinstance(s, int) and s >= 1 for s in sizes):
        raise ParseError("'sizes' must be a non-empty list of positive integers")
    subspaces = data.get("subspaces", {})
    if not isinstance(subspaces, dict):
        raise ParseError("'subspaces' must be an object keyed by 'i,j'")
    gens = {}
    for key, mats in subspaces.items():
        if not isinstance(mats, list):
            raise ParseError(f"subspace {key!r} must be a list of matrices")
        try:
            arrs = [np.array(m, dtype=float) for m in mats]
        except (TypeError, ValueError) as exc:
            raise ParseError(f"subspace {key!r} holds a malformed matrix: {exc}") from exc
        for a in arrs:
            if a.ndim != 2:
                raise ParseError(f"subspace {key!r} holds a matrix that is not two-dimensional")
        gens[key] = arrs
    try:
        return make_frame(sizes, gens)
    except (ShapeMismatch, ValueError) as exc:
        raise ParseError(str(exc)) from exc


def dumps_frame(frame: IshiFrame) -> str:
    return json.dumps(frame_to_dict(frame), indent=2)


def loads_frame(text: str) -> IshiFrame:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"frame file is not valid JSON: {exc}") from exc
    return frame_from_dict(data)


def _read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def read_frame(path) -> IshiFrame:
    return loads_frame(_read_text(path))


def write_frame(frame: IshiFrame, path) -> None:
    Path(path).write_text(dumps_frame(frame) + "\n")


def read_point(path) -> tuple:
    """Return ``(kind, array)`` with ``kind`` either ``"matrix"`` or ``"factor"``."""
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"point file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "order" not in data:
        raise ParseError("point file must be an object with an 'order' key")
    kinds = [k for k in ("matrix", "factor") if k in data]
    if len(kinds) != 1:
        raise ParseError("point file needs exactly one of 'matrix' or 'factor'")
    kind = kinds[0]
    try:
        arr = np.array(data[kind], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"malformed {kind}: {exc}") from exc
    n = data["order"]
    if not isinstance(n, int) or arr.shape != (n, n):
        raise ParseError(f"{kind} has shape {arr.shape}, expected order {n}")
    return kind, arr


def loads_graph(text: str) -> PatternGraph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ParseError(f"line {lineno}: expected header 'n <count>'")
            try:
                n = int(parts[1])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: vertex count is not an integer") from exc
            continue
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'u v'")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: vertices must be integers") from exc
    if n is None:
        raise ParseError("graph file has no 'n <count>' header")
    try:
        return PatternGraph(n, frozenset(edges))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def read_graph(path) -> PatternGraph:
    return loads_graph(_read_text(path))


def dumps_graph(g: PatternGraph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"
