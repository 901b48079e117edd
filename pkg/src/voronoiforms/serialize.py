"""Deterministic JSON and text rendering; rationals always travel as "p/q" strings."""
from __future__ import annotations

import json
from dataclasses import fields, is_dataclass
from fractions import Fraction

import numpy as np

from .exactgeom import RationalMatrix
from .qform import QuadraticForm


def jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, QuadraticForm):
        return jsonable(obj.gram)
    if isinstance(obj, RationalMatrix):
        return [[str(x) for x in row] for row in obj.rows]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {str(jsonable(k)) if not isinstance(k, str) else k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((jsonable(x) for x in obj), key=repr)
    if is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in fields(obj) if f.repr}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def vec(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def star_export(star) -> str:
    """One block per cell: sorted vertices, then the certificate constant and linear part."""
    out = [f"star n={star.form.n} cells={len(star)}"]
    for i, cell in enumerate(star.cells):
        c, p = cell.certificate
        out.append(f"cell {i} vertices={len(cell.vertices)}")
        out.extend("  " + vec(v) for v in cell.vertices)
        out.append(f"  c {c}")
        out.append(f"  p {vec(p)}")
    return "\n".join(out) + "\n"


def parse_star_export(text: str) -> list[tuple[tuple, tuple]]:
    """Inverse of star_export: [(vertices, (c, p))]."""
    cells = []
    cur = None
    for line in text.splitlines()[1:]:
        s = line.strip()
        if s.startswith("cell "):
            cur = {"v": [], "c": None, "p": None}
            cells.append(cur)
        elif s.startswith("c "):
            cur["c"] = Fraction(s[2:])
        elif s.startswith("p "):
            cur["p"] = tuple(Fraction(x) for x in s[3:-1].split(","))
        elif s.startswith("("):
            cur["v"].append(tuple(int(x) for x in s[1:-1].split(",")))
    return [(tuple(c["v"]), (c["c"], c["p"])) for c in cells]
