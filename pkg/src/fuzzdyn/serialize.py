"""JSON schemas for systems, sets, verdicts, and reports.

Rationals cross the interface as "p/q" strings everywhere; emission uses
canonical key order so identical inputs give byte-identical output.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction

from .errors import InputError
from .families import IndexSet
from .fuzzy import FuzzySet, GFunction, LevelGrid
from .hyperspace import CompactSet
from .spaces import (MetricSpace, SystemMap, as_fraction,
                     make_grid_interval_map, make_multiply, make_rotation)
from .symbolic import ShiftSystem
from .theorems import EquivalenceReport


def format_fraction(x: Fraction) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s) -> Fraction:
    return as_fraction(s)


def point_to_jsonable(p):
    if isinstance(p, Fraction):
        return format_fraction(p)
    if isinstance(p, frozenset):
        return sorted((point_to_jsonable(q) for q in p), key=json.dumps)
    if isinstance(p, tuple):
        return [point_to_jsonable(q) for q in p]
    return p


def point_key(p) -> str:
    j = point_to_jsonable(p)
    return j if isinstance(j, str) else json.dumps(j, sort_keys=True)


def system_to_jsonable(system) -> dict:
    """Emit the ingestible description: parametric when provenance is
    known, an explicit finite table otherwise."""
    if isinstance(system, ShiftSystem):
        edges = sorted((a, b) for a in system.alphabet
                       for b in system.alphabet if system.follows(a, b))
        return {"kind": "sft", "alphabet": list(system.alphabet),
                "edges": [[a, b] for a, b in edges],
                "resolution": system.resolution}
    if not isinstance(system, SystemMap):
        raise InputError(f"cannot serialize {system!r}")
    prov = system.provenance
    if prov and prov.get("kind") in ("rotation", "multiply", "grid_map"):
        return dict(sorted(prov.items()))
    if prov and prov.get("kind") in ("hyperspace_lift", "fuzzy_lift"):
        out = dict(prov)
        return out
    space = system.space
    pts = [point_key(p) for p in space.points]
    dist = [[format_fraction(space.d_by_index(i, j))
             for j in range(len(pts))] for i in range(len(pts))]
    mapping = {pts[i]: pts[system.table[i]] for i in range(len(pts))}
    return {"kind": "finite", "points": pts, "dist": dist, "map": mapping,
            "label": system.label}


def system_from_jsonable(obj: dict):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError("system description needs a 'kind' field")
    kind = obj["kind"]
    try:
        if kind == "rotation":
            return make_rotation(int(obj["n"]), int(obj["step"]))
        if kind == "multiply":
            return make_multiply(int(obj["n"]), int(obj["a"]))
        if kind == "grid_map":
            shape = obj["shape"]
            if isinstance(shape, list):
                shape = [(parse_fraction(a), parse_fraction(b))
                         for a, b in shape]
            return make_grid_interval_map(shape, int(obj["m"]),
                                          obj.get("snap", "down"))
        if kind == "sft":
            edges = obj.get("edges")
            pairs = None if edges in (None, "full") else \
                [(a, b) for a, b in edges]
            return ShiftSystem("".join(obj["alphabet"]), pairs,
                               int(obj["resolution"]))
        if kind == "finite":
            pts = list(obj["points"])
            dist = [[parse_fraction(v) for v in row] for row in obj["dist"]]
            space = MetricSpace(pts, matrix=dist,
                                label=obj.get("label", "finite"))
            mapping = obj["map"]
            index = {p: i for i, p in enumerate(pts)}
            table = [index[mapping[p]] for p in pts]
            return SystemMap(space, table, label=obj.get("label", "finite"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad system description: {exc}") from exc
    raise InputError(f"unknown system kind {kind!r}")


def compact_to_jsonable(c: CompactSet) -> list:
    return [point_to_jsonable(p) for p in c.sorted_points()]


def fuzzy_to_jsonable(a: FuzzySet) -> dict:
    grades = {point_key(p): format_fraction(g)
              for p, g in zip(a.space.points, a.grades) if g > 0}
    return {"grid_m": a.grid.m, "grades": grades}


def fuzzy_from_jsonable(space: MetricSpace, obj: dict) -> FuzzySet:
    grid = LevelGrid(int(obj["grid_m"]))
    lookup = {point_key(p): p for p in space.points}
    mapping = {}
    for key, val in obj.get("grades", {}).items():
        if key not in lookup:
            raise InputError(f"grade for unknown point {key!r}")
        mapping[lookup[key]] = parse_fraction(val)
    return FuzzySet.from_map(space, grid, mapping)


def gfunction_to_jsonable(g: GFunction) -> dict:
    return {"m": g.grid.m,
            "table": {format_fraction(k): format_fraction(v)
                      for k, v in sorted(g.table.items())}}


def gfunction_from_jsonable(obj: dict) -> GFunction:
    grid = LevelGrid(int(obj["m"]))
    table = {parse_fraction(k): parse_fraction(v)
             for k, v in obj["table"].items()}
    return GFunction(grid, table)


def indexset_to_jsonable(s: IndexSet) -> dict:
    return {"horizon": s.horizon, "members": s.sorted_members()}


def indexset_from_jsonable(obj: dict) -> IndexSet:
    return IndexSet.of(int(obj["horizon"]), [int(v) for v in obj["members"]])


def _jsonable_scalar(v):
    if isinstance(v, Fraction):
        return format_fraction(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable_scalar(x) for x in v]
    if isinstance(v, frozenset):
        return sorted((_jsonable_scalar(x) for x in v), key=json.dumps)
    if isinstance(v, dict):
        return {str(k): _jsonable_scalar(x) for k, x in v.items()}
    return v


def verdict_to_jsonable(v) -> dict:
    return {"status": v.status, "exact": v.exact,
            "horizon": v.horizon,
            "witnesses": _jsonable_scalar(v.witnesses),
            "counterexample": _jsonable_scalar(v.counterexample),
            "note": v.note}


def report_to_jsonable(report: EquivalenceReport) -> dict:
    return {
        "theorem": report.theorem,
        "system": report.system,
        "config": _jsonable_scalar(report.config),
        "items": [{
            "id": it.item_id, "property": it.prop, "level": it.level,
            "status": it.status, "exact": it.exact,
            "witnesses": _jsonable_scalar(it.witnesses),
            "note": it.note, "in_matrix": it.in_matrix,
        } for it in report.items],
        "consistent": report.consistent,
        "red_alert": report.red_alert,
        "replay": report.replay,
        "note": report.note,
    }


def report_csv_rows(report: EquivalenceReport) -> list[list[str]]:
    rows = [["theorem", "item", "property", "level", "status", "exact",
             "in_matrix", "note"]]
    for it in report.items:
        rows.append([report.theorem, it.item_id, it.prop, it.level,
                     it.status, str(it.exact), str(it.in_matrix), it.note])
    return rows


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file and rename, so readers never see partials."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
