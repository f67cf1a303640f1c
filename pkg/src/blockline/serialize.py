"""JSON encoding of sets, sequences and results.

Infinite bounds travel as the strings ``"-inf"`` and ``"inf"``; finite
numbers use Python's shortest round-trip ``repr``, so a value survives a
dump/load cycle bit for bit.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .errors import ValidationError
from .geom2d import Box, BoxUnionSet2D, DensityProbe, Transversal2D, Vec2
from .construct2d import GridSequence2D
from .sets1d import ClosedSet1D, Interval, Lattice, Point
from .transversal1d import GridSequence1D, Transversal1D


def num_out(v) -> Any:
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def num_in(v) -> float:
    if isinstance(v, str):
        if v in ("inf", "+inf", "-inf"):
            return float(v)
        raise ValidationError(f"expected a number or 'inf'/'-inf', got {v!r}")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(f"expected a number, got {v!r}")
    return float(v)


def dumps(obj) -> str:
    return json.dumps(obj, allow_nan=False)


# -- 1D ---------------------------------------------------------------------


def set1d_to_json(s: ClosedSet1D) -> dict:
    parts = []
    for p in s.parts:
        if isinstance(p, Interval):
            parts.append({"kind": "interval", "lo": num_out(p.lo), "hi": num_out(p.hi)})
        elif isinstance(p, Point):
            parts.append({"kind": "point", "at": num_out(p.at)})
        else:
            parts.append({"kind": "lattice", "offset": num_out(p.offset), "period": num_out(p.period)})
    return {"parts": parts}


def set1d_from_json(obj) -> ClosedSet1D:
    try:
        raw = obj["parts"]
    except (TypeError, KeyError):
        raise ValidationError("a set needs a 'parts' list") from None
    parts = []
    for p in raw:
        kind = p.get("kind") if isinstance(p, dict) else None
        try:
            if kind == "interval":
                parts.append(Interval(num_in(p["lo"]), num_in(p["hi"])))
            elif kind == "point":
                parts.append(Point(num_in(p["at"])))
            elif kind == "lattice":
                parts.append(Lattice(num_in(p["offset"]), num_in(p["period"])))
            else:
                raise ValidationError(f"unknown part kind {kind!r}")
        except KeyError as e:
            raise ValidationError(f"{kind} part is missing {e.args[0]!r}") from None
    return ClosedSet1D(tuple(parts))


def seq1d_to_json(seq: GridSequence1D) -> dict:
    return {"sets": [set1d_to_json(a) for a in seq.sets], "s": num_out(seq.s), "dense": seq.dense}


def seq1d_from_json(obj) -> GridSequence1D:
    if not isinstance(obj, dict) or "sets" not in obj or "s" not in obj:
        raise ValidationError("a 1D sequence needs 'sets' and 's'")
    return GridSequence1D(tuple(set1d_from_json(a) for a in obj["sets"]), num_in(obj["s"]), bool(obj.get("dense", True)))


def transversal1d_to_json(t: Transversal1D) -> dict:
    out = {"points": [num_out(p) for p in t.points], "z": [num_out(v) for v in t.z], "spread": num_out(t.spread)}
    out["offset_window"] = [num_out(v) for v in t.offset_window] if t.offset_window else None
    return out


# -- 2D ---------------------------------------------------------------------


def set2d_to_json(s: BoxUnionSet2D) -> dict:
    out = {"boxes": [{"x": [num_out(b.lx), num_out(b.hx)], "y": [num_out(b.ly), num_out(b.hy)]} for b in s.boxes]}
    if any(b.label is not None for b in s.boxes):
        out["labels"] = [b.label for b in s.boxes]
    return out


def set2d_from_json(obj) -> BoxUnionSet2D:
    if not isinstance(obj, dict) or "boxes" not in obj:
        raise ValidationError("a planar set needs a 'boxes' list")
    labels = obj.get("labels") or [None] * len(obj["boxes"])
    if len(labels) != len(obj["boxes"]):
        raise ValidationError("'labels' must have one entry per box")
    boxes = []
    for b, lab in zip(obj["boxes"], labels):
        try:
            (lx, hx), (ly, hy) = b["x"], b["y"]
        except (KeyError, TypeError, ValueError):
            raise ValidationError(f"box needs 'x' and 'y' pairs, got {b!r}") from None
        boxes.append(Box(num_in(lx), num_in(hx), num_in(ly), num_in(hy), lab))
    return BoxUnionSet2D(tuple(boxes))


def vec_out(p) -> list:
    return [num_out(p[0]), num_out(p[1])]


def seq2d_to_json(seq: GridSequence2D) -> dict:
    return {"sets": [set2d_to_json(a) for a in seq.sets], "s": vec_out(seq.s)}


def seq2d_from_json(obj, probe: DensityProbe | None = DensityProbe(), norm="euclidean") -> GridSequence2D:
    if not isinstance(obj, dict) or "sets" not in obj or "s" not in obj:
        raise ValidationError("a 2D sequence needs 'sets' and 's'")
    s = obj["s"]
    if not isinstance(s, list) or len(s) != 2:
        raise ValidationError("'s' must be a pair [x, y]")
    return GridSequence2D(tuple(set2d_from_json(a) for a in obj["sets"]), Vec2(num_in(s[0]), num_in(s[1])), norm, probe)


def transversal2d_to_json(t: Transversal2D, norm="euclidean") -> dict:
    return {"points": [vec_out(p) for p in t.points], "z": [vec_out(v) for v in t.z], "diameter": num_out(t.diameter(norm))}


def transversal2d_from_json(obj) -> Transversal2D:
    pts = obj["points"] if isinstance(obj, dict) else obj
    try:
        return Transversal2D(tuple(Vec2(num_in(p[0]), num_in(p[1])) for p in pts))
    except (TypeError, IndexError):
        raise ValidationError("transversal points must be [x, y] pairs") from None
