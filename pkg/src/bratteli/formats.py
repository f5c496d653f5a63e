"""Canonical JSON file formats and rational serialization.

Diagram files come in two shapes:

    {"format": "triangular", "k0": 1, "mvectors": [[1], [1, 1], ...]}
    {"format": "general", "unital": true, "u1": [1], "matrices": [[[...]], ...]}

plus a targets file for synthesis inputs:

    {"format": "targets", "points": [["1"], ["2/3", "1/3"], ...]}

Parsing is strict: unknown keys are rejected so a mistyped field cannot be
silently ignored.  Emission is canonical (sorted keys, fixed separators), and
parse(emit(x)) is the identity on canonical form.  Rationals travel as "p/q"
strings (or bare integer strings).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Union

from .diagram import BratteliPrefix, MultiplicityMatrix, TriangularSpec
from .errors import FormatError
from .simplex import SimplexPoint

Diagram = Union[TriangularSpec, BratteliPrefix]


def fraction_to_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fraction_from_str(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"not a rational: {s!r}") from exc


def _require_keys(obj: dict, required: set[str], what: str) -> None:
    keys = set(obj)
    if keys != required:
        unknown = keys - required
        missing = required - keys
        parts = []
        if unknown:
            parts.append(f"unknown keys {sorted(unknown)}")
        if missing:
            parts.append(f"missing keys {sorted(missing)}")
        raise FormatError(f"{what}: " + ", ".join(parts))


def _int(v, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"{what} must be an integer, got {v!r}")
    return v


def parse_diagram(text: str) -> Diagram:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise FormatError("top-level value must be an object")
    fmt = obj.get("format")
    if fmt == "triangular":
        _require_keys(obj, {"format", "k0", "mvectors"}, "triangular diagram")
        k0 = _int(obj["k0"], "k0")
        mvs = obj["mvectors"]
        if not isinstance(mvs, list) or not all(isinstance(m, list) for m in mvs):
            raise FormatError("mvectors must be a list of lists")
        try:
            return TriangularSpec(k0, [[_int(e, "multiplicity") for e in m] for m in mvs])
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    if fmt == "general":
        _require_keys(obj, {"format", "unital", "u1", "matrices"}, "general diagram")
        if not isinstance(obj["unital"], bool):
            raise FormatError("unital must be a boolean")
        u1 = obj["u1"]
        mats = obj["matrices"]
        if not isinstance(u1, list) or not isinstance(mats, list):
            raise FormatError("u1 and matrices must be lists")
        try:
            levels = [[_int(e, "size") for e in u1]]
            matrices = []
            for m in mats:
                mat = MultiplicityMatrix([[_int(e, "multiplicity") for e in row] for row in m])
                matrices.append(mat)
                # the schema carries only the first level; later ones are
                # the images under the (unital) steps
                levels.append(list(mat.apply(levels[-1])))
            return BratteliPrefix(levels, matrices, unital=obj["unital"])
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    raise FormatError(f"unknown format {fmt!r}")


def emit_diagram(diagram: Diagram) -> str:
    if isinstance(diagram, TriangularSpec):
        obj: dict[str, Any] = {
            "format": "triangular",
            "k0": diagram.k0,
            "mvectors": [list(m) for m in diagram.mvectors],
        }
    elif isinstance(diagram, BratteliPrefix):
        obj = {
            "format": "general",
            "unital": diagram.unital,
            "u1": list(diagram.levels[0].entries),
            "matrices": [[list(r) for r in m.entries] for m in diagram.matrices],
        }
    else:
        raise FormatError(f"cannot emit {type(diagram).__name__}")
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def parse_targets(text: str) -> list[SimplexPoint]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or obj.get("format") != "targets":
        raise FormatError("expected a targets object")
    _require_keys(obj, {"format", "points"}, "targets")
    pts = obj["points"]
    if not isinstance(pts, list):
        raise FormatError("points must be a list")
    out = []
    for n, p in enumerate(pts):
        if not isinstance(p, list):
            raise FormatError(f"point {n} must be a list")
        coords = [fraction_from_str(c) for c in p]
        if len(coords) != n + 1:
            raise FormatError(f"point {n} must have {n + 1} coordinates")
        try:
            out.append(SimplexPoint(coords))
        except ValueError as exc:
            raise FormatError(f"point {n}: {exc}") from exc
    return out


def emit_targets(points) -> str:
    obj = {
        "format": "targets",
        "points": [[fraction_to_str(c) for c in p.coords] for p in points],
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
