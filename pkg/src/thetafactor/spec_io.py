"""JSON form of a degeneration spec.

Schema::

    {"g1", "g2", "c1", "c2", "r", "k", "chi", "ell_total": int,
     "points": [{"id": str, "component": "C1" | "C2",
                 "flag_type": [int], "weights": [int], "alpha": int}]}

Rationals elsewhere in output documents are written as "p/q" strings.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import (
    InvalidParabolicData,
    InvariantViolation,
    NonIntegralSplit,
    ParseError,
    ThetaFactorError,
    ZeroPolarization,
)
from .parabolic import Component, DegenerationSpec, ParabolicPoint, balance_check

TOP_FIELDS = ("g1", "g2", "c1", "c2", "r", "k", "chi", "ell_total")
POINT_FIELDS = ("id", "component", "flag_type", "weights", "alpha")


def rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _int(doc: dict, key: str, path: str) -> int:
    if key not in doc:
        raise InvariantViolation(path, "missing field")
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvariantViolation(path, f"expected an integer, got {v!r}")
    return v


def _int_list(doc: dict, key: str, path: str) -> tuple[int, ...]:
    v = doc.get(key)
    if not isinstance(v, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in v):
        raise InvariantViolation(path, f"expected a list of integers, got {v!r}")
    return tuple(v)


def _point(doc: Any, i: int, r: int, k: int) -> ParabolicPoint:
    base = f"points[{i}]"
    if not isinstance(doc, dict):
        raise InvariantViolation(base, "expected an object")
    pid = doc.get("id")
    if not isinstance(pid, str) or not pid:
        raise InvariantViolation(f"{base}.id", "expected a non-empty string")
    comp = doc.get("component")
    if comp not in ("C1", "C2"):
        raise InvariantViolation(f"{base}.component", f"expected C1 or C2, got {comp!r}")
    flag_type = _int_list(doc, "flag_type", f"{base}.flag_type")
    weights = _int_list(doc, "weights", f"{base}.weights")
    alpha = _int(doc, "alpha", f"{base}.alpha")
    if not flag_type or any(n <= 0 for n in flag_type) or sum(flag_type) != r:
        raise InvariantViolation(f"{base}.flag_type", f"must be positive integers summing to r={r}")
    if len(weights) != len(flag_type):
        raise InvariantViolation(f"{base}.weights", "one weight per flag block is required")
    if any(b <= a for a, b in zip(weights, weights[1:])) or weights[0] <= 0 or weights[-1] >= k:
        raise InvariantViolation(f"{base}.weights", f"must increase strictly inside (0, {k})")
    if not 0 <= alpha < k - weights[-1] + weights[0]:
        raise InvariantViolation(f"{base}.alpha", "out of range")
    return ParabolicPoint(pid, Component(comp), flag_type, weights, alpha)


def spec_from_dict(doc: Any, enforce_balance: bool = True) -> DegenerationSpec:
    if not isinstance(doc, dict):
        raise InvariantViolation("$", "expected an object")
    vals = {key: _int(doc, key, key) for key in TOP_FIELDS}
    for key in ("g1", "g2"):
        if vals[key] < 0:
            raise InvariantViolation(key, "genus must be nonnegative")
    for key in ("c1", "c2", "r", "k"):
        if vals[key] <= 0:
            raise InvariantViolation(key, "must be positive")
    raw_points = doc.get("points", [])
    if not isinstance(raw_points, list):
        raise InvariantViolation("points", "expected a list")
    points = tuple(_point(p, i, vals["r"], vals["k"]) for i, p in enumerate(raw_points))
    ids = [p.point_id for p in points]
    for i, pid in enumerate(ids):
        if pid in ids[:i]:
            raise InvariantViolation(f"points[{i}].id", f"duplicate id {pid!r}")
    try:
        spec = DegenerationSpec(points=points, **vals)
    except NonIntegralSplit as exc:
        raise InvariantViolation("ell_total", str(exc)) from exc
    except (InvalidParabolicData, ZeroPolarization) as exc:
        raise InvariantViolation("$", str(exc)) from exc
    verdict = balance_check(spec)
    if enforce_balance and not verdict:
        raise InvariantViolation("balance", f"lhs {verdict.lhs} != k*chi = {verdict.rhs}")
    return spec


def parse_spec(text: str) -> DegenerationSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    return spec_from_dict(doc)


def load_spec(path: str | os.PathLike) -> DegenerationSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_spec(text)


def spec_to_dict(spec: DegenerationSpec) -> dict:
    doc: dict[str, Any] = {key: getattr(spec, key) for key in TOP_FIELDS}
    doc["points"] = [
        {
            "id": p.point_id,
            "component": p.component.value,
            "flag_type": list(p.flag_type),
            "weights": list(p.weights),
            "alpha": p.alpha,
        }
        for p in spec.points
    ]
    return doc


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def serialize(spec: DegenerationSpec) -> str:
    return dumps(spec_to_dict(spec))


def atomic_write(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def error_object(exc: BaseException) -> dict:
    doc = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, InvariantViolation):
        doc["path"] = exc.path
        doc["message"] = exc.message
    elif not isinstance(exc, ThetaFactorError):
        doc["error"] = "InputError"
    return doc
