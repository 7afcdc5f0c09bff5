"""JSON documents for algebra specs, torus data, matrices and results.

Generator indices inside documents are 1-based (``"alpha": {"1": poly}``
means the value on the first generator).  Rationals are strings ``"p/q"``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .exactalg import ArityError, LaurentPoly, as_rational, rational_str
from .poisson import IteratedPPASpec, QuadraticSpec, SpecError
from .skewfields import SkewMatrix
from .torus import TorusData

SCHEMA = 1


class DocumentError(ValueError):
    """Malformed input document; ``location`` is a JSON-path-like pointer."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


def _rational(value, where: str) -> Fraction:
    try:
        return as_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise DocumentError(where, f"not an exact rational: {value!r}") from exc


def poly_to_doc(f: LaurentPoly) -> list[dict]:
    return f.to_records()


def poly_from_doc(n: int, doc, where: str) -> LaurentPoly:
    if not isinstance(doc, list):
        raise DocumentError(where, "polynomial must be a list of {exponents, coefficient} records")
    for k, rec in enumerate(doc):
        if not isinstance(rec, dict) or "exponents" not in rec or "coefficient" not in rec:
            raise DocumentError(f"{where}[{k}]", "record needs 'exponents' and 'coefficient'")
        if not isinstance(rec["exponents"], list) or not all(
                isinstance(a, int) and not isinstance(a, bool) for a in rec["exponents"]):
            raise DocumentError(f"{where}[{k}].exponents", "must be a list of integers")
        _rational(rec["coefficient"], f"{where}[{k}].coefficient")
    try:
        return LaurentPoly.from_records(n, doc)
    except ArityError as exc:
        raise DocumentError(where, str(exc)) from exc


def _rat_list(values) -> list:
    return [None if v is None else rational_str(v) for v in values]


def torus_to_doc(td: TorusData) -> dict:
    return {"r": td.r, "weights": [list(w) for w in td.weights],
            "etas": [None if e is None else [rational_str(v) for v in e] for e in td.etas]}


def torus_from_doc(doc, where: str = "torus") -> TorusData:
    if not isinstance(doc, dict):
        raise DocumentError(where, "must be an object")
    for key in ("r", "weights", "etas"):
        if key not in doc:
            raise DocumentError(f"{where}.{key}", "missing")
    etas = []
    for i, e in enumerate(doc["etas"]):
        if e is None:
            etas.append(None)
        else:
            etas.append([_rational(v, f"{where}.etas[{i}][{k}]") for k, v in enumerate(e)])
    try:
        return TorusData(int(doc["r"]), doc["weights"], etas)
    except (TypeError, ValueError) as exc:
        raise DocumentError(where, str(exc)) from exc


def spec_to_doc(spec: IteratedPPASpec, torus: TorusData | None = None,
                mode: str = "polynomial", extra: dict | None = None) -> dict:
    steps = []
    for i in range(spec.n):
        step: dict[str, Any] = {
            "alpha": {str(j + 1): poly_to_doc(v) for j, v in sorted(spec.alpha[i].items())},
            "delta": {str(j + 1): poly_to_doc(v) for j, v in sorted(spec.delta[i].items())},
        }
        if spec.s[i] is not None:
            step["s"] = rational_str(spec.s[i])
        steps.append(step)
    doc: dict[str, Any] = {"schema": SCHEMA, "n": spec.n, "names": list(spec.names),
                           "mode": mode, "steps": steps}
    if torus is not None:
        doc["torus"] = torus_to_doc(torus)
    if extra:
        doc.update(extra)
    return doc


def spec_from_doc(doc) -> tuple[IteratedPPASpec, TorusData | None, str]:
    if not isinstance(doc, dict):
        raise DocumentError("$", "algebra document must be an object")
    if doc.get("schema", SCHEMA) != SCHEMA:
        raise DocumentError("schema", f"unsupported schema {doc.get('schema')!r}")
    if not isinstance(doc.get("n"), int) or doc["n"] < 1:
        raise DocumentError("n", "must be a positive integer")
    n = doc["n"]
    mode = doc.get("mode", "polynomial")
    if mode not in ("polynomial", "laurent"):
        raise DocumentError("mode", "must be 'polynomial' or 'laurent'")
    steps = doc.get("steps")
    if not isinstance(steps, list) or len(steps) != n:
        raise DocumentError("steps", f"need a list of {n} steps")
    alpha, delta, s = [], [], []
    for i, step in enumerate(steps):
        where = f"steps[{i}]"
        if not isinstance(step, dict):
            raise DocumentError(where, "must be an object")
        maps = []
        for key in ("alpha", "delta"):
            raw = step.get(key, {})
            if not isinstance(raw, dict):
                raise DocumentError(f"{where}.{key}", "must map generator indices to polynomials")
            out = {}
            for j, poly in raw.items():
                try:
                    jj = int(j) - 1
                except ValueError as exc:
                    raise DocumentError(f"{where}.{key}.{j}", "key must be a 1-based generator index") from exc
                if not 0 <= jj < i:
                    raise DocumentError(f"{where}.{key}.{j}", f"step {i + 1} only acts on generators 1..{i}")
                f = poly_from_doc(n, poly, f"{where}.{key}.{j}")
                if mode == "polynomial" and not f.is_polynomial():
                    raise DocumentError(f"{where}.{key}.{j}", "negative exponent in polynomial mode")
                out[jj] = f
            maps.append(out)
        alpha.append(maps[0])
        delta.append(maps[1])
        s.append(_rational(step["s"], f"{where}.s") if step.get("s") is not None else None)
    names = doc.get("names")
    if names is not None and (not isinstance(names, list) or len(names) != n):
        raise DocumentError("names", f"need {n} generator names")
    try:
        spec = IteratedPPASpec(n, alpha, delta, s, names)
    except SpecError as exc:
        raise DocumentError("steps", str(exc)) from exc
    torus = torus_from_doc(doc["torus"]) if doc.get("torus") is not None else None
    if torus is not None and torus.n != n:
        raise DocumentError("torus", f"covers {torus.n} generators, algebra has {n}")
    return spec, torus, mode


def matrix_to_doc(m: SkewMatrix) -> dict:
    return {"schema": SCHEMA, "n": m.n, "entries": m.to_strings()}


def matrix_from_doc(doc) -> SkewMatrix:
    if not isinstance(doc, dict):
        raise DocumentError("$", "matrix document must be an object")
    n = doc.get("n")
    entries = doc.get("entries")
    if not isinstance(n, int) or n < 1:
        raise DocumentError("n", "must be a positive integer")
    if not isinstance(entries, list) or len(entries) != n or any(
            not isinstance(r, list) or len(r) != n for r in entries):
        raise DocumentError("entries", f"need {n} rows of {n} entries")
    for i, row in enumerate(entries):
        for j, v in enumerate(row):
            if not isinstance(v, (str, int)) or isinstance(v, bool):
                raise DocumentError(f"entries[{i}][{j}]", "entry must be a string or integer")
    try:
        return SkewMatrix([[str(v) for v in row] for row in entries])
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError("entries", str(exc)) from exc


def quadratic_from_doc(doc) -> QuadraticSpec:
    m = matrix_from_doc(doc)
    if not m.is_rational():
        raise DocumentError("entries", "a quadratic structure needs rational entries")
    return QuadraticSpec(m.rational())


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DocumentError(path, f"cannot read: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}:{exc.lineno}:{exc.colno}", f"invalid JSON: {exc.msg}") from exc
