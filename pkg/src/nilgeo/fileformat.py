"""Algebra description files: strict JSON with rationals as strings.

Example::

    {
      "name": "heis3_riem",
      "dim": 3,
      "basis": ["x", "y", "z"],
      "brackets": [{"i": 0, "j": 1, "coeffs": {"2": "1"}}],
      "metric": [{"i": 0, "j": 0, "value": "1"}, ...],
      "attributes": {"nilpotency_class": 2}
    }

Indices are 0-based.  Brackets are listed for i < j only and metric entries
for i <= j only; everything not listed is zero.
"""

from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction
from typing import Any

from .algebra import MetricNilAlgebra
from .ratlinalg import rational_str

RATIONAL_RE = re.compile(r"-?[0-9]+(/[1-9][0-9]*)?")
TOP_KEYS = ("name", "dim", "basis", "brackets", "metric", "attributes")


class FormatError(ValueError):
    """Malformed algebra file.  ``diagnostics`` lists ``(location, message)`` pairs."""

    def __init__(self, diagnostics: list[tuple[str, str]]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(f"{loc}: {msg}" for loc, msg in diagnostics))


def parse_rational(text: Any, where: str) -> Fraction:
    if not isinstance(text, str):
        raise FormatError([(where, f"expected a rational string, got {json.dumps(text)}")])
    if not RATIONAL_RE.fullmatch(text):
        raise FormatError([(where, f"{text!r} does not match INT or INT/POSINT")])
    return Fraction(text)


format_rational = rational_str


def _index(value: Any, dim: int, where: str, errors: list) -> int | None:
    if isinstance(value, bool) or not isinstance(value, int):
        errors.append((where, f"expected an integer index, got {json.dumps(value)}"))
        return None
    if not 0 <= value < dim:
        errors.append((where, f"index {value} out of range 0..{dim - 1}"))
        return None
    return value


def _rational(value: Any, where: str, errors: list) -> Fraction | None:
    try:
        return parse_rational(value, where)
    except FormatError as exc:
        errors.extend(exc.diagnostics)
        return None


def algebra_from_dict(data: Any) -> MetricNilAlgebra:
    """Validate the schema and build the algebra; collects every diagnostic before failing."""
    if not isinstance(data, dict):
        raise FormatError([("$", "top level must be an object")])
    errors: list[tuple[str, str]] = []
    for key in data:
        if key not in TOP_KEYS:
            errors.append((f"$.{key}", "unknown field"))
    for key in ("name", "dim", "basis", "brackets", "metric"):
        if key not in data:
            errors.append((f"$.{key}", "missing required field"))
    if errors:
        raise FormatError(errors)

    name, dim, basis = data["name"], data["dim"], data["basis"]
    if not isinstance(name, str) or not name:
        errors.append(("$.name", "expected a non-empty string"))
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise FormatError(errors + [("$.dim", f"expected a positive integer, got {json.dumps(dim)}")])
    if not isinstance(basis, list) or not all(isinstance(b, str) for b in basis):
        errors.append(("$.basis", "expected a list of strings"))
    elif len(basis) != dim:
        errors.append(("$.basis", f"has {len(basis)} labels but dim is {dim}"))
    elif len(set(basis)) != dim:
        errors.append(("$.basis", "labels must be distinct"))

    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    if not isinstance(data["brackets"], list):
        errors.append(("$.brackets", "expected a list"))
    else:
        for n, entry in enumerate(data["brackets"]):
            where = f"$.brackets[{n}]"
            if not isinstance(entry, dict) or set(entry) != {"i", "j", "coeffs"}:
                errors.append((where, "expected an object with exactly i, j, coeffs"))
                continue
            i = _index(entry["i"], dim, f"{where}.i", errors)
            j = _index(entry["j"], dim, f"{where}.j", errors)
            if i is None or j is None:
                continue
            if i >= j:
                errors.append((where, f"brackets are listed only for i < j (got i={i}, j={j})"))
                continue
            if (i, j) in brackets:
                errors.append((where, f"duplicate bracket ({i}, {j})"))
                continue
            coeffs = entry["coeffs"]
            if not isinstance(coeffs, dict):
                errors.append((f"{where}.coeffs", "expected an object index -> rational string"))
                continue
            out: dict[int, Fraction] = {}
            for key, value in coeffs.items():
                kw = f"{where}.coeffs.{key}"
                if not re.fullmatch(r"0|[1-9][0-9]*", key):
                    errors.append((kw, "coefficient keys are decimal indices"))
                    continue
                k = _index(int(key), dim, kw, errors)
                c = _rational(value, kw, errors)
                if k is not None and c is not None and c:
                    out[k] = c
            brackets[(i, j)] = out

    metric: dict[tuple[int, int], Fraction] = {}
    if not isinstance(data["metric"], list):
        errors.append(("$.metric", "expected a list"))
    else:
        for n, entry in enumerate(data["metric"]):
            where = f"$.metric[{n}]"
            if not isinstance(entry, dict) or set(entry) != {"i", "j", "value"}:
                errors.append((where, "expected an object with exactly i, j, value"))
                continue
            i = _index(entry["i"], dim, f"{where}.i", errors)
            j = _index(entry["j"], dim, f"{where}.j", errors)
            v = _rational(entry["value"], f"{where}.value", errors)
            if i is None or j is None or v is None:
                continue
            if i > j:
                errors.append((where, f"metric entries are listed only for i <= j (got i={i}, j={j})"))
                continue
            if (i, j) in metric:
                errors.append((where, f"duplicate metric entry ({i}, {j})"))
                continue
            if v:
                metric[(i, j)] = v

    attributes = data.get("attributes", {})
    if not isinstance(attributes, dict):
        errors.append(("$.attributes", "expected an object"))
    if errors:
        raise FormatError(errors)
    return MetricNilAlgebra.from_brackets(name, basis, brackets, metric, attributes)


def loads(text: str) -> MetricNilAlgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError([(f"line {exc.lineno}, column {exc.colno}", exc.msg)]) from None
    return algebra_from_dict(data)


def load(path) -> MetricNilAlgebra:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def algebra_to_dict(alg: MetricNilAlgebra) -> dict:
    n = alg.dim
    c = alg.tensor
    brackets = []
    for i in range(n):
        for j in range(i + 1, n):
            coeffs = {str(k): format_rational(c[i][j][k]) for k in range(n) if c[i][j][k]}
            if coeffs:
                brackets.append({"i": i, "j": j, "coeffs": coeffs})
    metric = [
        {"i": i, "j": j, "value": format_rational(alg.metric[i, j])}
        for i in range(n) for j in range(i, n) if alg.metric[i, j]
    ]
    return {
        "name": alg.name,
        "dim": n,
        "basis": list(alg.basis_names),
        "brackets": brackets,
        "metric": metric,
        "attributes": dict(alg.attributes),
    }


def dumps(alg: MetricNilAlgebra) -> str:
    """Canonical text: fixed key order, sorted indices, lowest-terms rationals, trailing newline."""
    d = algebra_to_dict(alg)
    d["attributes"] = json.loads(json.dumps(d["attributes"], sort_keys=True))
    return json.dumps(d, indent=2, ensure_ascii=False) + "\n"


def dump(alg: MetricNilAlgebra, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(alg))


def roundtrip(text: str) -> str:
    return dumps(loads(text))


def sha256_hex(data: str | bytes) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()
