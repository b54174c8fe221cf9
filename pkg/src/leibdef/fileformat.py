"""Algebra files, the built-in catalog, and JSON encodings of results.

An algebra file is JSON::

    {"name": "nilp2", "dim": 2, "labels": ["e1", "e2"],
     "brackets": [{"left": 2, "right": 2, "value": [[1, "1"]]}]}

Indices are 1-based.  Each ``value`` entry is ``[k, c]`` meaning the term
``c e_k``; ``c`` is an integer or a string ``"p/q"``.  Brackets not listed
are zero.  Floats are rejected everywhere.
"""
from __future__ import annotations

import hashlib
import json
import os
import re
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Sequence

from .deformation import Deformation
from .exact_linalg import zeros
from .leibniz import Cochain, LeibnizAlgebra
from .local_algebra import (
    TruncatedLocalAlgebra,
    format_monomial,
    format_polynomial,
    parse_polynomial,
)

__all__ = [
    "ParseError",
    "algebra_digest",
    "algebra_to_dict",
    "catalog_names",
    "decode_base",
    "decode_cochain",
    "decode_deformation",
    "dumps",
    "encode_base",
    "encode_cochain",
    "encode_deformation",
    "load_algebra",
    "parse_algebra",
    "serialize_algebra",
]

CATALOG_ENV = "LEIBDEF_CATALOG"
_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


class ParseError(ValueError):
    """Malformed algebra file; the message names the line or field."""


def rational_str(x) -> str:
    return str(Fraction(x))


def parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"{where}: {value!r} is not an exact rational (use an integer or \"p/q\")")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.match(value):
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            raise ParseError(f"{where}: zero denominator in {value!r}") from None
    raise ParseError(f"{where}: {value!r} is not a rational of the form \"p/q\" or an integer")


def _index(value, dim: int, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: index must be an integer, got {value!r}")
    if not 1 <= value <= dim:
        raise ParseError(f"{where}: index {value} out of range 1..{dim}")
    return value - 1


def algebra_from_dict(data: Any, source: str = "<input>") -> LeibnizAlgebra:
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object")
    unknown = set(data) - {"name", "dim", "labels", "brackets", "comment"}
    if unknown:
        raise ParseError(f"{source}: unknown field(s) {sorted(unknown)}")
    if "dim" not in data:
        raise ParseError(f"{source}: missing field 'dim'")
    dim = data["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise ParseError(f"{source}: field 'dim' must be an integer")
    if dim < 1:
        raise ParseError(f"{source}: field 'dim' must be at least 1, got {dim}")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise ParseError(f"{source}: field 'name' must be a string")
    labels = data.get("labels")
    if labels is None:
        labels = [f"e{i + 1}" for i in range(dim)]
    if (
        not isinstance(labels, list)
        or len(labels) != dim
        or not all(isinstance(x, str) and x for x in labels)
        or len(set(labels)) != dim
    ):
        raise ParseError(f"{source}: field 'labels' must list {dim} distinct non-empty strings")
    brackets = data.get("brackets", [])
    if not isinstance(brackets, list):
        raise ParseError(f"{source}: field 'brackets' must be a list")
    c = zeros((dim, dim, dim))
    seen = set()
    for n, entry in enumerate(brackets):
        where = f"{source}: brackets[{n}]"
        if not isinstance(entry, dict) or set(entry) != {"left", "right", "value"}:
            raise ParseError(f"{where}: expected an object with keys left, right, value")
        i = _index(entry["left"], dim, f"{where}.left")
        j = _index(entry["right"], dim, f"{where}.right")
        if (i, j) in seen:
            raise ParseError(f"{where}: duplicate entry for [{labels[i]},{labels[j]}]")
        seen.add((i, j))
        value = entry["value"]
        if not isinstance(value, list):
            raise ParseError(f"{where}.value: expected a list of [index, rational] pairs")
        for m, term in enumerate(value):
            tw = f"{where}.value[{m}]"
            if not isinstance(term, list) or len(term) != 2:
                raise ParseError(f"{tw}: expected [index, rational]")
            k = _index(term[0], dim, tw)
            c[i, j, k] += parse_rational(term[1], tw)
    return LeibnizAlgebra(c, labels=tuple(labels), name=name)


def parse_algebra(text: str, source: str = "<input>") -> LeibnizAlgebra:
    """Parse the JSON text of an algebra file."""
    try:
        data = json.loads(text, parse_float=_reject_float(source))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return algebra_from_dict(data, source)


def _reject_float(source: str):
    def hook(text):
        raise ParseError(f"{source}: float literal {text} is not exact; use a string \"p/q\"")

    return hook


def algebra_to_dict(alg: LeibnizAlgebra) -> dict:
    n = alg.dim
    brackets = []
    for i in range(n):
        for j in range(n):
            value = [[k + 1, rational_str(alg.constants[i, j, k])] for k in range(n) if alg.constants[i, j, k] != 0]
            if value:
                brackets.append({"left": i + 1, "right": j + 1, "value": value})
    return {"name": alg.name, "dim": n, "labels": list(alg.labels), "brackets": brackets}


def dumps(data: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize_algebra(alg: LeibnizAlgebra) -> str:
    return dumps(algebra_to_dict(alg))


def algebra_digest(alg: LeibnizAlgebra) -> str:
    canon = json.dumps(algebra_to_dict(alg), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canon.encode()).hexdigest()


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def _catalog_dir() -> Path:
    override = os.environ.get(CATALOG_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("leibdef") / "catalog"))


def catalog_names() -> list[str]:
    d = _catalog_dir()
    return sorted(p.stem for p in d.glob("*.json")) if d.is_dir() else []


def load_algebra(name: str) -> LeibnizAlgebra:
    """Load from a file path, or from the catalog by name."""
    path = Path(name)
    if not path.is_file():
        candidate = _catalog_dir() / f"{name}.json"
        if not candidate.is_file():
            known = ", ".join(catalog_names()) or "none"
            raise ParseError(f"{name}: no such file or catalog entry (catalog: {known})")
        path = candidate
    return parse_algebra(path.read_text(encoding="utf-8"), str(name))


# ---------------------------------------------------------------------------
# result encodings
# ---------------------------------------------------------------------------

def encode_vector(alg: LeibnizAlgebra, vec: Sequence, labels: Sequence[str] | None = None) -> dict:
    labels = labels or alg.labels
    return {labels[k]: rational_str(v) for k, v in enumerate(vec) if v != 0}


def encode_cochain(alg: LeibnizAlgebra, f: Cochain) -> dict:
    """``{"e1,e2": {"e1": "1/2"}}``: nonzero values on basis tuples."""
    out = {}
    for idx in _tuples(alg.dim, f.degree):
        value = encode_vector(alg, f.coeffs[idx])
        if value:
            out[",".join(alg.labels[i] for i in idx)] = value
    return out


def _tuples(n: int, q: int):
    import itertools

    return itertools.product(range(n), repeat=q)


def decode_cochain(alg: LeibnizAlgebra, degree: int, data: Mapping) -> Cochain:
    index = {label: i for i, label in enumerate(alg.labels)}
    n = alg.dim
    coeffs = zeros((n,) * degree + (n,))
    for key, value in data.items():
        args = tuple(index[x] for x in key.split(",")) if key else ()
        if len(args) != degree:
            raise ValueError(f"cochain key {key!r} does not have {degree} arguments")
        for label, c in value.items():
            coeffs[args + (index[label],)] = Fraction(c)
    return Cochain(degree, n, n, coeffs)


def encode_base(base: TruncatedLocalAlgebra) -> dict:
    return {
        "variables": list(base.names),
        "order": base.order,
        "presentation": str(base),
        "dim": base.dim,
        "normal_basis": [format_monomial(m, base.names) for m in base.basis],
        "ideal_basis": [format_polynomial(p, base.names) for p in base.ideal_polynomials()],
    }


def decode_base(data: Mapping) -> TruncatedLocalAlgebra:
    n = len(data["variables"])
    names = data["variables"]
    rels = [parse_polynomial(p, n, names) for p in data["ideal_basis"]]
    return TruncatedLocalAlgebra(n, data["order"], rels)


def encode_deformation(lam: Deformation) -> dict:
    names = lam.base.names
    return {
        "base": encode_base(lam.base),
        "brackets": lam.format_brackets(),
        "coefficients": [
            {"monomial": format_monomial(m, names), "cochain": encode_cochain(lam.algebra, c)}
            for m, c in lam.psi.items()
        ],
    }


def decode_deformation(alg: LeibnizAlgebra, data: Mapping) -> Deformation:
    base = decode_base(data["base"])
    psi = {}
    for entry in data["coefficients"]:
        poly = parse_polynomial(entry["monomial"], base.num_vars, base.names)
        (m,) = poly
        psi[m] = decode_cochain(alg, 2, entry["cochain"])
    return Deformation(alg, base, psi)
