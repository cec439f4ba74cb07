"""Serialization: point literals, hex-float coefficient files, JSON/CSV reports.

Coefficients are written as ``float.hex`` strings so that files round-trip
bit for bit; report JSON is emitted with sorted keys so identical runs give
identical bytes.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
import re
from pathlib import Path

import numpy as np

from .geometry import CPoint, Finite, Infinite
from .polynomials import ChebyshevSeries, Polynomial, TrigPolynomial

SCHEMA = 1


class PointParseError(ValueError):
    """Malformed point literal; ``pos`` is the offending character index."""

    def __init__(self, text: str, pos: int, message: str):
        self.text, self.pos = text, pos
        super().__init__(f"{message} at position {pos}\n  {text}\n  {' ' * pos}^")


_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_TERM = re.compile(rf"([+-]?)({_NUMBER})?([ij]?)")
_REAL = re.compile(rf"[+-]?{_NUMBER}")


def parse_point(text: str) -> CPoint:
    """Parse ``a+bi`` (decimal parts, either optional) or ``inf@theta``.

    >>> parse_point("inf@0.5")
    Infinite(0.5)
    >>> parse_point("1-2i")
    Finite((1-2j))
    """
    lead = len(text) - len(text.lstrip())
    s = text.strip()
    if not s:
        raise PointParseError(text, lead, "empty point literal")
    if s[:3].lower() == "inf":
        if s[3:4] != "@":
            raise PointParseError(text, lead + 3, "expected '@' after 'inf'")
        m = _REAL.match(s, 4)
        if not m:
            raise PointParseError(text, lead + 4, "expected an angle")
        if m.end() != len(s):
            raise PointParseError(text, lead + m.end(), "unexpected character")
        return Infinite(float(m.group()))

    re_part = im_part = 0.0
    seen_re = seen_im = False
    pos = 0
    while pos < len(s):
        if pos > 0 and s[pos] not in "+-":
            raise PointParseError(text, lead + pos, "expected '+' or '-'")
        m = _TERM.match(s, pos)
        sign, num, unit = m.groups()
        if not num and not unit:
            raise PointParseError(text, lead + m.end(), "expected a number")
        if m.end() < len(s) and s[m.end()] not in "+-":
            raise PointParseError(text, lead + m.end(), "unexpected character")
        value = (float(num) if num else 1.0) * (-1.0 if sign == "-" else 1.0)
        if unit:
            if seen_im:
                raise PointParseError(text, lead + pos, "second imaginary part")
            im_part, seen_im = value, True
        else:
            if seen_re:
                raise PointParseError(text, lead + pos, "second real part")
            re_part, seen_re = value, True
        pos = m.end()
    return Finite(complex(re_part, im_part))


def format_point(p: CPoint) -> str:
    if isinstance(p, Infinite):
        return f"inf@{p.angle!r}"
    z = p.value
    return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}i"


# ---------------------------------------------------------------------------
# numbers


def hexc(z: complex) -> list[str]:
    z = complex(z)
    return [float(z.real).hex(), float(z.imag).hex()]


def _num(v) -> float:
    if isinstance(v, str):
        v = v.strip()
        return float.fromhex(v) if "0x" in v.lower() or v.lower() in ("inf", "-inf", "nan") else float(v)
    return float(v)


def parse_coefficient(v) -> complex:
    """A number, a decimal or hex string, or an ``[re, im]`` pair of those."""
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex coefficient must be [re, im], got {v!r}")
        return complex(_num(v[0]), _num(v[1]))
    if isinstance(v, str) and ("i" in v or "j" in v) and "0x" not in v.lower():
        return parse_point(v).value
    return complex(_num(v))


def plain(obj):
    """JSON-ready copy: numpy scalars unwrapped, non-finite floats as strings."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, (complex, np.complexfloating)):
        return [plain(obj.real), plain(obj.imag)]
    return obj


def dumps(obj) -> str:
    return json.dumps(plain(obj), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# approximants


def encode_approximant(q) -> dict:
    if isinstance(q, Polynomial):
        return {
            "schema": SCHEMA,
            "type": "polynomial",
            "center": hexc(q.center),
            "scale": float(q.scale).hex(),
            "degree": q.degree,
            "coeffs": [hexc(c) for c in q.coeffs[: q.degree + 1]],
        }
    if isinstance(q, TrigPolynomial):
        return {"schema": SCHEMA, "type": "trig", "order": q.order,
                "coeffs": [hexc(c) for c in q.coeffs]}
    if isinstance(q, ChebyshevSeries):
        c = q.coeffs[: q.degree + 1]
        return {"schema": SCHEMA, "type": "chebyshev", "degree": q.degree,
                "coeffs": [hexc(v) for v in c]}
    raise TypeError(f"cannot encode {type(q).__name__}")


def decode_approximant(obj: dict):
    kind = obj.get("type")
    coeffs = [parse_coefficient(v) for v in obj["coeffs"]]
    if kind == "polynomial":
        return Polynomial(coeffs, parse_coefficient(obj.get("center", 0)), _num(obj.get("scale", 1.0)))
    if kind == "trig":
        return TrigPolynomial(coeffs)
    if kind == "chebyshev":
        return ChebyshevSeries(coeffs)
    raise ValueError(f"unknown approximant type {kind!r}")


def load_sequence(path: str | Path) -> list[Polynomial]:
    """Polynomial sequence from JSON.

    Either a list of coefficient lists or ``{"polynomials": [...]}``, where
    each entry is a coefficient list or an encoded polynomial object.
    """
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if isinstance(data, dict):
        if "polynomials" not in data:
            raise ValueError(f"{path}: expected a 'polynomials' list")
        data = data["polynomials"]
    if not isinstance(data, list):
        raise ValueError(f"{path}: expected a list of polynomials")
    seq = []
    for i, entry in enumerate(data):
        try:
            if isinstance(entry, dict):
                seq.append(decode_approximant(entry))
            elif isinstance(entry, list) and entry:
                seq.append(Polynomial([parse_coefficient(v) for v in entry]))
            else:
                raise ValueError("empty or malformed coefficient list")
        except (ValueError, TypeError, KeyError) as exc:
            raise ValueError(f"{path}: polynomial {i}: {exc}") from None
    return seq


def write_sequence(path: str | Path, seq) -> None:
    Path(path).write_text(dumps({"schema": SCHEMA, "polynomials": [encode_approximant(p) for p in seq]}))


# ---------------------------------------------------------------------------
# tables


def csv_text(header: list[str], rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def flat_csv(record: dict) -> str:
    """Two-column ``key,value`` rendering of a (possibly nested) record."""
    rows = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        else:
            rows.append((prefix, json.dumps(v) if isinstance(v, list) else v))

    walk("", plain(record))
    return csv_text(["key", "value"], rows)
