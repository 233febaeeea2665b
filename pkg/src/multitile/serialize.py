"""JSON encoding of exact values.

Rationals travel as strings (``"p/q"``, or ``"p"`` for integers), points as
two-element lists, polygons as ``{"vertices": [...]}`` and lattices as
``{"basis": [[...], [...]]}``. Floats are never emitted and never accepted.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any

from .geometry import ConvexPolygon, Lattice2, Mat2, Vec2

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*([+-]?\d+))?\s*$")


class FormatError(ValueError):
    """Malformed JSON payload (the message says where)."""


def encode_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(value: Any, where: str = "value") -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise FormatError(f"{where}: expected a rational string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise FormatError(f"{where}: expected a rational string, got {value!r}")
    m = _RATIONAL.match(value)
    if not m:
        raise FormatError(f"{where}: cannot parse rational {value!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den <= 0:
        raise FormatError(f"{where}: denominator must be positive in {value!r}")
    return Fraction(num, den)


def encode(obj: Any) -> Any:
    """Encode geometry objects (recursively through lists and dicts)."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction)):
        return encode_rational(obj)
    if isinstance(obj, Vec2):
        return [encode_rational(obj.x), encode_rational(obj.y)]
    if isinstance(obj, Mat2):
        return [[encode_rational(obj.a), encode_rational(obj.b)],
                [encode_rational(obj.c), encode_rational(obj.d)]]
    if isinstance(obj, ConvexPolygon):
        return {"vertices": [encode(v) for v in obj.vertices]}
    if isinstance(obj, Lattice2):
        return {"basis": [encode(b) for b in obj.basis]}
    if isinstance(obj, dict):
        return {k: encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def parse_point(value: Any, where: str = "point") -> Vec2:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise FormatError(f"{where}: expected a pair of rationals")
    return Vec2(parse_rational(value[0], f"{where}[0]"), parse_rational(value[1], f"{where}[1]"))


def parse_polygon(value: Any, where: str = "polygon") -> ConvexPolygon:
    if isinstance(value, dict):
        if "vertices" not in value:
            raise FormatError(f"{where}: missing 'vertices'")
        value = value["vertices"]
    if not isinstance(value, list):
        raise FormatError(f"{where}: expected a vertex list")
    pts = [parse_point(p, f"{where}.vertices[{i}]") for i, p in enumerate(value)]
    return ConvexPolygon(pts)


def parse_lattice(value: Any, where: str = "lattice") -> Lattice2:
    if isinstance(value, dict):
        if "basis" not in value:
            raise FormatError(f"{where}: missing 'basis'")
        value = value["basis"]
    if not isinstance(value, list) or len(value) != 2:
        raise FormatError(f"{where}: expected two basis vectors")
    return Lattice2(parse_point(value[0], f"{where}.basis[0]"), parse_point(value[1], f"{where}.basis[1]"))


def parse_matrix(value: Any, where: str = "matrix") -> Mat2:
    if not (isinstance(value, list) and len(value) == 2 and all(isinstance(r, list) and len(r) == 2 for r in value)):
        raise FormatError(f"{where}: expected [[a, b], [c, d]]")
    (a, b), (c, d) = value
    return Mat2(*(parse_rational(x, where) for x in (a, b, c, d)))


def encode_instance(inst) -> dict:
    out = {"polygon": encode(inst.polygon), "lattice": encode(inst.lattice), "fold": inst.fold}
    if inst.family is not None:
        out["family"] = inst.family
        if inst.param is not None:
            out["param"] = encode(inst.param)
    return out


def parse_instance(value: Any, where: str = "instance"):
    from .multitiling import MultiTilingInstance, recentre

    if not isinstance(value, dict):
        raise FormatError(f"{where}: expected an object")
    for key in ("polygon", "lattice"):
        if key not in value:
            raise FormatError(f"{where}: missing {key!r}")
    P = recentre(parse_polygon(value["polygon"], f"{where}.polygon"))
    L = parse_lattice(value["lattice"], f"{where}.lattice")
    fold = value.get("fold")
    if fold is None:
        k = P.area / L.det
        if k.denominator != 1:
            raise FormatError(f"{where}: no fold given and area/det = {k} is not an integer")
        fold = int(k)
    elif isinstance(fold, str):
        fold = parse_rational(fold, f"{where}.fold")
        if fold.denominator != 1:
            raise FormatError(f"{where}.fold: not an integer")
        fold = int(fold)
    elif isinstance(fold, bool) or not isinstance(fold, int):
        raise FormatError(f"{where}.fold: expected an integer")
    family = value.get("family")
    param = value.get("param")
    if param is not None:
        param = parse_point(param, f"{where}.param") if isinstance(param, list) else parse_rational(param, f"{where}.param")
    return MultiTilingInstance(P, L, fold, family, param)
