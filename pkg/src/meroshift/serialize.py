"""Text and JSON conventions shared by every module.

Complex numbers travel as strings such as ``"1.5-2i"``.  Any constant
expression in the grammar is accepted on input (``"pi^pi - 1"``,
``"exp(2*pi*i/3)"``), so inputs can be written the way they appear in a
derivation.  Output floats use ``%.12g`` so emitted JSON re-renders to the
same bytes after a parse.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from numbers import Number

import numpy as np

from .evaluate import evaluate
from .expr import Var, children
from .parse import parse

FLOAT_FORMAT = "%.12g"


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = FLOAT_FORMAT % x
    return "0" if s == "-0" else s


def format_complex(w) -> str:
    """``a+bi`` text with ``%.12g`` parts; pure reals print without ``i``."""
    w = complex(w)
    re, im = w.real, w.imag
    if im == 0:
        return format_float(re)
    im_text = format_float(abs(im))
    sign = "-" if im < 0 else "+"
    if re == 0:
        return ("-" if im < 0 else "") + im_text + "i"
    return f"{format_float(re)}{sign}{im_text}i"


def parse_complex(text) -> complex:
    """Read a complex constant from text (or pass numbers straight through)."""
    if isinstance(text, Number):
        return complex(text)
    s = str(text).strip()
    if not s:
        raise ValueError("empty complex literal")
    expr = parse(s)
    if _mentions_z(expr):
        raise ValueError(f"{s!r} is not a constant")
    out = evaluate(expr, 0)
    if not out.ok:
        raise ValueError(f"constant {s!r} does not evaluate to a finite number")
    return out.value


def _mentions_z(e) -> bool:
    if isinstance(e, Var):
        return True
    return any(_mentions_z(c) for c in children(e))


def parse_fraction(text) -> Fraction:
    """Exact rational from ``"3/4"``, ``"-2"``, ``"0.125"`` or an int."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        return Fraction(repr(text))
    return Fraction(str(text).strip().replace(" ", ""))


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ----------------------------------------------------------------------------
# canonical JSON


def to_jsonable(obj):
    """Convert complex numbers, fractions and tuples into JSON-ready values."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, complex):
        return format_complex(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, np.generic):
        return to_jsonable(obj.item())
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Canonical JSON: sorted keys, ``%.12g`` floats, fixed indentation."""
    return _dump(to_jsonable(obj), indent, 0)


def _dump(v, indent, level) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(v[k], indent, level + 1)}" for k in sorted(v)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, list):
        if not v:
            return "[]"
        if all(not isinstance(x, (dict, list)) for x in v):
            return "[" + ", ".join(_dump(x, indent, level + 1) for x in v) + "]"
        items = [pad + _dump(x, indent, level + 1) for x in v]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            return json.dumps(format_float(v))
        s = format_float(v)
        # keep floats recognisable as floats after a round trip
        if all(ch in "-0123456789" for ch in s):
            s += ".0"
        return s
    return json.dumps(v, ensure_ascii=False)
