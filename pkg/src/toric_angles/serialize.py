"""JSON output: Fractions as ``"p/q"`` strings, floats at 17 significant digits."""

import json
import math
from dataclasses import fields, is_dataclass
from fractions import Fraction

import numpy as np

from .polytope import PiMultiple


def to_plain(obj, exact=True):
    """Recursively convert results into JSON-ready values.

    With ``exact=False`` Fractions are rendered as floats.
    """
    if isinstance(obj, Fraction):
        if not exact:
            return float(obj)
        return str(obj) if obj.denominator != 1 else int(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, (float, np.floating)):
        return _Float(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [to_plain(x, exact) for x in obj.tolist()]
    if isinstance(obj, PiMultiple):
        return {"coefficient": to_plain(obj.coefficient, exact), "pi_power": obj.power,
                "value": _Float(obj.value)}
    if hasattr(obj, "to_json"):
        return to_plain(obj.to_json(), exact)
    if is_dataclass(obj):
        return {f.name: to_plain(getattr(obj, f.name), exact) for f in fields(obj) if f.repr}
    if isinstance(obj, dict):
        return {_key(k): to_plain(v, exact) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [to_plain(x, exact) for x in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _key(k):
    if isinstance(k, tuple):
        return ",".join(str(x) for x in k)
    return str(k)


class _Float(float):
    pass


def _mark(o):
    if isinstance(o, _Float):
        return _FloatToken(o)
    if isinstance(o, dict):
        return {k: _mark(v) for k, v in o.items()}
    if isinstance(o, list):
        return [_mark(v) for v in o]
    return o


class _FloatToken(str):
    """Placeholder string replaced by the formatted float after encoding."""

    def __new__(cls, x):
        if math.isnan(x) or math.isinf(x):
            text = "null"
        else:
            text = format(x, ".17g")
            if not any(c in text for c in ".en"):
                text += ".0"
        return super().__new__(cls, "\0" + text + "\0")


def dumps(obj, exact=True, indent=2):
    text = json.dumps(_mark(to_plain(obj, exact)), indent=indent, sort_keys=False)
    return text.replace('"\\u0000', "").replace('\\u0000"', "")
