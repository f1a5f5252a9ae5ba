"""JSON conversion: rationals become ``"p/q"`` strings, subsets become ``"1,2"`` keys."""
from __future__ import annotations

import dataclasses
import json

from gmpy2 import mpq


def scalar(x) -> str:
    x = mpq(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _key(k) -> str:
    if isinstance(k, (tuple, list, frozenset, set)):
        items = sorted(k) if isinstance(k, (frozenset, set)) else k
        return ",".join(_key(i) for i in items)
    if isinstance(k, type(mpq(0))):
        return scalar(k)
    return str(k)


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, type(mpq(0))):
        return scalar(obj)
    if isinstance(obj, float):
        return obj          # only the timing field is a float
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj) if not f.name.startswith("_")}
    if isinstance(obj, dict):
        return {_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return [to_jsonable(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if callable(obj):
        return None
    return str(obj)


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True, ensure_ascii=False)


def fmt_vec(v) -> str:
    return "(" + ", ".join(scalar(x) for x in v) + ")"
