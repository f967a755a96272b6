"""JSON interchange for matrices, root data, morphisms, triples and products.

Every ``*_from_json`` function takes the decoded object plus a ``path`` string
used in error messages, so a malformed file reports where it went wrong
(``$.datum.roots[3]``).  Integers beyond 2**53 are written as decimal strings
so that JavaScript-style readers do not lose precision; both forms are read.
"""

from __future__ import annotations

import dataclasses
import json
import re
from typing import Any

from .central import CentralProductSpec, group_from_factors
from .classify import ClassTriple
from .morphism import PMorphism
from .rootdata import RootDatum, RootDatumError, check
from .zlattice import IntMatrix, LatticeError

_SAFE = 2**53


class SchemaError(ValueError):
    """Malformed input, with the JSON path of the offending value."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


def _int_out(x: int) -> int | str:
    return str(x) if abs(x) > _SAFE else x


def _int_in(x: Any, path: str) -> int:
    if isinstance(x, bool):
        raise SchemaError(path, "expected an integer, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            raise SchemaError(path, f"not a decimal integer: {x!r}") from None
    raise SchemaError(path, f"expected an integer, got {type(x).__name__}")


def _obj(x: Any, path: str, keys: tuple[str, ...]) -> dict:
    if not isinstance(x, dict):
        raise SchemaError(path, f"expected an object, got {type(x).__name__}")
    for k in keys:
        if k not in x:
            raise SchemaError(path, f"missing key {k!r}")
    return x


def _list(x: Any, path: str) -> list:
    if not isinstance(x, list):
        raise SchemaError(path, f"expected a list, got {type(x).__name__}")
    return x


def _vectors(x: Any, path: str, length: int | None = None) -> list[tuple[int, ...]]:
    out = []
    for i, v in enumerate(_list(x, path)):
        vec = tuple(_int_in(c, f"{path}[{i}][{j}]") for j, c in enumerate(_list(v, f"{path}[{i}]")))
        if length is not None and len(vec) != length:
            raise SchemaError(f"{path}[{i}]", f"expected length {length}, got {len(vec)}")
        out.append(vec)
    return out


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


def matrix_to_json(M: IntMatrix) -> dict:
    return {"rows": M.rows, "cols": M.cols, "data": [[_int_out(x) for x in row] for row in M.tolist()]}


def matrix_from_json(x: Any, path: str = "$") -> IntMatrix:
    obj = _obj(x, path, ("rows", "cols", "data"))
    rows = _int_in(obj["rows"], f"{path}.rows")
    cols = _int_in(obj["cols"], f"{path}.cols")
    if rows < 0 or cols < 0:
        raise SchemaError(path, "negative dimension")
    data = _vectors(obj["data"], f"{path}.data", cols)
    if len(data) != rows:
        raise SchemaError(f"{path}.data", f"expected {rows} rows, got {len(data)}")
    return IntMatrix.from_rows(data, cols)


# ---------------------------------------------------------------------------
# Root data
# ---------------------------------------------------------------------------


def datum_to_json(R: RootDatum) -> dict:
    out: dict = {
        "rank": R.rank,
        "roots": [[_int_out(c) for c in a] for a in R.roots],
        "coroots": [[_int_out(c) for c in a] for a in R.coroots],
    }
    if R.name is not None:
        out["name"] = R.name
    return out


def datum_from_json(x: Any, path: str = "$", *, validate: bool = True) -> RootDatum:
    """Parse a datum; a wrapper object with a ``datum`` key is unwrapped."""
    if isinstance(x, dict) and "datum" in x and "rank" not in x:
        return datum_from_json(x["datum"], f"{path}.datum", validate=validate)
    obj = _obj(x, path, ("rank", "roots", "coroots"))
    n = _int_in(obj["rank"], f"{path}.rank")
    if n < 0:
        raise SchemaError(f"{path}.rank", "negative rank")
    roots = _vectors(obj["roots"], f"{path}.roots", n)
    coroots = _vectors(obj["coroots"], f"{path}.coroots", n)
    if len(roots) != len(coroots):
        raise SchemaError(path, f"{len(roots)} roots but {len(coroots)} coroots")
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise SchemaError(f"{path}.name", "expected a string")
    R = RootDatum.make(n, roots, coroots, name)
    if validate:
        try:
            check(R)
        except RootDatumError as exc:
            raise SchemaError(path, str(exc)) from None
    return R


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------


def morphism_to_json(m: PMorphism) -> dict:
    return {
        "f": matrix_to_json(m.f),
        "p": m.p,
        "q": [_int_out(q) for q in m.q],
        "tau": list(m.tau),
    }


def morphism_from_json(x: Any, path: str = "$") -> PMorphism:
    obj = _obj(x, path, ("f", "p", "q", "tau"))
    f = matrix_from_json(obj["f"], f"{path}.f")
    p = _int_in(obj["p"], f"{path}.p")
    q = tuple(_int_in(v, f"{path}.q[{i}]") for i, v in enumerate(_list(obj["q"], f"{path}.q")))
    tau = tuple(_int_in(v, f"{path}.tau[{i}]") for i, v in enumerate(_list(obj["tau"], f"{path}.tau")))
    if len(q) != len(tau):
        raise SchemaError(path, "q and tau have different lengths")
    return PMorphism(f, p, q, tau)


# ---------------------------------------------------------------------------
# Triples and central-product specs
# ---------------------------------------------------------------------------


def triple_to_json(t: ClassTriple) -> dict:
    return {
        "semisimple": datum_to_json(t.semisimple),
        "torus_rank": t.torus_rank,
        "K": matrix_to_json(t.K),
    }


def triple_from_json(x: Any, path: str = "$") -> ClassTriple:
    obj = _obj(x, path, ("semisimple", "torus_rank", "K"))
    R = datum_from_json(obj["semisimple"], f"{path}.semisimple")
    r = _int_in(obj["torus_rank"], f"{path}.torus_rank")
    K = matrix_from_json(obj["K"], f"{path}.K")
    t = ClassTriple(R, r, K)
    msg = t.validate()
    if msg is not None:
        raise SchemaError(path, msg)
    return t


def cproduct_to_json(spec: CentralProductSpec) -> dict:
    return {
        "R1": datum_to_json(spec.R1),
        "R2": datum_to_json(spec.R2),
        "A": {"invariant_factors": list(spec.moduli)},
        "h1": matrix_to_json(spec.h1),
        "h2": matrix_to_json(spec.h2),
    }


def cproduct_from_json(x: Any, path: str = "$") -> CentralProductSpec:
    obj = _obj(x, path, ("R1", "R2", "A", "h1", "h2"))
    R1 = datum_from_json(obj["R1"], f"{path}.R1")
    R2 = datum_from_json(obj["R2"], f"{path}.R2")
    a = _obj(obj["A"], f"{path}.A", ("invariant_factors",))
    factors = [_int_in(v, f"{path}.A.invariant_factors[{i}]") for i, v in enumerate(_list(a["invariant_factors"], f"{path}.A.invariant_factors"))]
    try:
        A = group_from_factors(factors)
    except LatticeError as exc:
        raise SchemaError(f"{path}.A", str(exc)) from None
    h1 = matrix_from_json(obj["h1"], f"{path}.h1")
    h2 = matrix_from_json(obj["h2"], f"{path}.h2")
    spec = CentralProductSpec(R1, R2, A, h1, h2)
    msg = spec.validate()
    if msg is not None:
        raise SchemaError(path, msg)
    return spec


def to_plain(obj: Any) -> Any:
    """Recursively convert results (dataclasses, matrices, data) to JSON values.

    Dataclasses other than the core types become objects tagged with
    ``"type"``; tuples become lists.  Used for certificates and verdicts.
    """
    if isinstance(obj, IntMatrix):
        return matrix_to_json(obj)
    if isinstance(obj, RootDatum):
        return datum_to_json(obj)
    if isinstance(obj, PMorphism):
        return morphism_to_json(obj)
    if isinstance(obj, ClassTriple):
        return triple_to_json(obj)
    if isinstance(obj, CentralProductSpec):
        return cproduct_to_json(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {"type": type(obj).__name__}
        for fld in dataclasses.fields(obj):
            out[fld.name] = to_plain(getattr(obj, fld.name))
        return out
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return _int_out(obj)
    return str(obj)


# ---------------------------------------------------------------------------
# Text helpers
# ---------------------------------------------------------------------------


def loads(text: str, path: str = "$") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(path, f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None


_ITEM = r'(?:-?\d+|"[^"\\\n]*"|true|false|null)'
_FLAT = re.compile(r"\[\s*(" + _ITEM + r"(?:,\s*" + _ITEM + r")*)\s*\]")


def dumps(obj: Any) -> str:
    """Indented JSON with lists of scalars kept on one line."""
    text = json.dumps(obj, indent=2)
    return _FLAT.sub(lambda m: "[" + re.sub(r",\s+", ", ", m.group(1)) + "]", text)


__all__ = [
    "SchemaError",
    "cproduct_from_json",
    "cproduct_to_json",
    "datum_from_json",
    "datum_to_json",
    "dumps",
    "loads",
    "matrix_from_json",
    "matrix_to_json",
    "morphism_from_json",
    "morphism_to_json",
    "triple_from_json",
    "to_plain",
    "triple_to_json",
]
