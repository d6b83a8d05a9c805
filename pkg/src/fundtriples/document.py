"""JSON documents for triples and reports.

Rational entries are written as ``"p/q"`` strings so nothing is lost to
floating point; complex entries are numbers or ``[re, im]`` pairs.  Documents
produced by :func:`dumps` parse back and re-serialize to identical bytes.
"""
from __future__ import annotations

import json
import numbers
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import smallalg as sa
from .camera import AFFINE, PROJECTIVE, CameraTriple, FundamentalTriple
from .errors import DocumentError

NAMES = ("F12", "F13", "F23")


# ------------------------------------------------------------------ scalars

def scalar_to_json(x):
    if isinstance(x, (Fraction, int, np.integer)) and not isinstance(x, bool):
        return str(Fraction(x))
    z = complex(x)
    return z.real if z.imag == 0 else [z.real, z.imag]


def scalar_from_json(v, field_name: str):
    if isinstance(v, bool):
        raise DocumentError("booleans are not matrix entries")
    if field_name == sa.RATIONAL:
        if isinstance(v, str):
            try:
                return Fraction(v.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise DocumentError(f"bad rational {v!r}") from exc
        if isinstance(v, int):
            return Fraction(v)
        raise DocumentError(f"rational documents need string entries, got {v!r}")
    if isinstance(v, list):
        if len(v) != 2 or not all(isinstance(p, numbers.Real) and not isinstance(p, bool)
                                  for p in v):
            raise DocumentError(f"complex entries are [re, im], got {v!r}")
        return complex(v[0], v[1])
    if isinstance(v, numbers.Real):
        return complex(v)
    if isinstance(v, str):
        try:
            return complex(float(Fraction(v.strip())))
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"bad number {v!r}") from exc
    raise DocumentError(f"unsupported entry {v!r}")


def matrix_to_json(M) -> list:
    return [[scalar_to_json(x) for x in row] for row in np.asarray(M)]


def matrix_from_json(rows, field_name: str, shape=(3, 3), name: str = "matrix") -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != shape[0]:
        raise DocumentError(f"{name} must have {shape[0]} rows")
    out = []
    for row in rows:
        if not isinstance(row, list) or len(row) != shape[1]:
            raise DocumentError(f"{name} rows must have {shape[1]} entries")
        out.append([scalar_from_json(v, field_name) for v in row])
    if field_name == sa.RATIONAL:
        return np.array(out, dtype=object)
    return np.array(out, dtype=complex)


def vector_to_json(v) -> list:
    return [scalar_to_json(x) for x in np.asarray(v).ravel()]


def _infer_field(d: dict) -> str:
    for name in NAMES:
        for row in d.get(name, []):
            for v in row if isinstance(row, list) else []:
                if isinstance(v, (float, list)):
                    return sa.COMPLEX
    return sa.RATIONAL


# ---------------------------------------------------------------- documents

@dataclass
class TripleDocument:
    triple: FundamentalTriple
    cameras: CameraTriple | None = None
    meta: dict = field(default_factory=dict)

    @property
    def field(self) -> str:
        return self.triple.field

    def to_dict(self) -> dict:
        d = {"field": self.field, "scale": self.triple.scale}
        for name, M in zip(NAMES, self.triple.matrices):
            d[name] = matrix_to_json(M)
        if self.cameras is not None:
            ct = self.cameras
            d["cameras"] = {
                "prior": ct.prior,
                "K": [matrix_to_json(k.K) for k in ct.K],
                "R": [matrix_to_json(r.R) for r in ct.R],
                "c": [vector_to_json(c) for c in ct.c],
            }
        if self.meta:
            d["meta"] = self.meta
        return d

    @classmethod
    def from_dict(cls, d) -> "TripleDocument":
        if not isinstance(d, dict):
            raise DocumentError("a triple document is a JSON object")
        missing = [n for n in NAMES if n not in d]
        if missing:
            raise DocumentError(f"missing matrices: {missing}")
        fld = d.get("field", _infer_field(d))
        if fld not in sa.FIELDS:
            raise DocumentError(f"unknown field {fld!r}")
        scale = d.get("scale", PROJECTIVE)
        if scale not in (AFFINE, PROJECTIVE):
            raise DocumentError(f"unknown scale tag {scale!r}")
        mats = [matrix_from_json(d[n], fld, name=n) for n in NAMES]
        cameras = None
        if "cameras" in d:
            cameras = _cameras_from_json(d["cameras"], fld)
        meta = d.get("meta", {})
        if not isinstance(meta, dict):
            raise DocumentError("meta must be an object")
        return cls(FundamentalTriple(*mats, scale=scale), cameras, meta)


def _cameras_from_json(c: dict, fld: str) -> CameraTriple:
    try:
        K = [matrix_from_json(k, fld, name="K") for k in c["K"]]
        R = [matrix_from_json(r, fld, name="R") for r in c["R"]]
        centers = [matrix_from_json([v], fld, shape=(1, 3), name="c")[0] for v in c["c"]]
        return CameraTriple(tuple(K), tuple(R), tuple(centers), c.get("prior", "F"))
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed camera block: {exc}") from exc
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


def _compact(obj, indent: int = 0) -> str:
    """JSON with objects indented and numeric arrays kept on one line."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(k)}: {_compact(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, list) and any(isinstance(x, dict) for x in obj):
        items = [f"{pad}  {_compact(x, indent + 1)}" for x in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    return json.dumps(obj)


def dumps(doc) -> str:
    d = doc.to_dict() if hasattr(doc, "to_dict") else doc
    return _compact(d) + "\n"


def loads(text: str) -> TripleDocument:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return TripleDocument.from_dict(d)


def load(path) -> TripleDocument:
    try:
        with open(path) as fh:
            return loads(fh.read())
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc


def dump(doc, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(doc))


# ------------------------------------------------------------------ reports

def constraint_report_to_dict(report, verdict=None) -> dict:
    fams = {}
    for fam, r in report.residuals.items():
        fams[fam.name] = {
            "count": fam.count,
            "nonzero": report.nonzero_count(fam),
            "nonzero_indices": report.nonzero_indices(fam),
            "max_abs": report.max_abs(fam),
            "vanishes": report.vanishes(fam),
        }
    out = {"exact": report.exact, "tol": report.tol, "families": fams}
    if verdict is not None:
        out = {"verdict": verdict.value, **out}
    return out


__all__ = ["TripleDocument", "dumps", "loads", "load", "dump", "scalar_to_json",
           "scalar_from_json", "matrix_to_json", "matrix_from_json", "vector_to_json",
           "constraint_report_to_dict"]
