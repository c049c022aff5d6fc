"""JSON encoding/decoding for the CLI: matrices as row-major [re, im] pairs
(exact entries as "p/q" strings), weights as arrays of "p/q" strings, group
specs as {"family": ..., "n": ...}, connections with string-keyed coefficient
degrees.  The dz/z convention is fixed: "coeffs" maps i to A_i in
A = (sum_i A_i z^i) dz/z."""

from __future__ import annotations

import json
from fractions import Fraction

from .exactnum import QQi
from .liecore import GroupSpec, WeightVector
from .loopconn import LaurentConnection


class JSONFormatError(ValueError):
    pass


def _enc_part(x):
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return float(x)


def encode_scalar(x):
    if isinstance(x, QQi):
        return [_enc_part(x.re), _enc_part(x.im)]
    if isinstance(x, complex):
        return [x.real, x.imag]
    return [_enc_part(x), 0]


def decode_part(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, (int, float)):
        return v
    raise JSONFormatError(f"bad numeric part {v!r}")


def decode_scalar(v):
    if not (isinstance(v, list) and len(v) == 2):
        raise JSONFormatError(f"scalar must be a [re, im] pair, got {v!r}")
    re, im = decode_part(v[0]), decode_part(v[1])
    if all(isinstance(p, (int, Fraction)) for p in (re, im)):
        return QQi(re, im) if im else Fraction(re)
    return complex(re, im) if im else float(re)


def encode_matrix(m):
    return [[encode_scalar(x) for x in row] for row in m]


def decode_matrix(rows):
    if not isinstance(rows, list) or not rows:
        raise JSONFormatError("matrix must be a non-empty list of rows")
    return [[decode_scalar(v) for v in row] for row in rows]


def encode_weight(w: WeightVector):
    return [_enc_part(x) for x in w.entries]


def decode_weight(v) -> WeightVector:
    if not isinstance(v, list):
        raise JSONFormatError("weight must be a list of rationals")
    return WeightVector(tuple(Fraction(str(x)) for x in v))


def encode_group(spec: GroupSpec):
    return {"family": spec.family, "n": spec.n}


def decode_group(obj) -> GroupSpec:
    try:
        return GroupSpec(obj["family"], int(obj["n"]))
    except (KeyError, TypeError) as exc:
        raise JSONFormatError(f"bad group spec {obj!r}") from exc


def encode_connection(conn: LaurentConnection):
    return {
        "group": encode_group(conn.spec),
        "coeffs": {str(i): encode_matrix(m) for i, m in sorted(conn.coeffs.items())},
        "truncation": conn.truncation,
        "convention": "dz_over_z",
    }


def decode_connection(obj) -> LaurentConnection:
    try:
        spec = decode_group(obj["group"])
        coeffs = {int(k): decode_matrix(v) for k, v in obj["coeffs"].items()}
        trunc = int(obj["truncation"])
    except (KeyError, TypeError, ValueError) as exc:
        raise JSONFormatError(f"malformed connection JSON: {exc}") from exc
    return LaurentConnection(coeffs, trunc, spec)


def dumps(obj) -> str:
    """Canonical single-line report serialization (stable field order as
    inserted; no timestamps)."""
    return json.dumps(obj, separators=(", ", ": "))


def load_file(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise JSONFormatError(f"cannot parse {path}: {exc}") from exc
