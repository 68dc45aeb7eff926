"""JSON encodings for matrices, antilinear maps, certificates and decompositions.

A matrix is ``{"n": n, "entries": [[[re, im], ...], ...]}``, row-major.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .antilinear import Anticonjugation, Conjugation
from .errors import InvalidConjugation, InvalidMatrix, InvalidSpec
from .gallery import GeneratorSpec
from .intertwiner import UetCertificate, certificate_residual, symmetry_class


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "n": int(m.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def _number(x) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InvalidMatrix(f"matrix entries must be numbers, got {x!r}")
    if not math.isfinite(x):
        raise InvalidMatrix("matrix entries must be finite")
    return float(x)


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "entries" not in obj:
        raise InvalidMatrix("matrix JSON needs an 'entries' field")
    rows = obj["entries"]
    if not isinstance(rows, list) or not rows:
        raise InvalidMatrix("'entries' must be a non-empty list of rows")
    n = obj.get("n", len(rows))
    if not isinstance(n, int) or isinstance(n, bool) or n != len(rows):
        raise InvalidMatrix(f"'n' = {n!r} does not match {len(rows)} rows")
    out = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise InvalidMatrix(f"row {i} does not have {n} entries; matrix must be square")
        for j, z in enumerate(row):
            if not isinstance(z, list) or len(z) != 2:
                raise InvalidMatrix(f"entry ({i}, {j}) must be a [re, im] pair")
            out[i, j] = complex(_number(z[0]), _number(z[1]))
    return out


def antilinear_to_json(op) -> dict:
    if isinstance(op, Conjugation):
        return {"kind": "conjugation", "factor": matrix_to_json(op.u)}
    if isinstance(op, Anticonjugation):
        return {"kind": "anticonjugation", "factor": matrix_to_json(op.s)}
    raise TypeError(f"not an antilinear map: {type(op).__name__}")


def antilinear_from_json(obj):
    if not isinstance(obj, dict) or obj.get("kind") not in ("conjugation", "anticonjugation"):
        raise InvalidConjugation("kind must be 'conjugation' or 'anticonjugation'")
    factor = matrix_from_json(obj.get("factor"))
    return Conjugation(factor) if obj["kind"] == "conjugation" else Anticonjugation(factor)


def certificate_to_json(cert: UetCertificate) -> dict:
    return {
        "kind": cert.kind,
        "witness": matrix_to_json(cert.u),
        "residual": float(cert.residual),
        "alpha": cert.alpha,
        "evidence": cert.evidence,
    }


def certificate_from_json(obj, t=None) -> UetCertificate:
    """Parse a certificate.  The stored residual is informational; pass ``t`` to recompute it."""
    if not isinstance(obj, dict):
        raise InvalidMatrix("certificate JSON must be an object")
    kind = obj.get("kind")
    if kind not in ("uet", "uecsm", "ueasm"):
        raise InvalidMatrix(f"certificate kind {kind!r} is not uet, uecsm or ueasm")
    alpha = obj.get("alpha")
    if alpha not in (1, -1, None):
        raise InvalidMatrix("alpha must be 1, -1 or null")
    u = matrix_from_json(obj.get("witness"))
    residual = obj.get("residual", float("nan"))
    if t is not None:
        residual = certificate_residual(np.asarray(t, dtype=complex), u)
    return UetCertificate(u, float(residual), symmetry_class(u), alpha, kind, str(obj.get("evidence", "")))


def summand_to_json(s) -> dict:
    cert = certificate_to_json(s.certificate)
    if s.factor is not None:
        cert["factor"] = matrix_to_json(s.factor)
        cert["provisional"] = bool(s.provisional)
    return {"kind": s.kind, "size": s.size, "matrix": matrix_to_json(s.matrix), "certificate": cert}


def decomposition_to_json(dec) -> dict:
    return {
        "global_w": matrix_to_json(dec.global_w),
        "summands": [summand_to_json(s) for s in dec.summands],
    }


def spec_to_json(spec: GeneratorSpec) -> dict:
    out = {"kind": spec.kind, "seed": spec.seed}
    if spec.d is not None:
        out["d"] = spec.d
    if spec.n is not None:
        out["n"] = spec.n
    if spec.operands:
        out["operands"] = [spec_to_json(op) for op in spec.operands]
    return out


def spec_from_json(obj) -> GeneratorSpec:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InvalidSpec("generator spec needs a 'kind'")
    unknown = set(obj) - {"kind", "d", "n", "seed", "operands"}
    if unknown:
        raise InvalidSpec(f"unknown generator fields: {sorted(unknown)}")
    return GeneratorSpec(
        kind=obj["kind"],
        d=obj.get("d"),
        n=obj.get("n"),
        seed=obj.get("seed", 0),
        operands=tuple(spec_from_json(op) for op in obj.get("operands", ())),
    )


def dumps(obj) -> str:
    """Deterministic serialization used for every file and report."""
    return json.dumps(obj, sort_keys=True, indent=2)


def load_file(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
