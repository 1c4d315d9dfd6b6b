"""Canonical JSON forms for every persisted object, plus integrity checksums.

Rationals become [numerator, denominator] strings (arbitrary precision
survives JSON); polynomials are ascending coefficient lists; bivariate
polynomials are integer coefficient matrices indexed [degree_n][degree_c]
with a separate rational content. Serialization is canonical: sorted keys,
compact separators, arrays in a fixed order, so equal objects give
byte-identical files.
"""

from __future__ import annotations

import hashlib
import json

from .bipoly import BiPoly, RatFunc
from .holonomic import RecOp, SymSquareCert
from .poly import Poly
from .rationals import num_den, rat
from .tables import CoeffTable


def canonical_dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def checksum(payload) -> str:
    return hashlib.sha256(canonical_dumps(payload).encode("utf-8")).hexdigest()


def wrap(payload) -> dict:
    return {"checksum": checksum(payload), "payload": payload}


def unwrap(doc) -> dict | None:
    """Payload if the checksum matches, else None (treated as a cache miss)."""
    if not isinstance(doc, dict) or "payload" not in doc or "checksum" not in doc:
        return None
    if checksum(doc["payload"]) != doc["checksum"]:
        return None
    return doc["payload"]


# -- rationals and polynomials ----------------------------------------------


def rat_to_json(x) -> list[str]:
    n, d = num_den(x)
    return [str(n), str(d)]


def rat_from_json(pair):
    return rat(int(pair[0]), int(pair[1]))


def poly_to_json(p: Poly) -> list:
    return [rat_to_json(x) for x in p.coeffs]


def poly_from_json(data) -> Poly:
    return Poly([rat_from_json(pair) for pair in data])


def int_poly_to_json(p: Poly) -> list[str]:
    """Coefficient list of a polynomial known to have integer coefficients."""
    out = []
    for x in p.coeffs:
        n, d = num_den(x)
        if d != 1:
            raise ValueError("expected integer coefficients")
        out.append(str(n))
    return out


def int_poly_from_json(data) -> Poly:
    return Poly([rat(int(s)) for s in data])


def bipoly_to_json(p: BiPoly) -> list[list[str]]:
    """Integer coefficient matrix indexed [degree_n][degree_c]."""
    if p.is_zero():
        return [["0"]]
    rows = []
    for a in range(p.deg_n + 1):
        row = []
        for b in range(p.deg_c + 1):
            v = p.terms.get((a, b))
            if v is None:
                row.append("0")
            else:
                n, d = num_den(v)
                if d != 1:
                    raise ValueError("expected integer coefficients")
                row.append(str(n))
        rows.append(row)
    return rows


def bipoly_from_json(rows) -> BiPoly:
    terms = {}
    for a, row in enumerate(rows):
        for b, s in enumerate(row):
            v = int(s)
            if v:
                terms[(a, b)] = rat(v)
    return BiPoly(terms)


def ratfunc_to_json(f: RatFunc) -> dict:
    """{content, num, den} with num/den primitive integer matrices."""
    if f.is_zero():
        return {"content": ["0", "1"], "num": [["0"]], "den": [["1"]]}
    content = f.num.content()
    return {
        "content": rat_to_json(content),
        "num": bipoly_to_json(f.num * (rat(1) / content)),
        "den": bipoly_to_json(f.den),
    }


def ratfunc_from_json(data) -> RatFunc:
    content = rat_from_json(data["content"])
    if content == 0:
        return RatFunc.zero()
    num = bipoly_from_json(data["num"]) * content
    den = bipoly_from_json(data["den"])
    return RatFunc(num, den)


# -- tables, operators, certificates ----------------------------------------


def table_to_json(t: CoeffTable) -> dict:
    entries = []
    for n in range(t.max_n + 1):
        for k in range(n + 1):
            entries.append([k, n, poly_to_json(t.entry(k, n))])
    return {
        "kind": t.kind,
        "max_n": t.max_n,
        "convention": t.convention,
        "entries": entries,
    }


def table_from_json(data) -> CoeffTable:
    entries = {}
    for k, n, coeffs in data["entries"]:
        entries[(int(k), int(n))] = poly_from_json(coeffs)
    return CoeffTable(
        kind=data["kind"],
        max_n=int(data["max_n"]),
        entries=entries,
        convention=data["convention"],
    )


def recop_to_json(op: RecOp) -> dict:
    """Coefficient matrices of the jointly-primitive integer operator; the
    content is kept as an explicit field (1 after normalization)."""
    return {
        "order": op.order,
        "content": ["1", "1"],
        "coeffs": [bipoly_to_json(p) for p in op.coeffs],
    }


def recop_from_json(data) -> RecOp:
    content = rat_from_json(data.get("content", ["1", "1"]))
    coeffs = [bipoly_from_json(m) * content for m in data["coeffs"]]
    return RecOp.make(coeffs)


def square_cert_to_json(cert) -> dict:
    return {
        "sigma": rat_to_json(cert.sigma),
        "alpha": cert.alpha,
        "beta": cert.beta,
        "s": int_poly_to_json(cert.s),
    }


def sturm_summary_to_json(verdict) -> dict:
    return {
        "root_count": verdict.root_count,
        "nonnegative": bool(verdict.nonnegative),
    }


def fact2_report_to_json(report) -> dict:
    certs = []
    for n in range(report.max_n + 1):
        for k in range(n + 1):
            cert = report.certificates.get((k, n))
            if cert is not None:
                certs.append([k, n, square_cert_to_json(cert)])
    sturm = []
    for (k, n) in sorted(report.sturm_verdicts, key=lambda t: (t[1], t[0])):
        sturm.append([k, n, sturm_summary_to_json(report.sturm_verdicts[(k, n)])])
    return {
        "max_n": report.max_n,
        "convention": report.convention,
        "certificates": certs,
        "first_failure": list(report.first_failure) if report.first_failure else None,
        "a_convolution_ok": report.a_convolution_ok,
        "a_first_mismatch": list(report.a_first_mismatch)
        if report.a_first_mismatch
        else None,
        "exponent_pattern_ok": report.pattern_ok,
        "sturm_max_n": report.sturm_max_n,
        "a_sturm": sturm,
        "sturm_ok": report.sturm_ok,
        "ok": report.ok,
    }


def sym_square_to_json(cert: SymSquareCert) -> dict:
    positivity = [
        [n, bool(v["A"]), bool(v["B2"])] for n, v in sorted(cert.positivity.items())
    ]
    return {
        "a": ratfunc_to_json(cert.a),
        "b2": ratfunc_to_json(cert.b2),
        "q": ratfunc_to_json(cert.q),
        "valid_from_n": cert.valid_from_n,
        "positivity": positivity,
    }
