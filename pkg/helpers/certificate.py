"""
Canonical JSON certificates.

A certificate is a JSON object with the keys below. The plane is never stored:
it is rebuilt from the field descriptor, so indices keep their canonical meaning.

| Key | Content |
| --- | --- |
| `schema_version` | always 1 |
| `kind` | one of `CERTIFICATE_KINDS` |
| `field` | `{p, h, modulus}` |
| `payload` | index arrays and reports |
| `provenance` | `{generator, params}` or `{generator: "external"}` |

Serialisation sorts keys and every index array, uses compact separators and
rejects floats, so identical inputs give byte-identical output.
"""

import json
from pathlib import Path

import numpy as np

from clilog import log, VERBOSITY_DEBUG, VERBOSITY_TRACE
from geometry.construct import Construction, verify_kind
from geometry.errors import CertificateError, GeometryError
from geometry.galois import Field, field_from_descriptor
from geometry.plane import Plane, build_plane
from geometry.resolve import MixedSet, VerifyReport, Violation, semioval_check

SCHEMA_VERSION = 1

SET_KINDS = ("resolving", "semi_resolving", "split", "double_blocking", "semioval")
CERTIFICATE_KINDS = SET_KINDS + (
    "plane_info",
    "search_result",
    "no_smaller",
    "redei_profile",
    "szw_trials",
    "index_bounds",
    "verify_report",
)

_INDEX_KEYS = ("points", "lines")


def _canonical(value, path="$"):
    """Plain JSON types only; sets become sorted lists."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, float):
        raise CertificateError(f"float at {path} is not allowed in a certificate")
    if isinstance(value, np.ndarray):
        return _canonical(value.tolist(), path)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, dict):
        out = {}
        for k, v in value.items():
            v = _canonical(v, f"{path}.{k}")
            if k in _INDEX_KEYS and isinstance(v, list):
                v = sorted(v)
            out[str(k)] = v
        return out
    if isinstance(value, (set, frozenset)):
        return sorted(_canonical(v, path) for v in value)
    if isinstance(value, (list, tuple)):
        return [_canonical(v, f"{path}[{i}]") for i, v in enumerate(value)]
    if hasattr(value, "tolist"):
        return _canonical(value.tolist(), path)
    if hasattr(value, "to_dict"):
        return _canonical(value.to_dict(), path)
    raise CertificateError(f"value of type {type(value).__name__} at {path} is not serialisable")


def build(kind: str, field: Field, payload: dict, generator: str = "external", params: dict = None) -> dict:
    if kind not in CERTIFICATE_KINDS:
        raise CertificateError(f"unknown certificate kind {kind!r}")
    provenance = {"generator": generator}
    if params is not None:
        provenance["params"] = params
    return _canonical({
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "field": field.descriptor(),
        "payload": payload,
        "provenance": provenance,
    })


def from_construction(construction: Construction, plane: Plane) -> dict:
    payload = {
        "points": construction.sorted_points(),
        "lines": construction.sorted_lines(),
        "size": len(construction),
        "verified": construction.verified,
    }
    return build(construction.kind, plane.field, payload, construction.name, construction.params)


def from_set(kind: str, S: MixedSet, plane: Plane, verified: bool, generator: str = "external", params=None) -> dict:
    payload = {"points": S.sorted_points(), "lines": S.sorted_lines(), "size": len(S), "verified": verified}
    return build(kind, plane.field, payload, generator, params)


def dumps(certificate: dict) -> str:
    return json.dumps(_canonical(certificate), sort_keys=True, separators=(",", ":"))


def dump(certificate: dict, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(certificate) + "\n")
    log(f"[certificate.py.dump] Wrote {certificate.get('kind')} certificate to {path.resolve()}", VERBOSITY_DEBUG)
    return path


def _check_indices(values, n: int, where: str):
    if not isinstance(values, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise CertificateError(f"{where} must be a list of integers")
    bad = [v for v in values if not 0 <= v < n]
    if bad:
        raise CertificateError(f"{where} has indices outside 0..{n - 1}: {bad[:5]}")
    if len(set(values)) != len(values):
        raise CertificateError(f"{where} has repeated indices")


def loads(text: str) -> dict:
    """
    Parse and validate the envelope. Set payloads are checked against the plane
    size, and a payload marked verified is verified again.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CertificateError("certificate must be a JSON object")
    missing = [k for k in ("schema_version", "kind", "field", "payload") if k not in data]
    if missing:
        raise CertificateError(f"certificate is missing {', '.join(missing)}")
    if not isinstance(data["payload"], dict):
        raise CertificateError("payload must be a JSON object")
    if data["schema_version"] != SCHEMA_VERSION:
        raise CertificateError(f"unsupported schema_version {data['schema_version']}")
    if data["kind"] not in CERTIFICATE_KINDS:
        raise CertificateError(f"unknown certificate kind {data['kind']!r}")
    plane = plane_from(data)
    if data["kind"] in SET_KINDS:
        for key in _INDEX_KEYS:
            _check_indices(data["payload"].get(key, []), plane.n, f"payload.{key}")
        if data["payload"].get("verified") is True:
            report = reverify(data)
            if not report.ok:
                raise CertificateError(
                    f"payload claims a verified {data['kind']} set but fails: {sorted(report.kinds())}")
    log(f"[certificate.py.loads] {data['kind']} certificate over GF({plane.q})", VERBOSITY_TRACE)
    return data


def load(path) -> dict:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise CertificateError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def plane_from(certificate: dict) -> Plane:
    try:
        field = field_from_descriptor(certificate["field"])
    except (KeyError, TypeError, ValueError, GeometryError) as exc:
        raise CertificateError(f"bad field descriptor {certificate.get('field')!r}") from exc
    return build_plane(field)


def set_from(certificate: dict) -> MixedSet:
    payload = certificate["payload"]
    return MixedSet(payload.get("points", []), payload.get("lines", []))


def reverify(certificate: dict, kind: str = None) -> VerifyReport:
    """Runs the verifier for `kind` (default: the certificate's own kind) on the stored set."""
    kind = kind or certificate["kind"]
    plane = plane_from(certificate)
    S = set_from(certificate)
    if kind == "semioval":
        report = semioval_check(S.points, plane)
        violations = [] if report.is_semioval else [Violation("NotASemioval", ())]
        return VerifyReport.from_violations(violations, **report.to_dict())
    if kind not in SET_KINDS:
        raise CertificateError(f"certificate kind {kind!r} carries no set to verify")
    return verify_kind(kind, S, plane)
