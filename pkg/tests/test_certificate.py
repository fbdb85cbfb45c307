import json

import numpy as np
import pytest

from geometry.construct import canonical_4q4, conic, vertexless_triangle
from geometry.errors import CertificateError
from geometry.resolve import MixedSet
from helpers import certificate


def test_dumps_is_canonical(pg3):
    cert = certificate.build("search_result", pg3.field, {"points": [5, 1, 3], "b": 1, "a": {2, 0}})
    text = certificate.dumps(cert)
    assert " " not in text
    assert text.startswith('{"field":')
    data = json.loads(text)
    assert data["payload"] == {"a": [0, 2], "b": 1, "points": [1, 3, 5]}
    assert data["schema_version"] == 1
    assert data["provenance"] == {"generator": "external"}
    assert certificate.dumps(json.loads(text)) == text


def test_numpy_values_are_plain(pg3):
    cert = certificate.build("plane_info", pg3.field, {"n": np.int64(13), "ok": np.bool_(True),
                                                       "rows": np.array([2, 1])})
    assert cert["payload"] == {"n": 13, "ok": True, "rows": [2, 1]}


def test_floats_are_rejected(pg3):
    with pytest.raises(CertificateError):
        certificate.build("plane_info", pg3.field, {"ratio": 0.5})


def test_unknown_kind(pg3):
    with pytest.raises(CertificateError):
        certificate.build("poem", pg3.field, {})


def test_construction_round_trip(pg4, tmp_path):
    c = canonical_4q4(pg4)
    cert = certificate.from_construction(c, pg4)
    assert cert["provenance"]["generator"] == "canonical"
    path = certificate.dump(cert, tmp_path / "out" / "canonical.json")
    loaded = certificate.load(path)
    assert loaded == cert
    assert certificate.set_from(loaded) == MixedSet(c.points, c.lines)
    assert certificate.plane_from(loaded).q == 4
    assert certificate.reverify(loaded).ok


def test_load_reverifies_a_verified_payload(pg3, tmp_path):
    cert = json.loads(certificate.dumps(certificate.from_construction(canonical_4q4(pg3), pg3)))
    assert cert["payload"]["verified"] is True
    cert["payload"]["points"] = cert["payload"]["points"][1:]
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(cert))
    with pytest.raises(CertificateError, match="claims a verified resolving set"):
        certificate.load(path)

    cert["payload"]["verified"] = False
    path.write_text(json.dumps(cert))
    loaded = certificate.load(path)
    assert not certificate.reverify(loaded).ok


def test_reverify_against_another_kind(pg4):
    cert = certificate.from_construction(vertexless_triangle(pg4), pg4)
    assert certificate.reverify(cert).ok
    assert certificate.reverify(cert, "split").ok is False
    with pytest.raises(CertificateError):
        certificate.reverify(cert, "plane_info")


def test_semioval_certificates(plane):
    pg = plane(5)
    oval = certificate.from_set("semioval", MixedSet(conic(pg)), pg, verified=True)
    report = certificate.reverify(oval)
    assert report.ok and report.stats["is_semioval"]
    line = certificate.from_set("semioval", MixedSet(pg.points_on[0].tolist()), pg, verified=False)
    report = certificate.reverify(line)
    assert not report.ok
    assert report.kinds() == {"NotASemioval"}


@pytest.mark.parametrize("text", [
    "not json",
    "[1, 2]",
    '{"schema_version": 1, "kind": "resolving", "field": {"p": 3, "h": 1}}',
    '{"schema_version": 2, "kind": "resolving", "field": {"p": 3, "h": 1}, "payload": {}}',
    '{"schema_version": 1, "kind": "poem", "field": {"p": 3, "h": 1}, "payload": {}}',
    '{"schema_version": 1, "kind": "resolving", "field": {"p": 6, "h": 1}, "payload": {}}',
    '{"schema_version": 1, "kind": "resolving", "field": {"p": 3}, "payload": {}}',
    '{"schema_version": 1, "kind": "resolving", "field": {"p": 3, "h": 1}, "payload": []}',
    '{"schema_version": 1, "kind": "resolving", "field": {"p": 3, "h": 1}, "payload": {"points": [13]}}',
    '{"schema_version": 1, "kind": "resolving", "field": {"p": 3, "h": 1}, "payload": {"points": [1, 1]}}',
    '{"schema_version": 1, "kind": "resolving", "field": {"p": 3, "h": 1}, "payload": {"lines": ["a"]}}',
])
def test_malformed_certificates(text):
    with pytest.raises(CertificateError):
        certificate.loads(text)


def test_missing_file(tmp_path):
    with pytest.raises(CertificateError):
        certificate.load(tmp_path / "absent.json")
