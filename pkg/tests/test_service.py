import json

import pytest
from fastapi.testclient import TestClient

from frontallab.service.app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_healthz(client):
    r = client.get("/healthz")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"


def test_examples_listing(client):
    r = client.get("/examples")
    assert r.status_code == 200
    names = [e["name"] for e in r.json()["examples"]]
    assert "paper-52" in names and "helicoid" in names
    assert len(names) == 9


def test_analyze_example(client):
    r = client.post(
        "/analyze",
        json={"surface": {"example": "paper-52"}, "at_u": 0.0},
    )
    assert r.status_code == 200
    body = r.json()
    inv = body["report"]["invariants"]
    assert abs(inv["kappa_s"] - 2.0) < 1e-10
    assert abs(inv["r_c"] - 72.0) < 1e-8
    assert body["report"]["front_class"]["tag"] == "PureFrontal"
    assert body["report"]["focal"]["j1"]["verdict"] == "Regular"
    assert body["config"]["surface"]["example"] == "paper-52"


def test_analyze_definition_text(client):
    definition = (
        'name = "inline"\n'
        'x = "u"\n'
        'y = "v^2"\n'
        'z = "v^5"\n'
        'transverse_param = "v"\n'
        "singular_value = 0.0\n"
    )
    r = client.post("/analyze", json={"surface": {"definition": definition}})
    assert r.status_code == 200
    assert r.json()["report"]["front_class"]["tag"] == "PureFrontal"


def test_analyze_reports_sectional_numerical_errors(client):
    r = client.post("/analyze", json={"surface": {"example": "cuspidal-edge"}})
    assert r.status_code == 200
    body = r.json()
    assert body["report"]["front_class"]["tag"] == "Front"
    assert "invariants" in body["report"]["errors"]
    assert body["report"]["errors"]["invariants"]["kind"] == "DeflationError"


def test_analyze_unknown_example_400(client):
    r = client.post("/analyze", json={"surface": {"example": "nope"}})
    assert r.status_code == 400
    assert r.json()["detail"]["kind"] == "UnknownExampleError"


def test_analyze_bad_tolerance_400(client):
    r = client.post(
        "/analyze",
        json={"surface": {"example": "paper-52"}, "tolerance_overrides": {"bogus": 1.0}},
    )
    assert r.status_code == 400


def test_analyze_surface_spec_validation(client):
    r = client.post("/analyze", json={"surface": {}})
    assert r.status_code == 422  # pydantic validation


def test_mesh_endpoint_and_numerical_422(client):
    r = client.post(
        "/mesh",
        json={"surface": {"example": "paper-52"}, "kind": "f", "nu": 9, "nv": 9},
    )
    assert r.status_code == 200
    body = r.json()
    assert body["vertex_count"] >= 81
    assert body["obj_text"].startswith("o paper-52-f")

    # focal mesh of a front: the transverse normal quotient fails -> 422
    r = client.post(
        "/mesh",
        json={"surface": {"example": "cuspidal-edge"}, "kind": "c1", "nu": 5, "nv": 5},
    )
    assert r.status_code == 422
    assert r.json()["detail"]["kind"] == "DeflationError"


def test_verify_endpoint(client):
    r = client.post("/verify", json={"suite": "jets"})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    assert body["n_failed"] == 0
    assert all(set(row) >= {"id", "computed", "expected", "tolerance", "passed"} for row in body["rows"])


def test_verify_unknown_suite_400(client):
    r = client.post("/verify", json={"suite": "bogus"})
    assert r.status_code == 400


def test_analyze_schema_stable(client):
    payload = {"surface": {"example": "52-germ"}, "at_u": 0.1, "profile_samples": 5}
    a = client.post("/analyze", json=payload).json()
    b = client.post("/analyze", json=payload).json()
    a.pop("generated_at")
    b.pop("generated_at")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
