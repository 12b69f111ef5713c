"""HTTP service: session workflow, error mapping, replay determinism."""

import json

import pytest
from fastapi.testclient import TestClient
from pytest import approx

from cellca.service import create_app
from conftest import DATA_DIR

CAR_CSV = (DATA_DIR / "car.csv").read_text(encoding="utf-8")
OCEAN_CSV = (DATA_DIR / "ocean_plastic.csv").read_text(encoding="utf-8")


@pytest.fixture()
def client():
    with TestClient(create_app()) as client:
        yield client


def open_session(client, csv_text=CAR_CSV):
    resp = client.post("/session", content=csv_text,
                       headers={"content-type": "text/csv"})
    assert resp.status_code == 200
    return resp.json()


def test_session_lifecycle(client):
    body = open_session(client)
    sid = body["session_id"]
    assert sid == "s1"
    sol = body["solution"]
    assert sol["sigma"][0] == approx(0.335, abs=2e-3)
    assert sol["diagnostics"]["cells"][0]["row"] == "Volvo"

    resp = client.get(f"/session/{sid}/solution")
    assert resp.status_code == 200
    assert resp.json() == sol

    resp = client.delete(f"/session/{sid}")
    assert resp.status_code == 204
    assert client.get(f"/session/{sid}/solution").status_code == 404


def test_flag_and_rerun_workflow(client):
    sid = open_session(client)["session_id"]
    resp = client.post(f"/session/{sid}/cells",
                       json={"add": [{"row": "Volvo", "col": "Safety"}]})
    assert resp.status_code == 200
    assert resp.json() == {"cells": [{"row": "Volvo", "col": "Safety"}]}

    resp = client.post(f"/session/{sid}/reconstitute", json={"order": 2})
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["reconstitution"]["cells"][0]["value"] == approx(27.0, abs=0.5)
    assert doc["inertia_proportions"][1] == approx(15.8, abs=0.2)
    # the session's current solution is now the adjusted one
    assert client.get(f"/session/{sid}/solution").json() == doc

    # removing the flag and rerunning restores the plain fit
    client.post(f"/session/{sid}/cells",
                json={"remove": [{"row": "Volvo", "col": "Safety"}]})
    resp = client.post(f"/session/{sid}/reconstitute", json={"order": 2})
    assert resp.json()["sigma"][0] == approx(0.335, abs=2e-3)
    assert "reconstitution" not in resp.json()


def test_empty_cellset_reconstitute_matches_fit(client):
    body = open_session(client)
    sid = body["session_id"]
    resp = client.post(f"/session/{sid}/reconstitute", json={"order": 2})
    assert resp.json() == body["solution"]


def test_supplementary_endpoint(client):
    sid = open_session(client)["session_id"]
    resp = client.post(f"/session/{sid}/supplementary",
                       json={"sup_rows": ["Volvo"], "sup_cols": ["Safety"]})
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["sigma"][0] == approx(0.350, abs=2e-3)
    assert doc["supplementary"]["sup_cols"] == ["Safety"]


def test_negative_imputation_maps_to_422(client):
    sid = open_session(client, OCEAN_CSV)["session_id"]
    client.post(f"/session/{sid}/cells",
                json={"add": [{"row": "17", "col": "Resp.C.I"},
                              {"row": "59", "col": "Resp.C.I"}]})
    resp = client.post(f"/session/{sid}/reconstitute",
                       json={"order": 2, "negative_policy": "error"})
    assert resp.status_code == 422
    payload = resp.json()
    assert payload["error"] == "NegativeImputation"
    assert payload["value"] == approx(-0.0006, abs=5e-4)


def test_error_mapping(client):
    assert client.get("/session/nope/solution").status_code == 404
    resp = client.post("/session", content="not,a\nvalid table",
                       headers={"content-type": "text/csv"})
    assert resp.status_code == 400
    assert resp.json()["error"] == "ParseError"

    sid = open_session(client)["session_id"]
    resp = client.post(f"/session/{sid}/cells",
                       json={"add": [{"row": "Batmobile", "col": "Safety"}]})
    assert resp.status_code == 400
    assert resp.json()["error"] == "UnknownLabel"

    resp = client.post(f"/session/{sid}/cells", json={"add": "nonsense"})
    assert resp.status_code == 400
    assert resp.json()["error"] == "ParseError"


def test_replay_reproduces_bodies_bytewise():
    log = [
        ("POST", "/session", CAR_CSV),
        ("POST", "/session/s1/cells",
         json.dumps({"add": [{"row": "Volvo", "col": "Safety"}]})),
        ("POST", "/session/s1/reconstitute", json.dumps({"order": 2})),
        ("GET", "/session/s1/solution", None),
        ("POST", "/session/s1/supplementary",
         json.dumps({"sup_rows": ["Volvo"], "sup_cols": ["Safety"]})),
    ]

    def play():
        bodies = []
        with TestClient(create_app()) as client:
            for method, path, payload in log:
                if method == "GET":
                    resp = client.get(path)
                else:
                    headers = {"content-type":
                               "application/json" if path != "/session" else "text/csv"}
                    resp = client.post(path, content=payload, headers=headers)
                assert resp.status_code == 200
                bodies.append(resp.content)
        return bodies

    assert play() == play()
