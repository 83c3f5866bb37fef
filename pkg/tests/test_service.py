"""Tests for the HTTP service layer."""

import pytest
from fastapi.testclient import TestClient

from foxknot import codec, coloring
from foxknot.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


@pytest.fixture(scope="module")
def corpus():
    return codec.builtin_corpus()


def test_color_trefoil_mod3(client, corpus):
    resp = client.post("/color", json={"pd": corpus["trefoil"].pd, "p": 3})
    assert resp.status_code == 200
    out = resp.json()
    assert out["count"] == 9
    assert out["dimension"] == 2
    assert out["nontrivial"] is True
    assert len(set(out["sample"])) > 1


def test_color_trefoil_mod5_only_trivial(client, corpus):
    out = client.post("/color",
                      json={"pd": corpus["trefoil"].pd, "p": 5}).json()
    assert out["count"] == 5
    assert out["nontrivial"] is False
    assert out["sample"] is None


def test_color_rejects_malformed_pd(client):
    resp = client.post("/color", json={"pd": "X(1,2,3)", "p": 3})
    assert resp.status_code == 400
    assert resp.json()["error"]["kind"] == "invalid-input"


def test_verify_valid_diagram(client, corpus):
    resp = client.post("/verify", json={"pd": corpus["figure_eight"].pd})
    assert resp.status_code == 200
    out = resp.json()
    assert out["valid"] and out["euler_characteristic"] == 2
    assert out["crossings"] == 4 and out["arcs"] == 4
    assert out["coloring_checked"] is False


def test_verify_checks_coloring(client, corpus):
    pd = corpus["trefoil"].pd
    ok = client.post("/verify", json={"pd": pd, "p": 3, "colors": [0, 1, 2]})
    assert ok.status_code == 200 and ok.json()["coloring_checked"]
    bad = client.post("/verify", json={"pd": pd, "p": 3, "colors": [0, 1, 1]})
    assert bad.status_code == 400
    assert bad.json()["error"]["kind"] == "invalid-input"


def test_verify_rejects_wrong_color_count(client, corpus):
    resp = client.post("/verify", json={"pd": corpus["trefoil"].pd,
                                        "p": 3, "colors": [0, 1]})
    assert resp.status_code == 400


def test_tables_endpoint(client):
    out = client.get("/tables").json()
    assert out["schedule"] == [16, 15, 9, 10, 6, 7, 5, 1, 11, 14, 13]
    assert out["target_palette"] == [0, 2, 3, 4, 8, 12]
    assert out["minimum_palette_bound"] == {
        "3": 3, "5": 4, "7": 4, "11": 5, "13": 5, "17": 6}
    rows = out["special_cases"]["single_a_6"]
    assert {"step": 2, "colors": [15, 16], "value": 4} in rows
    rows = out["special_cases"]["pair_6_12"]
    assert {"step": 2, "colors": [15, 16], "value": [4, 10]} in rows


def test_invariants_endpoint(client, corpus):
    out = client.post("/invariants", json={"pd": corpus["7_5"].pd}).json()
    assert out["determinant"] == 17
    assert out["colorable"]["17"] is True
    assert out["colorable"]["3"] is False
    assert out["coloring_counts"]["17"] == 17 * 17


@pytest.fixture(scope="module")
def reduced_t217(client, corpus):
    resp = client.post("/reduce", json={"pd": corpus["T(2,17)"].pd})
    assert resp.status_code == 200
    return resp.json()


def test_reduce_reaches_target_palette(reduced_t217):
    assert reduced_t217["report"]["final_palette"] == [0, 2, 3, 4, 8, 12]


def test_replay_roundtrip(client, corpus, reduced_t217):
    replayed = client.post("/replay", json={
        "initial": {"pd": corpus["T(2,17)"].pd, "p": 17,
                    "colors": reduced_t217["input_colors"]},
        "trace": reduced_t217["trace"]})
    assert replayed.status_code == 200
    assert (replayed.json()["final_checksum"]
            == reduced_t217["report"]["final_checksum"])


def test_reduce_rejects_uncolorable(client, corpus):
    resp = client.post("/reduce", json={"pd": corpus["trefoil"].pd})
    assert resp.status_code == 400
    assert resp.json()["error"]["kind"] == "invalid-input"


def test_replay_rejects_checksum_mismatch(client, corpus, reduced_t217):
    # an affine shift of the input is still a valid coloring, but its
    # checksum no longer matches the trace
    wrong = [((x + 1) % 17) for x in reduced_t217["input_colors"]]
    resp = client.post("/replay", json={
        "initial": {"pd": corpus["T(2,17)"].pd, "p": 17, "colors": wrong},
        "trace": reduced_t217["trace"]})
    assert resp.status_code == 422
    assert resp.json()["error"]["kind"] == "verification-failure"
