import pytest
from fastapi.testclient import TestClient

from app.main import app
from app.schemas.documents import EmbeddingDocument


@pytest.fixture
def client():
    return TestClient(app)


@pytest.fixture
def c3c3_document(c3c3):
    return EmbeddingDocument.from_embedding(c3c3).model_dump(mode="json")


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}
    root = client.get("/").json()
    assert root["endpoints"]["verify"] == "/api/v1/embeddings/verify"


def test_list_fixtures(client):
    response = client.get("/api/v1/fixtures")
    assert response.status_code == 200
    names = {item["name"]: item for item in response.json()}
    assert set(names) == {"lemma1-c3c3", "lemma2-c5c5", "figure3-gadget", "figure4-c3c5-derived"}
    assert names["figure3-gadget"]["kind"] == "gadget"
    assert (names["figure4-c3c5-derived"]["h"], names["figure4-c3c5-derived"]["s"]) == (3, 5)
    citations = {name: item["provenance"].split(":")[0] for name, item in names.items()}
    assert citations == {"lemma1-c3c3": "Lemma 1", "lemma2-c5c5": "Lemma 2",
                         "figure3-gadget": "Figure 3", "figure4-c3c5-derived": "Figure 4"}


def test_fixture_documents(client):
    embedding = client.get("/api/v1/fixtures/lemma1-c3c3").json()
    assert embedding["layout"] == [1, 2, 3, 6, 5, 4, 7, 8, 9]
    assert embedding["color_names"]["1"] == "red"
    gadget = client.get("/api/v1/fixtures/figure3-gadget").json()
    assert gadget["report"]["verdict_a"] is True
    assert gadget["report"]["verdict_b"] is False
    assert gadget["report"]["breaking"] == "before"


def test_unknown_fixture(client):
    response = client.get("/api/v1/fixtures/nope")
    assert response.status_code == 422
    body = response.json()
    assert body["error"] == "malformed"
    assert body["details"][0]["code"] == "UNKNOWN_FIXTURE"


def test_verify_valid_embedding(client, c3c3_document):
    body = client.post("/api/v1/embeddings/verify", json=c3c3_document).json()
    assert body["valid"] is True
    assert (body["k"], body["delta"], body["lower_bound"]) == (5, 4, 5)
    assert body["classification"] == "nearly dispersable witness"
    assert body["violations"] == []


def test_verify_reports_clashes_with_200(client, c3c3_document):
    pages = c3c3_document["pages"]
    pages["1"].remove([1, 2])
    pages["3"].append([1, 2])
    response = client.post("/api/v1/embeddings/verify", json=c3c3_document)
    assert response.status_code == 200
    body = response.json()
    assert body["valid"] is False
    assert {v["kind"] for v in body["violations"]} == {"adjacent"}


def test_verify_rejects_malformed_document(client, c3c3_document):
    c3c3_document["pages"]["x"] = []
    assert client.post("/api/v1/embeddings/verify", json=c3c3_document).status_code == 422


def test_verify_rejects_uncolored_edges(client, c3c3_document):
    del c3c3_document["pages"]["4"]
    response = client.post("/api/v1/embeddings/verify", json=c3c3_document)
    assert response.status_code == 422
    assert response.json()["details"][0]["code"] == "UNCOLORED_EDGES"


def test_seed_analysis(client, c3c3_document):
    body = client.post("/api/v1/embeddings/seeds", json=c3c3_document).json()
    assert (body["h"], body["s"], body["t"]) == (3, 3, 2)
    assert body["seeds"] == [1, 2, 3]
    assert body["blocks"] == [[1, 2, 3], [6, 5, 4], [7, 8, 9]]


def test_extend(client, c3c3_document):
    response = client.post("/api/v1/embeddings/extend", params={"r": 2}, json=c3c3_document)
    assert response.status_code == 200
    body = response.json()
    assert (body["h"], body["s"]) == (3, 5)
    assert body["embedding"]["graph"]["n"] == 15
    assert body["sidecar"]["seed"] == 1


def test_extend_with_odd_r_is_conflict(client, c3c3_document):
    response = client.post("/api/v1/embeddings/extend", params={"r": 3}, json=c3c3_document)
    assert response.status_code == 409
    assert response.json()["details"][0]["code"] == "R_NOT_EVEN_POSITIVE"


def test_certificates(client):
    body = client.get("/api/v1/certificates/3/5").json()
    assert body["graph"]["n"] == 15
    assert len(body["pages"]) == 5
    assert client.get("/api/v1/certificates/3/4").status_code == 409


def test_mbt(client):
    k4 = {"n": 4, "edges": [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]]}
    assert client.post("/api/v1/search/mbt", json=k4).json() == {"n": 4, "m": 6, "mbt": 4, "lower_bound": 4}
    big = {"n": 11, "edges": [[i, i + 1] for i in range(1, 11)]}
    response = client.post("/api/v1/search/mbt", json=big)
    assert response.status_code == 413
    assert response.json()["error"] == "too_large"


def test_cnf_export(client):
    payload = {"graph": {"n": 3, "edges": [[1, 2], [1, 3], [2, 3]]}, "layout": [1, 2, 3]}
    response = client.post("/api/v1/search/cnf", params={"k": 3}, json=payload)
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("text/plain")
    assert "p cnf 9 24" in response.text


def test_example_session_runs_against_the_app(capsys):
    from example_session import main

    client = TestClient(app, base_url="http://testserver/api/v1")
    assert main(client) == 0
    out = capsys.readouterr().out
    assert "seeds: [1, 2, 3]" in out
    assert "35 vertices on 5 pages" in out
    assert "mbt=4 lower bound=4" in out
