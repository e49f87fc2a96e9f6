import pytest

from app.api.routes import runs as runs_route


def test_health(api_client):
    response = api_client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}
    assert response.headers["X-Content-Type-Options"] == "nosniff"


def test_create_list_and_fetch_run(api_client):
    payload = {"algorithm": "improved", "window": 60, "stream": "random_arbitrary:n=120,seed=4", "sample_every": 10}
    created = api_client.post("/api/v1/runs", json=payload)
    assert created.status_code == 201
    body = created.json()
    assert body["steps"] == 120
    assert body["beta"] == 0.1
    assert [record["step"] for record in body["records"]][:2] == [10, 20]
    assert body["summary"]["oracle_enabled"] is True

    listed = api_client.get("/api/v1/runs", params={"algorithm": "improved"})
    assert listed.status_code == 200
    assert [item["run_id"] for item in listed.json()] == [body["run_id"]]

    fetched = api_client.get(f"/api/v1/runs/{body['run_id']}")
    assert fetched.status_code == 200
    assert fetched.json()["records"] == body["records"]


def test_records_can_be_omitted(api_client):
    payload = {"algorithm": "unit", "window": 20, "stream": "random_unit:n=30", "include_records": False}
    response = api_client.post("/api/v1/runs", json=payload)
    assert response.status_code == 201
    assert response.json()["records"] == []


def test_unknown_run_is_404(api_client):
    assert api_client.get("/api/v1/runs/does-not-exist").status_code == 404


def test_file_paths_are_rejected(api_client):
    response = api_client.post("/api/v1/runs", json={"algorithm": "unit", "window": 10, "stream": "/etc/passwd"})
    assert response.status_code == 422


def test_bad_generator_parameters_are_422(api_client):
    response = api_client.post("/api/v1/runs", json={"algorithm": "unit", "window": 10, "stream": "random_unit:n=x"})
    assert response.status_code == 422


def test_non_unit_stream_for_unit_algorithm_is_422(api_client):
    payload = {"algorithm": "unit", "window": 10, "stream": "random_arbitrary:n=10,seed=1"}
    assert api_client.post("/api/v1/runs", json=payload).status_code == 422


def test_oversized_stream_is_422(api_client):
    payload = {"algorithm": "cp", "window": 10, "stream": "random_unit:n=20001"}
    response = api_client.post("/api/v1/runs", json=payload)
    assert response.status_code == 422
    assert "at most" in response.json()["detail"]


@pytest.mark.parametrize(
    "stream",
    ["random_unit:n=2000000000,seed=1", "unit_index:L=1000000000,J=3", "appendix_hard:l=300000000"],
)
def test_huge_generator_spec_is_rejected_before_generation(api_client, monkeypatch, stream):
    def fail_build(spec):
        raise AssertionError(f"{spec} should not be generated")

    monkeypatch.setattr(runs_route, "build_stream", fail_build)
    response = api_client.post("/api/v1/runs", json={"algorithm": "cp", "window": 10, "stream": stream})
    assert response.status_code == 422
    assert "at most" in response.json()["detail"]


def test_run_creation_is_rate_limited(api_client, monkeypatch):
    from app.core.config import get_settings

    monkeypatch.setattr(get_settings(), "runs_rate_limit_per_min", 2)
    payload = {"algorithm": "cp", "window": 10, "stream": "random_unit:n=5"}
    statuses = [api_client.post("/api/v1/runs", json=payload).status_code for _ in range(3)]
    assert statuses == [201, 201, 429]
