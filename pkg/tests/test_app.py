import math

import pytest

from app import main as app_main


def test_health(client):
    response = client.get("/api/health")
    assert response.status_code == 200
    assert response.json["data"]["status"] == "ok"


class TestCorrmatApi:
    def test_bell(self, client):
        response = client.post("/api/corrmat", json={"state": "phi_plus"})
        assert response.status_code == 200
        assert response.json["success"] is True
        assert response.json["data"]["p"] == [[0.5, 0.0], [0.0, 0.5]]

    def test_classical_hadamard(self, client):
        body = {"state": "classical", "basis_a": "hadamard", "basis_b": "hadamard"}
        data = client.post("/api/corrmat", json=body).json["data"]
        for row in data["p"]:
            assert row == pytest.approx([0.25, 0.25], abs=1e-12)

    def test_operator_state(self, client):
        re = [0.0] * 16
        re[0] = re[15] = 0.5
        body = {"state": {"dim": 4, "re": re, "im": [0.0] * 16}}
        assert client.post("/api/corrmat", json=body).status_code == 200

    def test_bad_body(self, client):
        response = client.post("/api/corrmat", data="not json")
        assert response.status_code == 400
        assert response.json["success"] is False


class TestChshApi:
    def test_green(self, client):
        data = client.post("/api/chsh", json={"state": "phi_plus"}).json["data"]
        assert data["value"] == pytest.approx(2 * math.sqrt(2), abs=1e-12)
        assert data["verdict"] == "entanglement-verified"

    def test_werner_settings(self, client):
        body = {"state": "werner", "p": 0.5, "settings": ["0", "pi/4", "pi/8", "3pi/8"]}
        data = client.post("/api/chsh", json=body).json["data"]
        assert data["value"] == pytest.approx(math.sqrt(2), abs=1e-12)
        assert data["verdict"] == "inconclusive"

    def test_sampled(self, client):
        body = {"state": "phi_plus", "sample": 10000, "seed": 1}
        data = client.post("/api/chsh", json=body).json["data"]
        assert data["std_error"] > 0

    @pytest.mark.parametrize(
        "body",
        [
            {"settings": [0, 1, 2]},
            {"preset": "blue"},
            {"state": "ghz"},
            {"sample": 1},
        ],
    )
    def test_rejected(self, client, body):
        response = client.post("/api/chsh", json=body)
        assert response.status_code == 400
        assert "error" in response.json


class TestEprReidApi:
    def test_spdc(self, client):
        body = {"spdc": {"w": 1e-3, "L": 2e-3, "lambda": 405e-9, "alpha": 0.455}}
        data = client.post("/api/epr-reid", json=body).json["data"]
        assert data["product"] == pytest.approx(1.9147e-3, rel=1e-3)
        assert data["verdict"] == "entanglement-verified"
        assert set(data["state"]) == {"dxp", "dxm", "dpp", "dpm", "hbar"}

    def test_widths_boundary(self, client):
        data = client.post("/api/epr-reid", json={"widths": {"dxm": 1.0, "dpp": 0.5}}).json["data"]
        assert data["verdict"] == "inconclusive"

    def test_both_modes(self, client):
        body = {"spdc": {"w": 1, "L": 1, "lambda": 1}, "widths": {"dxm": 1, "dpp": 1}}
        assert client.post("/api/epr-reid", json=body).status_code == 400

    def test_missing_width(self, client):
        assert client.post("/api/epr-reid", json={"widths": {"dxm": 1.0}}).status_code == 400


def test_unknown_route(client):
    response = client.get("/api/nothing")
    assert response.status_code == 404
    assert response.json["success"] is False


@pytest.mark.parametrize(
    "url, body",
    [
        ("/api/chsh", {"state": "werner", "p": "abc"}),
        ("/api/chsh", {"sample": 100, "seed": "x"}),
        ("/api/epr-reid", {"widths": {"dxm": 1.0, "dpp": 1.0}, "hbar": "abc"}),
        ("/api/epr-reid", {"widths": {"dxm": "abc", "dpp": 1.0}}),
        ("/api/epr-reid", {"widths": {"dxm": 1.0, "dpp": 1.0}, "sample": 10, "seed": [1]}),
    ],
)
def test_non_numeric_fields(client, url, body):
    response = client.post(url, json=body)
    assert response.status_code == 400
    assert response.json["success"] is False


def test_unexpected_error(client, monkeypatch):
    def broken(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr(app_main, "correlation_matrix_named", broken)
    response = client.post("/api/corrmat", json={"state": "phi_plus"})
    assert response.status_code == 500
    assert response.json == {"success": False, "error": "boom"}
