import math
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from qjjlab import __version__
from qjjlab.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    body = client.get("/health").json()
    assert body == {"status": "ok", "version": __version__}


def test_scenario_listing(client):
    names = client.get("/scenarios").json()["scenarios"]
    assert names == sorted(names)
    assert {"fraunhofer", "qplane", "rates", "verify-identities", "equivalence", "evolve", "ring-spectrum"} <= set(names)


def test_qplane_run(client):
    resp = client.post("/scenarios/qplane", json={"M": 128, "s": 1.0})
    assert resp.status_code == 200
    report = resp.json()
    assert report["passed"]
    assert report["columns"] == ["M", "s", "commensurate", "residual_full", "residual_interior"]
    assert report["csv"].startswith("# scenario=qplane\n")


def test_unknown_scenario_is_404(client):
    assert client.post("/scenarios/nonsense", json={}).status_code == 404


def test_bad_grid_size_is_422(client):
    assert client.post("/scenarios/qplane", json={"M": 63}).status_code == 422


def test_unknown_field_rejected(client):
    assert client.post("/scenarios/qplane", json={"bogus": 1}).status_code == 422


def test_s_and_flux_conflict(client):
    resp = client.post("/scenarios/qplane", json={"s": 1.0, "phi_flux": 0.5})
    assert resp.status_code == 422
    assert "phi_flux" in resp.json()["detail"]


def test_flux_sets_deformation_angle(client):
    resp = client.post("/scenarios/qplane", json={"M": 64, "phi_flux": 0.5})
    assert resp.status_code == 200
    assert resp.json()["params"]["s"] == pytest.approx(math.pi)


def test_repeated_requests_are_byte_identical(client):
    payload = {"M": 128, "s": 0.7}
    first = client.post("/scenarios/qplane", json=payload).json()["csv"]
    second = client.post("/scenarios/qplane", json=payload).json()["csv"]
    assert first == second


def test_effective_params_echoed_in_header(client):
    report = client.post("/scenarios/rates", json={"M": 64, "s": 0.0}).json()
    header_lines = [line for line in report["csv"].splitlines() if line.startswith("# ")]
    keys = {line.split("=")[0][2:] for line in header_lines}
    assert {"M", "s", "t", "I", "EJ", "EC", "tol"} <= keys


def test_check_failure_reported_not_raised(client):
    # the phase-channel identity cannot hold across the branch cut for
    # non-integer s; the scenario reports the failure and stays HTTP 200
    resp = client.post("/scenarios/verify-identities", json={"M": 128, "s": 0.5, "t_values": [0.0], "i_values": [0.0]})
    assert resp.status_code == 200
    report = resp.json()
    assert not report["passed"]
    failing = {c["name"] for c in report["checks"] if not c["passed"]}
    assert failing == {"rate_phi[t=0.0,I=0.0]"}
