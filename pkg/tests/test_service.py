"""HTTP service endpoints: payloads, error mapping, round trips."""

import warnings

import numpy as np
import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from coherence_lab import serialize
from coherence_lab.service import create_app
from conftest import build_colliding_fio_kraus, build_swap12_fsio_kraus


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


def pure_doc(*amps):
    vec = np.array(amps, dtype=complex)
    vec /= np.linalg.norm(vec)
    return {"dim": len(amps), "amplitudes": [[z.real, z.imag] for z in vec]}


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_measure_pure_state(client):
    doc = pure_doc(np.sqrt(0.8), np.sqrt(0.2))
    body = client.post("/measure", json={"state": doc, "which": "both"}).json()
    assert abs(body["l1"] - 0.8) < 1e-12
    assert abs(body["g"] - 0.8) < 1e-12
    assert abs(body["g_pure_closed_form"] - 0.8) < 1e-12


def test_measure_uniform_superposition_d4(client):
    body = client.post("/measure", json={"state": pure_doc(1, 1, 1, 1), "which": "g"}).json()
    assert abs(body["g"] - 1.0) < 1e-12
    assert body["l1"] is None


def test_measure_incoherent_density(client):
    doc = {"dim": 2, "rho": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}
    body = client.post("/measure", json={"state": doc}).json()
    assert body["l1"] == 0.0 and body["g"] == 0.0
    assert body["g_pure_closed_form"] is None


def test_measure_rejects_unnormalized(client):
    doc = {"dim": 2, "amplitudes": [[1.0, 0.0], [1.0, 0.0]]}
    response = client.post("/measure", json={"state": doc})
    assert response.status_code == 422
    assert response.json()["detail"]["kind"] == "invariant"


def test_classify_fixtures(client):
    fsio_doc = serialize.kraus_set_to_json(build_swap12_fsio_kraus())
    body = client.post("/classify", json={"kraus": fsio_doc}).json()
    assert body["most_specific"] == "FSIO"
    assert body["certificate"]["pi"] == [2, 1, 3]

    fio_doc = serialize.kraus_set_to_json(build_colliding_fio_kraus())
    body = client.post("/classify", json={"kraus": fio_doc}).json()
    assert body["most_specific"] == "FIO"
    assert body["flags"]["fsio"] is False


def test_classify_rejects_incomplete(client):
    doc = {"dim": 2, "kraus": [[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]]}
    response = client.post("/classify", json={"kraus": doc})
    assert response.status_code == 422
    assert "trace preserving" in response.json()["detail"]["message"]


def test_apply_identity_echoes(client):
    from coherence_lab import random_mixed_state

    rho_doc = serialize.density_matrix_to_json(random_mixed_state(2, 2, 13))
    identity = {"dim": 2, "kraus": [[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]]}
    body = client.post("/apply", json={"kraus": identity, "state": rho_doc}).json()
    assert body == rho_doc


def test_apply_accepts_pure_state(client):
    identity = {"dim": 2, "kraus": [[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]]}
    body = client.post("/apply", json={"kraus": identity, "state": pure_doc(1, 1)}).json()
    assert abs(body["rho"][0][1][0] - 0.5) < 1e-12


def test_apply_dimension_mismatch(client):
    identity3 = serialize.kraus_set_to_json(
        __import__("coherence_lab").KrausSet.identity(3)
    )
    response = client.post("/apply", json={"kraus": identity3, "state": pure_doc(1, 1)})
    assert response.status_code == 422


def test_roof_pure_state_closed_form(client):
    body = client.post(
        "/roof", json={"state": pure_doc(np.sqrt(0.8), np.sqrt(0.2)), "restarts": 5}
    ).json()
    assert abs(body["value"] - 0.8) < 1e-10
    assert body["converged"] is True
    assert len(body["ensemble"]) == 1


def test_roof_response_reparses(client):
    from coherence_lab import random_mixed_state

    rho_doc = serialize.density_matrix_to_json(random_mixed_state(2, 2, 21))
    body = client.post("/roof", json={"state": rho_doc, "restarts": 8, "seed": 3}).json()
    result = serialize.roof_result_from_json(body)
    assert abs(result.value - body["value"]) < 1e-15


def test_random_objects_validate(client):
    for kind in ("state", "mixed", "fsio"):
        body = client.post(
            "/random", json={"kind": kind, "dim": 3, "seed": 11, "n_kraus": 3}
        ).json()
        doc = body["object"]
        if kind == "state":
            serialize.pure_state_from_json(doc)
        elif kind == "mixed":
            serialize.density_matrix_from_json(doc)
        else:
            from coherence_lab import classify_kraus

            assert classify_kraus(serialize.kraus_set_from_json(doc)).fsio


def test_random_deterministic(client):
    a = client.post("/random", json={"kind": "mixed", "dim": 2, "seed": 4}).json()
    b = client.post("/random", json={"kind": "mixed", "dim": 2, "seed": 4}).json()
    assert a == b


def test_verify_small_campaign(client):
    body = client.post(
        "/verify", json={"dims": [2], "trials_per_dim": 5, "seed": 12}
    ).json()
    assert body["summary"]["in_hypothesis_fails"] == 0
    assert len(body["records"]) == 20
    assert body["csv"].startswith("theorem_id,d,seed")


def test_verify_probe_section(client):
    body = client.post(
        "/verify",
        json={"dims": [3], "trials_per_dim": 2, "probe_fio": True, "seed": 13},
    ).json()
    assert "counterexample_probes" in body["summary"]


def test_request_shape_validation(client):
    response = client.post("/measure", json={"state": {"dim": 2}})
    assert response.status_code == 422
