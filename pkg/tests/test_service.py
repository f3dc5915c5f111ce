import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from magpix.pattern_io import grid_to_doc
from magpix.patterns import PixelGrid, complement, sylvester_hadamard
from magpix.service import ControlService, classify_reading, create_app

CLEAN_NOISE_SEED = 5


@pytest.fixture()
def client():
    app = create_app(rows=16, cols=16, sigma=0.18, seed=CLEAN_NOISE_SEED)
    with TestClient(app) as c:
        yield c


def wait_done(client, job_id, timeout=10.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        doc = client.get(f"/jobs/{job_id}").json()
        if doc["state"] in ("done", "failed"):
            return doc
        time.sleep(0.005)
    raise AssertionError(f"job {job_id} did not finish: {doc}")


# --- design endpoints ---------------------------------------------------------

def test_validate_pattern_ok(client):
    doc = grid_to_doc(sylvester_hadamard(4), {"name": "h4"})
    out = client.post("/patterns/validate", json=doc).json()
    assert out == {"ok": True, "rows": 4, "cols": 4, "metadata": {"name": "h4"}}


def test_validate_pattern_rejects_bad_values(client):
    resp = client.post(
        "/patterns/validate", json={"format_version": 1, "values": [[2.0]]}
    )
    assert resp.status_code == 422
    assert "cell (0, 0)" in resp.json()["detail"]


def test_design_hadamard(client):
    doc = client.post("/design/hadamard", json={"order": 8}).json()
    assert doc["rows"] == 8
    assert doc["values"][0] == [1.0] * 8


def test_design_hadamard_rejects_bad_order(client):
    assert client.post("/design/hadamard", json={"order": 6}).status_code == 422


def test_design_pairs(client):
    out = client.post(
        "/design/pairs", json={"k": 2, "order": 8, "candidates": 16, "seed": 3}
    ).json()
    assert len(out["pairs"]) == 2
    assert out["score"] <= 0.5
    key = np.array(out["pairs"][0]["key"]["values"])
    lock = np.array(out["pairs"][0]["lock"]["values"])
    np.testing.assert_array_equal(lock, -key)


def test_design_canvas(client):
    token = grid_to_doc(sylvester_hadamard(4))
    out = client.post(
        "/design/canvas", json={"token": token, "assignments": [["attract", "agnostic"]]}
    ).json()
    assert out["canvas"]["rows"] == 4 and out["canvas"]["cols"] == 8
    assert out["blocks"][0][0] == {"assignment": "attract", "ncc": -1.0}
    assert out["blocks"][0][1] == {"assignment": "agnostic", "ncc": 0.0}


def test_predict_map_center_and_axes(client):
    h8 = grid_to_doc(sylvester_hadamard(8))
    c8 = grid_to_doc(complement(sylvester_hadamard(8)))
    out = client.post("/predict/map", json={"a": h8, "b": c8}).json()
    assert out["dx_min"] == -7 and out["dy_min"] == -7
    center_row, center_col = -out["dy_min"], -out["dx_min"]
    assert out["ncc"][center_row][center_col] == -1.0
    for shift in range(1, 8):
        assert out["ncc"][center_row][center_col + shift] == 0.0
        assert out["ncc"][center_row + shift][center_col] == 0.0
    assert out["force_n"][center_row][center_col] == pytest.approx(-1.09, abs=1e-9)


# --- device jobs -----------------------------------------------------------------

def test_plot_job_full_h8(client):
    doc = grid_to_doc(sylvester_hadamard(8))
    job = client.post("/devices/dev0/plot", json={"pattern": doc}).json()
    assert job["kind"] == "plot" and job["pixels_total"] == 64
    done = wait_done(client, job["id"])
    assert done["state"] == "done"
    assert done["result"]["pixels_written"] == 64
    assert done["progress"] == 1.0

    sheet = client.get("/devices/dev0/sheet").json()
    np.testing.assert_array_equal(np.array(sheet["values"])[:8, :8], sylvester_hadamard(8).values)


def test_plot_zero_delta_completes_instantly(client):
    doc = grid_to_doc(PixelGrid(np.zeros((4, 4))))
    job = client.post("/devices/dev0/plot", json={"pattern": doc}).json()
    done = wait_done(client, job["id"])
    assert done["state"] == "done"
    assert done["result"]["pixels_written"] == 0


def test_scan_recovers_plotted_pattern(client):
    h4 = sylvester_hadamard(4)
    plot = client.post("/devices/dev0/plot", json={"pattern": grid_to_doc(h4)}).json()
    wait_done(client, plot["id"])
    scan = client.post("/devices/dev0/scan", json={"rows": 4, "cols": 4}).json()
    done = wait_done(client, scan["id"])
    assert done["state"] == "done"
    result = done["result"]["pattern"]
    np.testing.assert_array_equal(np.array(result["values"]), h4.values)
    assert "raw_readings" in result["metadata"]


def test_scan_fresh_sheet_all_zero(client):
    scan = client.post("/devices/dev0/scan", json={"rows": 8, "cols": 8}).json()
    done = wait_done(client, scan["id"])
    assert np.all(np.array(done["result"]["pattern"]["values"]) == 0.0)


def test_scan_size_validation(client):
    assert client.post("/devices/dev0/scan", json={"rows": 0, "cols": 0}).status_code == 422
    assert client.post("/devices/dev0/scan", json={"rows": 99, "cols": 4}).status_code == 422


def test_plot_validation_before_queueing(client):
    bad = {"format_version": 1, "values": [[3.0]]}
    assert client.post("/devices/dev0/plot", json={"pattern": bad}).status_code == 422
    big = grid_to_doc(PixelGrid(np.ones((20, 20))))
    assert client.post("/devices/dev0/plot", json={"pattern": big}).status_code == 422


def test_unknown_device_and_job(client):
    doc = grid_to_doc(sylvester_hadamard(2))
    assert client.post("/devices/nope/plot", json={"pattern": doc}).status_code == 404
    assert client.get("/jobs/nope").status_code == 404


def test_two_jobs_serialize_on_one_device():
    service = ControlService()
    service.add_device("dev0", 8, 8, sigma=0.0, seed=0)
    app = create_app(service=service)
    with TestClient(app) as client:
        h8 = grid_to_doc(sylvester_hadamard(8))
        c8 = grid_to_doc(complement(sylvester_hadamard(8)))
        first = client.post("/devices/dev0/plot", json={"pattern": h8}).json()
        second = client.post("/devices/dev0/plot", json={"pattern": c8}).json()
        done1 = wait_done(client, first["id"])
        done2 = wait_done(client, second["id"])
        assert done2["started_at"] >= done1["finished_at"]
        # command streams must not interleave
        log = service.devices["dev0"].command_log
        job_ids = [jid for jid, _, _ in log]
        blocks = [job_ids[0]]
        for jid in job_ids[1:]:
            if jid != blocks[-1]:
                blocks.append(jid)
        assert blocks == [first["id"], second["id"]]
        # overwrite through the full stack
        sheet = client.get("/devices/dev0/sheet").json()
        np.testing.assert_array_equal(np.array(sheet["values"]), -sylvester_hadamard(8).values)


def test_progress_monotone_under_throttle():
    service = ControlService()
    service.add_device("slow", 8, 8, sigma=0.0, seed=0, throttle_s=0.003)
    app = create_app(service=service)
    with TestClient(app) as client:
        doc = grid_to_doc(sylvester_hadamard(8))
        job = client.post("/devices/slow/plot", json={"pattern": doc}).json()
        seen = []
        deadline = time.time() + 20
        while time.time() < deadline:
            snap = client.get(f"/jobs/{job['id']}").json()
            seen.append(snap["pixels_done"])
            if snap["state"] in ("done", "failed"):
                break
            time.sleep(0.01)
        assert seen == sorted(seen)
        running_values = {v for v in seen if 0 < v < 64}
        assert len(running_values) >= 2  # observed strictly increasing mid-run progress


def test_all_jobs_reach_terminal_state(client):
    ids = []
    for _ in range(3):
        doc = grid_to_doc(sylvester_hadamard(4))
        ids.append(client.post("/devices/dev0/plot", json={"pattern": doc}).json()["id"])
    for jid in ids:
        assert wait_done(client, jid)["state"] == "done"


def test_dump_jobs(tmp_path):
    service = ControlService()
    service.add_device("dev0", 4, 4, sigma=0.0, seed=0)
    app = create_app(service=service)
    with TestClient(app) as client:
        doc = grid_to_doc(sylvester_hadamard(2))
        job = client.post("/devices/dev0/plot", json={"pattern": doc}).json()
        wait_done(client, job["id"])
    out = tmp_path / "jobs.json"
    service.dump_jobs(out)
    assert job["id"] in out.read_text()


def test_design_endpoints_leave_device_state_untouched(client):
    h4 = sylvester_hadamard(4)
    plot = client.post("/devices/dev0/plot", json={"pattern": grid_to_doc(h4)}).json()
    wait_done(client, plot["id"])
    before = client.get("/devices/dev0/sheet").json()
    client.post("/design/hadamard", json={"order": 8})
    client.post("/design/pairs", json={"k": 2, "order": 8, "candidates": 8, "seed": 1})
    client.post(
        "/design/canvas",
        json={"token": grid_to_doc(h4), "assignments": [["attract"]]},
    )
    client.post("/predict/map", json={"a": grid_to_doc(h4), "b": grid_to_doc(h4)})
    assert client.get("/devices/dev0/sheet").json() == before


def test_classify_reading_thresholds():
    assert classify_reading(0.9) == 1.0
    assert classify_reading(-0.7) == -1.0
    assert classify_reading(0.4) == 0.0
    assert classify_reading(-0.5) == 0.0
