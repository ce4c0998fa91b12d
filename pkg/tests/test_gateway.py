from __future__ import annotations

import json
import os
import signal
import subprocess
import sys
import time
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from sdverify import VerifierConfig
from sdverify.errors import (
    RunNotDoneError,
    UnknownCommunityError,
    UnknownRunError,
    ValidationError,
)
from sdverify.gateway.api import create_app
from sdverify.gateway.service import Gateway
from sdverify.gateway.store import RunStore, VerificationRequest

from .conftest import GOLDEN


def wait_for(predicate, timeout=10.0, interval=0.01):
    deadline = time.time() + timeout
    while time.time() < deadline:
        result = predicate()
        if result:
            return result
        time.sleep(interval)
    raise TimeoutError("condition not reached")


@pytest.fixture()
def gateway(demo_corpus, starter_lexicon, tmp_path):
    gw = Gateway(demo_corpus, starter_lexicon, VerifierConfig(), tmp_path / "runs")
    yield gw
    gw.close()


def wait_done(gateway, run_id):
    record = wait_for(lambda: (lambda r: r if r["status"] in ("done", "failed") else None)(
        gateway.get_run(run_id)))
    assert record["status"] == "done", record.get("error")
    return record


# -- store ---------------------------------------------------------------------

def test_store_write_read_round_trip(tmp_path):
    store = RunStore(tmp_path / "runs")
    record = {"run_id": "r1", "request": {"community_id": "demo"},
              "status": "queued", "created_at": 1, "reports": None, "error": None}
    store.write(record)
    assert store.read("r1") == record
    assert store.list_ids() == ["r1"]


def test_store_rejects_illegal_transition(tmp_path):
    store = RunStore(tmp_path / "runs")
    record = {"run_id": "r1", "request": {}, "status": "queued",
              "created_at": 1, "reports": None, "error": None}
    store.write(record)
    record["status"] = "done"
    with pytest.raises(ValueError):
        store.write(record)  # queued -> done skips running


def test_store_done_records_immutable(tmp_path):
    store = RunStore(tmp_path / "runs")
    for status in ("queued", "running", "done"):
        store.write({"run_id": "r1", "request": {}, "status": status,
                     "created_at": 1, "reports": [], "error": None})
    with pytest.raises(ValueError):
        store.write({"run_id": "r1", "request": {}, "status": "failed",
                     "created_at": 1, "reports": [], "error": None})


def test_store_unknown_run(tmp_path):
    store = RunStore(tmp_path / "runs")
    with pytest.raises(UnknownRunError):
        store.read("nope")
    with pytest.raises(UnknownRunError):
        store.read_bytes("../../etc/passwd")


def test_store_recover_fails_running_and_requeues(tmp_path):
    store = RunStore(tmp_path / "runs")
    store.write({"run_id": "a", "request": {}, "status": "queued",
                 "created_at": 1, "reports": None, "error": None})
    store.write({"run_id": "b", "request": {}, "status": "queued",
                 "created_at": 1, "reports": None, "error": None})
    store.write({"run_id": "b", "request": {}, "status": "running",
                 "created_at": 1, "reports": None, "error": None})
    fresh = RunStore(tmp_path / "runs")
    requeued, failed = fresh.recover()
    assert requeued == ["a"]
    assert failed == ["b"]
    assert fresh.read("b")["status"] == "failed"


def test_store_leaves_no_temp_files(tmp_path):
    store = RunStore(tmp_path / "runs")
    store.write({"run_id": "r1", "request": {}, "status": "queued",
                 "created_at": 1, "reports": None, "error": None})
    assert [p.name for p in (tmp_path / "runs").iterdir()] == ["r1.json"]


# -- service --------------------------------------------------------------------

def test_submit_and_complete_run(gateway):
    run_id = gateway.submit_run(VerificationRequest(community_id="demo"))
    record = gateway.get_run(run_id)
    assert record["status"] in ("queued", "running", "done")
    record = wait_done(gateway, run_id)
    # member_ids=[] means all members.
    assert [r["member_id"] for r in record["reports"]] == \
        ["andriy", "olena", "quiet", "taras"]


def test_submit_selected_members(gateway):
    run_id = gateway.submit_run(VerificationRequest(community_id="demo",
                                                    member_ids=("olena",)))
    record = wait_done(gateway, run_id)
    assert len(record["reports"]) == 1
    assert record["reports"][0]["classification"] == "PartiallyVerified"


def test_submit_unknown_community(gateway):
    with pytest.raises(UnknownCommunityError):
        gateway.submit_run(VerificationRequest(community_id="nope"))


def test_submit_unknown_characteristic(gateway):
    with pytest.raises(ValidationError):
        gateway.submit_run(VerificationRequest(community_id="demo",
                                               characteristics=("zodiac",)))


def test_submit_empty_characteristics_rejected(gateway):
    with pytest.raises(ValidationError):
        gateway.submit_run(VerificationRequest(community_id="demo",
                                               characteristics=()))


def test_submit_unknown_member(gateway):
    with pytest.raises(ValidationError):
        gateway.submit_run(VerificationRequest(community_id="demo",
                                               member_ids=("ghost",)))


def test_submit_bad_config_override(gateway):
    with pytest.raises(ValidationError):
        gateway.submit_run(VerificationRequest(community_id="demo",
                                               config_overrides={"bogus": 1}))


def test_run_persisted_before_ack(gateway):
    run_id = gateway.submit_run(VerificationRequest(community_id="demo"))
    # The record file must exist the moment submit_run returns.
    assert gateway.store.exists(run_id)


def test_list_communities(gateway):
    assert gateway.list_communities() == [("demo", 4)]


def test_list_two_communities(starter_lexicon, tmp_path):
    from .test_corpus import member, post, write_jsonl
    from sdverify import load_corpus

    posts_path = tmp_path / "posts.jsonl"
    members_path = tmp_path / "members.jsonl"
    write_jsonl(posts_path, [post("p1", "m1", 1, "текст", community_id="beta")])
    write_jsonl(members_path, [member("m1", community_id="alpha"),
                               member("m2", community_id="alpha"),
                               member("m1", community_id="beta")])
    corpus = load_corpus(posts_path, members_path)
    gw = Gateway(corpus, starter_lexicon, VerifierConfig(), tmp_path / "runs")
    try:
        assert gw.list_communities() == [("alpha", 2), ("beta", 1)]
    finally:
        gw.close()


def test_list_community_members(gateway):
    members = gateway.list_community_members("demo")
    assert [m["member_id"] for m in members] == ["andriy", "olena", "quiet", "taras"]
    olena = [m for m in members if m["member_id"] == "olena"][0]
    assert olena["total_posts"] == 7
    assert olena["declared"] == {"gender": "female", "birth_year": 1990}


def test_get_run_unknown(gateway):
    with pytest.raises(UnknownRunError):
        gateway.get_run("missing")


def test_export_requires_done(gateway, tmp_path):
    gateway.store.write({"run_id": "r1", "request": {"community_id": "demo"},
                         "status": "queued", "created_at": 1,
                         "reports": None, "error": None})
    with pytest.raises(RunNotDoneError):
        gateway.export_run("r1", "json")


def test_export_json_round_trips(gateway):
    run_id = gateway.submit_run(VerificationRequest(community_id="demo"))
    record = wait_done(gateway, run_id)
    exported = json.loads(gateway.export_run(run_id, "json").decode("utf-8"))
    assert exported == record


def test_export_csv_one_row_per_member_characteristic(gateway):
    run_id = gateway.submit_run(VerificationRequest(community_id="demo"))
    wait_done(gateway, run_id)
    lines = gateway.export_run(run_id, "csv").decode("utf-8").splitlines()
    assert lines[0] == "member_id,characteristic,declared,inferred,reliability,verdict,classification"
    assert len(lines) == 1 + 4 * 2  # 4 members x 2 characteristics


def test_export_single_member_table_matches_golden(gateway):
    run_id = gateway.submit_run(VerificationRequest(community_id="demo",
                                                    member_ids=("olena",)))
    wait_done(gateway, run_id)
    table = gateway.export_run(run_id, "table")
    assert table == (GOLDEN / "olena_table.txt").read_bytes()


def test_done_run_byte_stable_across_reopen(gateway, demo_corpus, starter_lexicon, tmp_path):
    run_id = gateway.submit_run(VerificationRequest(community_id="demo"))
    wait_done(gateway, run_id)
    before = gateway.get_run_bytes(run_id)
    reopened = Gateway(demo_corpus, starter_lexicon, VerifierConfig(),
                       gateway.store._dir)
    try:
        assert reopened.get_run_bytes(run_id) == before
    finally:
        reopened.close()


def test_recover_requeues_and_completes(demo_corpus, starter_lexicon, tmp_path):
    store = RunStore(tmp_path / "runs")
    request = VerificationRequest(community_id="demo")
    store.write({"run_id": "stale", "request": request.to_dict(), "status": "queued",
                 "created_at": 1, "reports": None, "error": None})
    gateway = Gateway(demo_corpus, starter_lexicon, VerifierConfig(), tmp_path / "runs")
    try:
        gateway.recover()
        record = wait_done(gateway, "stale")
        assert len(record["reports"]) == 4
    finally:
        gateway.close()


def test_concurrent_reads_never_see_partial_reports(demo_corpus, starter_lexicon, tmp_path):
    from sdverify import SyntheticSpec, generate_synthetic

    spec = SyntheticSpec(label="big", n_members=300, posts_min=3, posts_max=8,
                         signal_rate=0.5, noise_rate=0.05, deceiver_fraction=0.2,
                         characteristics=("gender", "age_group"), seed=5)
    corpus, _ = generate_synthetic(spec, starter_lexicon)
    gateway = Gateway(corpus, starter_lexicon, VerifierConfig(), tmp_path / "runs")
    try:
        run_id = gateway.submit_run(VerificationRequest(community_id="big"))
        while True:
            record = gateway.get_run(run_id)
            if record["status"] == "done":
                assert len(record["reports"]) == 300
                break
            assert record["reports"] is None, "partial reports observed"
            assert record["status"] in ("queued", "running")
    finally:
        gateway.close()


# -- HTTP API ---------------------------------------------------------------------

@pytest.fixture()
def client(gateway):
    return TestClient(create_app(gateway))


def test_api_communities(client):
    response = client.get("/api/communities")
    assert response.status_code == 200
    assert response.json() == [{"community_id": "demo", "member_count": 4}]


def test_api_members(client):
    response = client.get("/api/communities/demo/members")
    assert response.status_code == 200
    assert len(response.json()) == 4


def test_api_members_unknown_community_404(client):
    assert client.get("/api/communities/nope/members").status_code == 404


def test_api_submit_poll_export(client, gateway):
    response = client.post("/api/runs", json={"community_id": "demo"})
    assert response.status_code == 200
    run_id = response.json()["run_id"]

    record = wait_for(lambda: (lambda r: r if r["status"] == "done" else None)(
        client.get(f"/api/runs/{run_id}").json()))
    assert len(record["reports"]) == 4

    exported = client.get(f"/api/runs/{run_id}/export", params={"format": "json"})
    assert exported.status_code == 200
    assert exported.json() == record

    csv_export = client.get(f"/api/runs/{run_id}/export", params={"format": "csv"})
    assert csv_export.status_code == 200
    assert csv_export.text.startswith("member_id,")

    table_export = client.get(f"/api/runs/{run_id}/export", params={"format": "table"})
    assert "Classification:" in table_export.text


def test_api_run_bytes_match_store(client, gateway):
    run_id = client.post("/api/runs", json={"community_id": "demo"}).json()["run_id"]
    wait_done(gateway, run_id)
    response = client.get(f"/api/runs/{run_id}")
    assert response.content == gateway.store.read_bytes(run_id)


def test_api_validation_errors_are_400(client):
    assert client.post("/api/runs", json={"community_id": "demo",
                                          "characteristics": ["zodiac"]}).status_code == 400
    assert client.post("/api/runs", json={"community_id": "demo",
                                          "member_ids": ["ghost"]}).status_code == 400
    assert client.post("/api/runs", json={"member_ids": []}).status_code == 400


def test_api_unknown_are_404(client):
    assert client.post("/api/runs", json={"community_id": "nope"}).status_code == 404
    assert client.get("/api/runs/missing").status_code == 404
    assert client.get("/api/runs/missing/export?format=json").status_code == 404


def test_api_not_done_is_409(client, gateway):
    gateway.store.write({"run_id": "r1", "request": {"community_id": "demo"},
                         "status": "queued", "created_at": 1,
                         "reports": None, "error": None})
    response = client.get("/api/runs/r1/export", params={"format": "json"})
    assert response.status_code == 409


def test_api_bad_export_format_400(client, gateway):
    run_id = client.post("/api/runs", json={"community_id": "demo"}).json()["run_id"]
    wait_done(gateway, run_id)
    assert client.get(f"/api/runs/{run_id}/export",
                      params={"format": "xml"}).status_code == 400


def test_api_config_endpoint(client):
    config = client.get("/api/config").json()
    assert config["theta_conf"] == 0.6
    assert config["characteristics"] == ["gender", "age_group"]


# -- crash safety -------------------------------------------------------------------

def crash_scenario(tmp_path):
    """Kill a gateway process mid-run, then check the store survived intact."""
    runs_dir = tmp_path / "runs"
    child = subprocess.Popen(
        [sys.executable, "-m", "tests.crash_child", str(runs_dir)],
        cwd=Path(__file__).resolve().parent.parent,
        stdout=subprocess.PIPE, text=True)
    try:
        submitted = child.stdout.readline().strip()
        assert submitted.startswith("SUBMITTED ")
        run_id = submitted.split()[1]
        assert child.stdout.readline().strip() == "RUNNING"
        time.sleep(0.2)  # let the worker get partway through the batch
        os.kill(child.pid, signal.SIGKILL)
        child.wait(timeout=10)
    finally:
        if child.poll() is None:
            child.kill()
        child.stdout.close()

    # Every record in the store parses; no done record is missing reports.
    store = RunStore(runs_dir)
    ids = store.list_ids()
    assert run_id in ids
    for rid in ids:
        record = store.read(rid)
        assert record["status"] in ("queued", "running", "done", "failed")
        if record["status"] == "done":
            assert isinstance(record["reports"], list)
            assert len(record["reports"]) == 4000
        else:
            assert record["reports"] is None

    # Restart recovery: the interrupted run ends up queued (re-runnable) or failed.
    store.recover()
    record = store.read(run_id)
    assert record["status"] in ("queued", "failed")
    return run_id


def test_kill_after_submit_leaves_consistent_store(tmp_path):
    crash_scenario(tmp_path)
