"""The run gateway: persisted, asynchronous verification runs.

A run is submitted, persisted as a queued record before the call returns,
executed on a worker pool, and atomically replaced with the done record, so
a crash can never leave a half-written result.  The same machinery backs the
HTTP API (`sdverify serve`) and the web dashboard.

Run from the repository root:  python demos/05_run_gateway.py
"""

import tempfile
import time
from pathlib import Path

from sdverify import VerifierConfig, load_corpus, load_starter_lexicon
from sdverify.gateway import Gateway, VerificationRequest

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "demo"

corpus = load_corpus(FIXTURE / "posts.jsonl", FIXTURE / "members.jsonl")
lexicon = load_starter_lexicon()

with tempfile.TemporaryDirectory() as runs_dir:
    gateway = Gateway(corpus, lexicon, VerifierConfig(), runs_dir)
    print("communities:", gateway.list_communities())

    run_id = gateway.submit_run(VerificationRequest(community_id="demo"))
    print("submitted run:", run_id)

    while True:
        record = gateway.get_run(run_id)
        print("  status:", record["status"])
        if record["status"] in ("done", "failed"):
            break
        time.sleep(0.05)

    print()
    print(gateway.export_run(run_id, "table").decode("utf-8"))
    print("run store file:", *(p.name for p in Path(runs_dir).iterdir()))
    gateway.close()

print()
print("the same flow over HTTP:")
print("  sdverify serve --corpus <dir> --lexicon <lexicon.json> --port 8000 --runs runs/")
print("  POST /api/runs {'community_id': 'demo'}  ->  GET /api/runs/<id>  ->  /export")
