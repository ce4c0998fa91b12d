"""Gateway service: validated run submission, async execution, exports.

Runs execute on a small worker pool; every state change is persisted before
it becomes observable, and the done record (including all reports) is written
in a single atomic replace, so concurrent readers never see partial reports.
"""

from __future__ import annotations

import csv
import io
import secrets
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Sequence

from ..corpus import Corpus, list_members
from ..errors import RunNotDoneError, UnknownCommunityError, ValidationError
from ..lexicon import MarkerLexicon, compile_lexicon
from ..verifier import VerifierConfig, config_with_overrides, verify_member
from .store import (
    STATUS_DONE,
    STATUS_FAILED,
    STATUS_QUEUED,
    STATUS_RUNNING,
    RunStore,
    VerificationRequest,
)

EXPORT_FORMATS = ("json", "csv", "table")


def new_run_id() -> str:
    return time.strftime("%Y%m%dT%H%M%S") + "-" + secrets.token_hex(4)


class Gateway:
    def __init__(self, corpus: Corpus, lexicon: MarkerLexicon, config: VerifierConfig,
                 runs_dir, max_workers: int = 4):
        self.corpus = corpus
        self.lexicon = lexicon
        self.config = config
        self.matcher = compile_lexicon(lexicon)
        self.store = RunStore(runs_dir)
        self._pool = ThreadPoolExecutor(max_workers=max_workers,
                                        thread_name_prefix="sdverify-run")

    # -- catalog ---------------------------------------------------------

    def list_communities(self) -> list[tuple[str, int]]:
        return [(community_id, len(self.corpus.members(community_id)))
                for community_id in sorted(self.corpus.communities)]

    def list_community_members(self, community_id: str) -> list[dict]:
        return [
            {
                "member_id": member_id,
                "total_posts": total_posts,
                "declared": profile.declared_fields(),
            }
            for member_id, total_posts, profile in list_members(self.corpus, community_id)
        ]

    # -- runs ------------------------------------------------------------

    def _validate(self, request: VerificationRequest) -> VerifierConfig:
        if request.community_id not in self.corpus.communities:
            raise UnknownCommunityError(f"unknown community {request.community_id!r}")
        config = config_with_overrides(self.config, request.config_overrides)
        if request.characteristics is not None:
            if not request.characteristics:
                raise ValidationError("characteristics must not be empty "
                                      "(omit the field to verify all)")
            config = replace(config,
                             selected_characteristics=frozenset(request.characteristics))
        config.selection(self.lexicon)  # raises UnknownCharacteristicError
        known = set(self.corpus.members(request.community_id))
        missing = sorted(set(request.member_ids) - known)
        if missing:
            raise ValidationError(f"unknown members: {missing}")
        return config

    def submit_run(self, request: VerificationRequest) -> str:
        """Validate, persist the queued record, then execute asynchronously."""
        self._validate(request)
        run_id = new_run_id()
        while self.store.exists(run_id):
            run_id = new_run_id()
        record = {
            "run_id": run_id,
            "request": request.to_dict(),
            "status": STATUS_QUEUED,
            "created_at": int(time.time()),
            "reports": None,
            "error": None,
        }
        self.store.write(record)
        self._pool.submit(self._execute, run_id, request)
        return run_id

    def _execute(self, run_id: str, request: VerificationRequest) -> None:
        record = self.store.read(run_id)
        record["status"] = STATUS_RUNNING
        self.store.write(record)
        try:
            config = self._validate(request)
            member_ids: Sequence[str] = request.member_ids or \
                self.corpus.members(request.community_id)
            reports = [
                verify_member(self.corpus, self.matcher, self.lexicon,
                              request.community_id, member_id, config).to_dict()
                for member_id in sorted(member_ids)
            ]
            record["status"] = STATUS_DONE
            record["reports"] = reports
        except Exception as exc:  # the record carries the failure
            record["status"] = STATUS_FAILED
            record["error"] = f"{type(exc).__name__}: {exc}"
        self.store.write(record)

    def get_run(self, run_id: str) -> dict:
        return self.store.read(run_id)

    def get_run_bytes(self, run_id: str) -> bytes:
        """The persisted canonical document, byte-stable across restarts."""
        return self.store.read_bytes(run_id)

    def export_run(self, run_id: str, format: str) -> bytes:
        record = self.store.read(run_id)
        if record["status"] != STATUS_DONE:
            raise RunNotDoneError(f"run {run_id!r} is {record['status']}")
        if format == "json":
            return self.store.read_bytes(run_id)
        if format == "csv":
            return _reports_csv(record["reports"]).encode("utf-8")
        if format == "table":
            return _reports_table(record["reports"]).encode("utf-8")
        raise ValidationError(f"unknown export format {format!r}")

    def recover(self) -> None:
        """Fail interrupted runs, re-enqueue queued ones (call on startup)."""
        requeued, _ = self.store.recover()
        for run_id in requeued:
            record = self.store.read(run_id)
            request = VerificationRequest.from_dict(record["request"])
            self._pool.submit(self._execute, run_id, request)

    def close(self) -> None:
        self._pool.shutdown(wait=True)


def _reports_csv(reports: list[dict]) -> str:
    """One row per (member, characteristic), RFC-4180 quoting."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["member_id", "characteristic", "declared", "inferred",
                     "reliability", "verdict", "classification"])
    for report in reports:
        for verdict in report["verdicts"]:
            writer.writerow([
                report["member_id"],
                verdict["characteristic"],
                verdict["declared"] if verdict["declared"] is not None else "",
                verdict["inferred"] if verdict["inferred"] is not None else "",
                format(verdict["reliability"], ".6f"),
                verdict["verdict"],
                report["classification"],
            ])
    return buffer.getvalue()


def _reports_table(reports: list[dict]) -> str:
    """One aligned table per member: characteristic, declared, inferred,
    reliability, verdict."""
    header = ("characteristic", "declared", "inferred", "reliability", "verdict")
    blocks = []
    for report in reports:
        rows = [
            (v["characteristic"], v["declared"] or "-", v["inferred"] or "-",
             format(v["reliability"], ".6f"), v["verdict"])
            for v in report["verdicts"]
        ]
        widths = [max(len(header[col]), *(len(r[col]) for r in rows)) if rows
                  else len(header[col]) for col in range(5)]
        lines = [
            f"Member: {report['member_id']} ({report['community_id']})  "
            f"Classification: {report['classification']}",
            "  ".join(header[col].ljust(widths[col]) for col in range(5)).rstrip(),
        ]
        for row in rows:
            lines.append("  ".join(row[col].ljust(widths[col])
                                   for col in range(5)).rstrip())
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
