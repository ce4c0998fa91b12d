"""Crash-safe run store: one canonical JSON document per run.

Every write goes to a temp file in the same directory, is fsynced, then
atomically renamed over the final path, so a reader (or a process restarted
after a crash) can never observe a half-written record.  Writes are
serialized through a single lock; reads are lock-free on the immutable
files.
"""

from __future__ import annotations

import json
import os
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path

from ..canonical import canonical_json
from ..errors import UnknownRunError

STATUS_QUEUED = "queued"
STATUS_RUNNING = "running"
STATUS_DONE = "done"
STATUS_FAILED = "failed"
STATUSES = (STATUS_QUEUED, STATUS_RUNNING, STATUS_DONE, STATUS_FAILED)

_ALLOWED_TRANSITIONS = {
    STATUS_QUEUED: {STATUS_RUNNING},
    STATUS_RUNNING: {STATUS_DONE, STATUS_FAILED},
    STATUS_DONE: set(),
    STATUS_FAILED: set(),
}

_RUN_ID_RE = re.compile(r"^[A-Za-z0-9._-]+$")


@dataclass(frozen=True)
class VerificationRequest:
    community_id: str
    member_ids: tuple[str, ...] = ()  # empty = all members
    characteristics: tuple[str, ...] | None = None  # None = all
    config_overrides: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "community_id": self.community_id,
            "member_ids": list(self.member_ids),
            "characteristics": None if self.characteristics is None
            else list(self.characteristics),
            "config_overrides": dict(self.config_overrides),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "VerificationRequest":
        return cls(
            community_id=raw["community_id"],
            member_ids=tuple(raw.get("member_ids") or ()),
            characteristics=None if raw.get("characteristics") is None
            else tuple(raw["characteristics"]),
            config_overrides=dict(raw.get("config_overrides") or {}),
        )


class RunStore:
    """Directory of <run_id>.json documents with atomic replacement."""

    def __init__(self, directory):
        self._dir = Path(directory)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._write_lock = threading.Lock()
        self._status: dict[str, str] = {}
        for run_id in self.list_ids():
            try:
                self._status[run_id] = self.read(run_id)["status"]
            except (OSError, ValueError, KeyError):
                # Unreadable record: ignore here, surface on direct read.
                continue

    def _path(self, run_id: str) -> Path:
        if not _RUN_ID_RE.match(run_id):
            raise UnknownRunError(f"unknown run {run_id!r}")
        return self._dir / f"{run_id}.json"

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self._dir.glob("*.json"))

    def exists(self, run_id: str) -> bool:
        try:
            return self._path(run_id).exists()
        except UnknownRunError:
            return False

    def write(self, record: dict) -> None:
        """Persist one run document atomically, enforcing status transitions."""
        run_id = record["run_id"]
        status = record["status"]
        if status not in STATUSES:
            raise ValueError(f"invalid status {status!r}")
        path = self._path(run_id)
        with self._write_lock:
            previous = self._status.get(run_id)
            if previous is not None and status != previous:
                if status not in _ALLOWED_TRANSITIONS[previous]:
                    raise ValueError(
                        f"illegal status transition {previous} -> {status}")
            data = canonical_json(record).encode("utf-8")
            tmp = path.with_suffix(".json.tmp")
            with open(tmp, "wb") as handle:
                handle.write(data)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, path)
            self._status[run_id] = status

    def read_bytes(self, run_id: str) -> bytes:
        path = self._path(run_id)
        try:
            return path.read_bytes()
        except FileNotFoundError:
            raise UnknownRunError(f"unknown run {run_id!r}") from None

    def read(self, run_id: str) -> dict:
        return json.loads(self.read_bytes(run_id).decode("utf-8"))

    def recover(self) -> tuple[list[str], list[str]]:
        """Reconcile after a restart.

        Runs found in 'running' state belonged to a dead worker and are
        marked failed; queued run ids are returned for re-execution.
        Returns (requeued_ids, failed_ids).
        """
        requeued: list[str] = []
        failed: list[str] = []
        for run_id in self.list_ids():
            record = self.read(run_id)
            if record["status"] == STATUS_RUNNING:
                record["status"] = STATUS_FAILED
                record["error"] = "interrupted by restart"
                self.write(record)
                failed.append(run_id)
            elif record["status"] == STATUS_QUEUED:
                requeued.append(run_id)
        return requeued, failed
