"""Durable, transactional persistence: entity store, blob store, audit log.

The store is an embedded, file-backed commit log. Each commit appends one
checksummed JSON line holding the entity writes plus their audit entries, and
is fsynced before it returns: the writes and audit entries become visible
together or not at all. A torn trailing line (crash between write and
durability acknowledgment) fails its checksum on reopen and is discarded, so
recovery never exposes a partial commit.

Concurrency: many readers, one serialized commit pipeline. Readers take an
immutable state snapshot (copy-on-write, swapped atomically per commit);
writers declare the entity version they read and get CONFLICT if another
commit won the race (optimistic concurrency).
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterator, Mapping, Sequence

from filelock import FileLock, Timeout

from .errors import bail

LOG_NAME = "commits.jsonl"
LOCK_NAME = "store.lock"
BLOB_DIR = "blobs"

STORE_FORMAT = "facmon-store"
ARCHIVE_FORMAT = "facmon-archive"
FORMAT_VERSION = 1

# Audit snapshots above this size are spilled to the blob store and replaced
# by an overflow reference, keeping log lines bounded.
SNAPSHOT_LIMIT = 64 * 1024


def canonical_json(value: Any) -> str:
    """Deterministic JSON used for log lines, checksums and archives."""
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _utcnow_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


@dataclass(frozen=True)
class Write:
    """One entity write inside a commit.

    ``expected_version`` is the version the writer read (0 = entity must not
    exist yet). The commit fails with CONFLICT if the stored version differs.
    """

    kind: str
    entity_id: str
    data: Mapping[str, Any]
    expected_version: int = 0


@dataclass(frozen=True)
class AuditDraft:
    """Caller-supplied part of an audit entry; seq and timestamp are assigned at commit."""

    actor: str
    action: str
    entity_kind: str
    entity_id: str
    before: Mapping[str, Any] | None = None
    after: Mapping[str, Any] | None = None


@dataclass(frozen=True)
class AuditEntry:
    seq: int
    timestamp: str
    actor: str
    action: str
    entity_kind: str
    entity_id: str
    before: Mapping[str, Any] | None
    after: Mapping[str, Any] | None


class StoreState:
    """Immutable snapshot of all committed entities.

    Never mutated in place: commits build a successor snapshot and swap the
    store's reference, so a reader holding a snapshot sees a stable view.
    """

    __slots__ = ("entities", "versions", "unique")

    def __init__(
        self,
        entities: dict[str, dict[str, dict]],
        versions: dict[tuple[str, str], int],
        unique: dict[tuple, str],
    ):
        self.entities = entities
        self.versions = versions
        self.unique = unique

    @classmethod
    def empty(cls) -> "StoreState":
        return cls({}, {}, {})

    def get(self, kind: str, entity_id: str) -> dict | None:
        return self.entities.get(kind, {}).get(entity_id)

    def version(self, kind: str, entity_id: str) -> int:
        return self.versions.get((kind, entity_id), 0)

    def all(self, kind: str) -> Iterator[tuple[str, dict]]:
        return iter(self.entities.get(kind, {}).items())

    def count(self, kind: str) -> int:
        return len(self.entities.get(kind, {}))

    def find_unique(self, kind: str, *key_values: Any) -> dict | None:
        entity_id = self.unique.get((kind, *key_values))
        if entity_id is None:
            return None
        return self.get(kind, entity_id)


def _unique_key(unique_fields: Mapping[str, Sequence[str]], kind: str, data: Mapping) -> tuple | None:
    fields = unique_fields.get(kind)
    if not fields:
        return None
    return (kind, *(data[f] for f in fields))


class Store:
    """The single mutation entry point for all persistent state.

    ``unique_fields`` maps an entity kind to the field names forming its
    uniqueness key (e.g. item -> ("barcode",)); violations are rejected at
    commit time, which makes uniqueness hold under concurrent writers.
    """

    def __init__(self, data_dir: str | os.PathLike, unique_fields: Mapping[str, Sequence[str]] | None = None):
        self.data_dir = Path(data_dir)
        self.unique_fields = dict(unique_fields or {})
        self._commit_lock = threading.Lock()
        self._state = StoreState.empty()
        self._audit: list[AuditEntry] = []
        self._commit_count = 0
        self._next_seq = 1
        self._log_file = None
        self._dir_lock: FileLock | None = None

    # -- lifecycle ---------------------------------------------------------

    def open(self) -> "Store":
        try:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            (self.data_dir / BLOB_DIR).mkdir(exist_ok=True)
        except OSError as exc:
            raise bail("DATA_DIR_UNWRITABLE", f"cannot prepare data dir {self.data_dir}: {exc}")
        if not os.access(self.data_dir, os.W_OK):
            raise bail("DATA_DIR_UNWRITABLE", f"data dir {self.data_dir} is not writable")

        self._dir_lock = FileLock(str(self.data_dir / LOCK_NAME))
        try:
            self._dir_lock.acquire(timeout=0)
        except Timeout:
            raise bail(
                "DATA_DIR_LOCKED",
                f"data dir {self.data_dir} is in use by another process (a running server?)",
            ) from None

        log_path = self.data_dir / LOG_NAME
        if log_path.exists():
            self._load(log_path)
        else:
            with open(log_path, "w", encoding="ascii") as fh:
                fh.write(self._frame({"h": {"format": STORE_FORMAT, "version": FORMAT_VERSION}}))
                fh.flush()
                os.fsync(fh.fileno())
        self._log_file = open(log_path, "a", encoding="ascii")
        return self

    def close(self) -> None:
        if self._log_file is not None:
            self._log_file.close()
            self._log_file = None
        if self._dir_lock is not None and self._dir_lock.is_locked:
            self._dir_lock.release()

    def __enter__(self) -> "Store":
        return self.open()

    def __exit__(self, *exc_info) -> None:
        self.close()

    @staticmethod
    def _frame(payload: Mapping) -> str:
        body = canonical_json(payload)
        digest = hashlib.sha256(body.encode("ascii")).hexdigest()
        return f"{digest} {body}\n"

    def _load(self, log_path: Path) -> None:
        """Replay the commit log, truncating a torn or corrupt tail."""
        valid_offset = 0
        records: list[dict] = []
        with open(log_path, "rb") as fh:
            for raw in fh:
                if not raw.endswith(b"\n"):
                    break  # torn tail: interrupted append
                try:
                    digest, body = raw[:-1].split(b" ", 1)
                    if hashlib.sha256(body).hexdigest() != digest.decode("ascii"):
                        break
                    records.append(json.loads(body))
                except (ValueError, UnicodeDecodeError):
                    break
                valid_offset += len(raw)
        with open(log_path, "r+b") as fh:
            fh.truncate(valid_offset)

        if not records or "h" not in records[0]:
            raise bail("INVALID_FORMAT", f"{log_path} is not a recognized store log")
        header = records[0]["h"]
        if header.get("format") != STORE_FORMAT or header.get("version") != FORMAT_VERSION:
            raise bail(
                "INVALID_FORMAT",
                f"unsupported store format {header.get('format')}/{header.get('version')}",
            )
        for record in records[1:]:
            self._apply(record)

    def _apply(self, record: dict) -> None:
        state = self._state
        entities = dict(state.entities)
        versions = dict(state.versions)
        unique = dict(state.unique)
        for kind, entity_id, version, data in record["writes"]:
            by_id = dict(entities.get(kind, {}))
            old = by_id.get(entity_id)
            if old is not None:
                old_key = _unique_key(self.unique_fields, kind, old)
                if old_key is not None:
                    unique.pop(old_key, None)
            by_id[entity_id] = data
            entities[kind] = by_id
            versions[(kind, entity_id)] = version
            new_key = _unique_key(self.unique_fields, kind, data)
            if new_key is not None:
                unique[new_key] = entity_id
        for seq, ts, actor, action, entity_kind, entity_id, before, after in record["audit"]:
            self._audit.append(
                AuditEntry(seq, ts, actor, action, entity_kind, entity_id, before, after)
            )
            self._next_seq = seq + 1
        self._commit_count = record["c"]
        self._state = StoreState(entities, versions, unique)

    # -- reads -------------------------------------------------------------

    @property
    def state(self) -> StoreState:
        """Current committed snapshot; stable for as long as the caller holds it."""
        return self._state

    @property
    def commit_count(self) -> int:
        return self._commit_count

    @property
    def last_seq(self) -> int:
        return self._next_seq - 1

    # -- commit pipeline ----------------------------------------------------

    def commit(self, writes: Sequence[Write], audit: Sequence[AuditDraft]) -> int:
        """Apply a changeset atomically and durably; returns the commit id.

        Every write must be covered by an audit entry for the same entity so
        that replaying audit after-snapshots reconstructs the state.
        """
        if self._log_file is None:
            raise bail("STORE_CLOSED", "store is not open")
        if not writes and not audit:
            raise bail("CONSTRAINT_VIOLATION", "empty changeset")
        audited = {(d.entity_kind, d.entity_id) for d in audit}
        for w in writes:
            if (w.kind, w.entity_id) not in audited:
                raise bail(
                    "CONSTRAINT_VIOLATION",
                    f"write to {w.kind}/{w.entity_id} has no audit entry",
                )

        with self._commit_lock:
            state = self._state
            seen: set[tuple[str, str]] = set()
            claimed_keys: set[tuple] = set()
            for w in writes:
                ident = (w.kind, w.entity_id)
                if ident in seen:
                    raise bail("CONSTRAINT_VIOLATION", f"duplicate write to {w.kind}/{w.entity_id}")
                seen.add(ident)
                current = state.version(w.kind, w.entity_id)
                if current != w.expected_version:
                    raise bail(
                        "CONFLICT",
                        f"{w.kind}/{w.entity_id} was modified concurrently "
                        f"(expected version {w.expected_version}, found {current})",
                        kind=w.kind,
                        entity_id=w.entity_id,
                    )
                key = _unique_key(self.unique_fields, w.kind, w.data)
                if key is not None:
                    holder = state.unique.get(key)
                    if (holder is not None and holder != w.entity_id) or key in claimed_keys:
                        raise bail(
                            "CONSTRAINT_VIOLATION",
                            f"unique key {key[1:]} already in use for {w.kind}",
                            kind=w.kind,
                            fields=list(self.unique_fields[w.kind]),
                        )
                    claimed_keys.add(key)

            commit_id = self._commit_count + 1
            ts = _utcnow_iso()
            seq = self._next_seq
            audit_rows = []
            for draft in audit:
                audit_rows.append(
                    [
                        seq,
                        ts,
                        draft.actor,
                        draft.action,
                        draft.entity_kind,
                        draft.entity_id,
                        self._bounded_snapshot(draft.before),
                        self._bounded_snapshot(draft.after),
                    ]
                )
                seq += 1
            record = {
                "c": commit_id,
                "ts": ts,
                "writes": [
                    [w.kind, w.entity_id, w.expected_version + 1, dict(w.data)] for w in writes
                ],
                "audit": audit_rows,
            }
            line = self._frame(record)
            self._log_file.write(line)
            self._log_file.flush()
            os.fsync(self._log_file.fileno())
            self._apply(record)
            return commit_id

    def _bounded_snapshot(self, snapshot: Mapping[str, Any] | None) -> dict | None:
        if snapshot is None:
            return None
        data = dict(snapshot)
        encoded = canonical_json(data)
        if len(encoded.encode("ascii")) <= SNAPSHOT_LIMIT:
            return data
        return {"overflow_blob": self.put_blob(encoded.encode("ascii"))}

    def resolve_snapshot(self, snapshot: Mapping[str, Any] | None) -> dict | None:
        """Expand an overflow reference back into the full snapshot."""
        if snapshot is None:
            return None
        if set(snapshot.keys()) == {"overflow_blob"}:
            return json.loads(self.get_blob(snapshot["overflow_blob"]))
        return dict(snapshot)

    # -- blobs ---------------------------------------------------------------

    def _blob_path(self, digest: str) -> Path:
        return self.data_dir / BLOB_DIR / digest[:2] / digest

    def put_blob(self, data: bytes) -> str:
        """Store bytes content-addressed; returns the sha256 hex digest."""
        if not data:
            raise bail("EMPTY_PAYLOAD", "blob payload is empty")
        digest = hashlib.sha256(data).hexdigest()
        path = self._blob_path(digest)
        if path.exists():
            return digest
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
        return digest

    def get_blob(self, digest: str) -> bytes:
        path = self._blob_path(digest)
        if not path.exists():
            raise bail("UNKNOWN_BLOB", f"no blob {digest}")
        return path.read_bytes()

    def has_blob(self, digest: str) -> bool:
        return self._blob_path(digest).exists()

    # -- audit ----------------------------------------------------------------

    def audit_range(self, from_seq: int, to_seq: int) -> list[AuditEntry]:
        """Entries with seq in [from_seq, to_seq], in seq order."""
        if from_seq > to_seq or from_seq < 1:
            raise bail("INVALID_RANGE", f"bad audit range {from_seq}..{to_seq}")
        return [e for e in self._audit if from_seq <= e.seq <= to_seq]

    def audit_all(self) -> list[AuditEntry]:
        return list(self._audit)

    def replay_from_audit(self) -> dict[str, dict[str, dict]]:
        """Rebuild entity state purely from audit after-snapshots (seq order)."""
        entities: dict[str, dict[str, dict]] = {}
        for entry in self._audit:
            after = self.resolve_snapshot(entry.after)
            if after is not None:
                entities.setdefault(entry.entity_kind, {})[entry.entity_id] = after
        return entities

    # -- archive ----------------------------------------------------------------

    def export_archive(self) -> bytes:
        """Deterministic full-state archive: commit log plus referenced blobs."""
        commits: list[dict] = []
        log_path = self.data_dir / LOG_NAME
        with open(log_path, "rb") as fh:
            for raw in fh:
                _, body = raw[:-1].split(b" ", 1)
                record = json.loads(body)
                if "h" in record:
                    continue
                commits.append(record)
        blobs: dict[str, str] = {}
        blob_root = self.data_dir / BLOB_DIR
        for path in sorted(blob_root.rglob("*")):
            if path.is_file() and not path.name.endswith(".tmp"):
                blobs[path.name] = base64.b64encode(path.read_bytes()).decode("ascii")
        archive = {
            "format": ARCHIVE_FORMAT,
            "version": FORMAT_VERSION,
            "commits": commits,
            "blobs": blobs,
        }
        return canonical_json(archive).encode("ascii")

    @classmethod
    def restore_archive(
        cls,
        data_dir: str | os.PathLike,
        archive: bytes,
        unique_fields: Mapping[str, Sequence[str]] | None = None,
    ) -> "Store":
        """Materialize an exported archive into a fresh data dir and open it."""
        payload = json.loads(archive)
        if payload.get("format") != ARCHIVE_FORMAT or payload.get("version") != FORMAT_VERSION:
            raise bail("INVALID_FORMAT", "unsupported archive format")
        data_dir = Path(data_dir)
        if (data_dir / LOG_NAME).exists():
            raise bail("CONSTRAINT_VIOLATION", f"data dir {data_dir} already holds a store")
        store = cls(data_dir, unique_fields=unique_fields).open()
        for digest, encoded in payload["blobs"].items():
            store.put_blob(base64.b64decode(encoded))
        assert store._log_file is not None
        for record in payload["commits"]:
            store._log_file.write(cls._frame(record))
            store._apply(record)
        store._log_file.flush()
        os.fsync(store._log_file.fileno())
        return store
