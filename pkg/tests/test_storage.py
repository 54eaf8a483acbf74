"""Storage contract: atomic commits, optimistic concurrency, blobs, audit, archive."""

import json
import threading

import pytest

from facmon.errors import DomainError
from facmon.records import open_store
from facmon.storage import LOG_NAME, AuditDraft, Store, Write

pytestmark = pytest.mark.filterwarnings("ignore::pytest.PytestUnraisableExceptionWarning")


@pytest.fixture
def store(tmp_path):
    s = open_store(tmp_path / "data")
    yield s
    s.close()


def write_item(barcode, version=0, **extra):
    data = {"id": f"id-{barcode}", "barcode": barcode, **extra}
    return Write("item", data["id"], data, expected_version=version)


def audit_for(write, action="item.register", actor="system", before=None):
    return AuditDraft(actor, action, write.kind, write.entity_id, before, dict(write.data))


def test_commit_makes_write_and_audit_visible_together(store):
    w = write_item("B-0001")
    store.commit([w], [audit_for(w)])
    assert store.state.get("item", "id-B-0001")["barcode"] == "B-0001"
    entries = store.audit_range(1, 10)
    assert len(entries) == 1
    assert entries[0].action == "item.register"
    assert entries[0].after["barcode"] == "B-0001"


def test_commit_requires_audit_coverage(store):
    w = write_item("B-0001")
    with pytest.raises(DomainError) as exc:
        store.commit([w], [])
    assert exc.value.code == "CONSTRAINT_VIOLATION"
    assert store.state.get("item", "id-B-0001") is None


def test_stale_version_conflicts(store):
    w = write_item("B-0001")
    store.commit([w], [audit_for(w)])
    # two writers both read version 1 and race; the second loses
    first = write_item("B-0001", version=1, name="x")
    second = write_item("B-0001", version=1, name="y")
    store.commit([first], [audit_for(first)])
    with pytest.raises(DomainError) as exc:
        store.commit([second], [audit_for(second)])
    assert exc.value.code == "CONFLICT"


def test_unique_key_enforced_at_commit(store):
    w1 = write_item("B-0001")
    store.commit([w1], [audit_for(w1)])
    dup = Write("item", "other-id", {"id": "other-id", "barcode": "B-0001"}, 0)
    with pytest.raises(DomainError) as exc:
        store.commit([dup], [audit_for(dup)])
    assert exc.value.code == "CONSTRAINT_VIOLATION"


def test_unique_key_freed_on_update(store):
    w1 = write_item("B-0001")
    store.commit([w1], [audit_for(w1)])
    moved = Write("item", "id-B-0001", {"id": "id-B-0001", "barcode": "B-0002"}, 1)
    store.commit([moved], [audit_for(moved)])
    reused = Write("item", "second", {"id": "second", "barcode": "B-0001"}, 0)
    store.commit([reused], [audit_for(reused)])
    assert store.state.find_unique("item", "B-0001")["id"] == "second"
    assert store.state.find_unique("item", "B-0002")["id"] == "id-B-0001"


def test_concurrent_writers_exactly_one_winner(store):
    w = write_item("B-0001")
    store.commit([w], [audit_for(w)])
    results = []

    def attempt(tag):
        update = Write("item", "id-B-0001", {"id": "id-B-0001", "barcode": "B-0001", "tag": tag}, 1)
        try:
            store.commit([update], [audit_for(update, action="item.transfer")])
            results.append(("ok", tag))
        except DomainError as exc:
            results.append((exc.code, tag))

    threads = [threading.Thread(target=attempt, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    outcomes = [r[0] for r in results]
    assert outcomes.count("ok") == 1
    assert outcomes.count("CONFLICT") == 7


def test_blob_round_trip(store):
    payload = b"\x89PNG fake bytes" * 100
    digest = store.put_blob(payload)
    assert store.get_blob(digest) == payload
    assert store.put_blob(payload) == digest  # stored once, same address


def test_blob_unknown_and_empty(store):
    with pytest.raises(DomainError) as exc:
        store.get_blob("0" * 64)
    assert exc.value.code == "UNKNOWN_BLOB"
    with pytest.raises(DomainError) as exc:
        store.put_blob(b"")
    assert exc.value.code == "EMPTY_PAYLOAD"


def test_audit_range_validation(store):
    assert store.audit_range(1, 100) == []
    with pytest.raises(DomainError) as exc:
        store.audit_range(5, 4)
    assert exc.value.code == "INVALID_RANGE"


def test_seq_strictly_increasing_no_gaps(store):
    for i in range(5):
        w = write_item(f"B-{i:04d}")
        store.commit([w], [audit_for(w)])
    seqs = [e.seq for e in store.audit_range(1, 100)]
    assert seqs == [1, 2, 3, 4, 5]
    assert store.last_seq == 5


def test_durability_across_reopen(tmp_path, store):
    w = write_item("B-0001")
    store.commit([w], [audit_for(w)])
    store.close()
    reopened = open_store(store.data_dir)
    try:
        assert reopened.state.get("item", "id-B-0001") is not None
        assert len(reopened.audit_range(1, 10)) == 1
    finally:
        reopened.close()


def test_torn_tail_discarded_atomically(tmp_path):
    data_dir = tmp_path / "data"
    s = open_store(data_dir)
    w1 = write_item("B-0001")
    s.commit([w1], [audit_for(w1)])
    w2 = write_item("B-0002")
    s.commit([w2], [audit_for(w2)])
    s.close()

    # simulate a crash between write and durability acknowledgment: the last
    # log line is only partially on disk
    log = data_dir / LOG_NAME
    raw = log.read_bytes()
    log.write_bytes(raw[: len(raw) - 17])

    s = open_store(data_dir)
    try:
        # the torn commit is invisible as a whole: neither entity nor audit entry
        assert s.state.get("item", "id-B-0001") is not None
        assert s.state.get("item", "id-B-0002") is None
        assert [e.seq for e in s.audit_range(1, 10)] == [1]
        # and the store keeps accepting commits afterwards
        w3 = write_item("B-0003")
        s.commit([w3], [audit_for(w3)])
        assert [e.seq for e in s.audit_range(1, 10)] == [1, 2]
    finally:
        s.close()


def test_corrupt_tail_checksum_discarded(tmp_path):
    data_dir = tmp_path / "data"
    s = open_store(data_dir)
    w1 = write_item("B-0001")
    s.commit([w1], [audit_for(w1)])
    s.close()

    log = data_dir / LOG_NAME
    lines = log.read_bytes().splitlines(keepends=True)
    flipped = lines[-1].replace(b"B-0001", b"B-0999")  # payload no longer matches checksum
    log.write_bytes(b"".join(lines[:-1]) + flipped)

    s = open_store(data_dir)
    try:
        assert s.state.get("item", "id-B-0001") is None
        assert s.audit_range(1, 10) == []
    finally:
        s.close()


def test_replay_from_audit_reconstructs_state(store):
    for i in range(4):
        w = write_item(f"B-{i:04d}")
        store.commit([w], [audit_for(w)])
    update = Write("item", "id-B-0000", {"id": "id-B-0000", "barcode": "B-0000", "n": 2}, 1)
    store.commit([update], [audit_for(update, action="item.transfer")])
    assert store.replay_from_audit()["item"] == store.state.entities["item"]


def test_audit_snapshot_overflow_spills_to_blob(store):
    big = {"id": "big", "barcode": "BIG-1", "blob": "x" * (70 * 1024)}
    w = Write("item", "big", big, 0)
    store.commit([w], [audit_for(w)])
    entry = store.audit_range(1, 1)[0]
    assert set(entry.after.keys()) == {"overflow_blob"}
    assert store.resolve_snapshot(entry.after) == big
    assert store.replay_from_audit()["item"]["big"] == big


def test_archive_round_trip_byte_identical(tmp_path, store):
    w1 = write_item("B-0001")
    store.commit([w1], [audit_for(w1)])
    store.put_blob(b"photo bytes")
    w2 = write_item("B-0002")
    store.commit([w2], [audit_for(w2)])

    first = store.export_archive()
    restored = Store.restore_archive(tmp_path / "restore", first, unique_fields=store.unique_fields)
    try:
        assert restored.state.entities == store.state.entities
        assert restored.export_archive() == first
    finally:
        restored.close()


def test_archive_is_versioned(store):
    payload = json.loads(store.export_archive())
    assert payload["format"] == "facmon-archive"
    assert payload["version"] == 1


def test_data_dir_unwritable(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("a file where the data dir's parent should be")
    with pytest.raises(DomainError) as exc:
        open_store(blocker / "data")
    assert exc.value.code == "DATA_DIR_UNWRITABLE"


def test_data_dir_exclusive_lock(tmp_path):
    s1 = open_store(tmp_path / "data")
    try:
        with pytest.raises(DomainError) as exc:
            open_store(tmp_path / "data")
        assert exc.value.code == "DATA_DIR_LOCKED"
    finally:
        s1.close()
    s2 = open_store(tmp_path / "data")  # released lock can be re-acquired
    s2.close()
