"""The monitoring-finding workflow: submit, follow up, resolve, list.

A finding moves OPEN -> FOLLOW_UP -> RESOLVED (FOLLOW_UP may be skipped) and
never backwards. Submitting a finding does not touch the linked item's
condition; the facilities admin records that separately via a status change.
"""

from __future__ import annotations

from datetime import date

from . import records
from .domain import Condition, FindingStatus, PhotoView, Role, normalize_barcode
from .errors import bail
from .registry import RegistryService
from .storage import AuditDraft, Store, Write

SUBMIT_ROLES = (Role.WORK_UNIT, Role.FACILITIES_ADMIN)


class MonitoringService:
    def __init__(self, store: Store, registry: RegistryService):
        self.store = store
        self.registry = registry

    def submit_finding(
        self,
        *,
        reporter: dict,
        finding: str,
        recommendation: str,
        on: date,
        campus_code: str,
        location_code: str,
        barcode: str | None = None,
        object_name: str | None = None,
        object_description: str | None = None,
        photos: list[dict] | None = None,
    ) -> dict:
        if Role(reporter["role"]) not in SUBMIT_ROLES:
            raise bail("FORBIDDEN", f"role {reporter['role']} may not submit findings")
        if not (finding or "").strip():
            raise bail("EMPTY_FINDING", "finding text is required")
        state = self.store.state
        location = records.location_by_address(state, campus_code, location_code)
        if location is None:
            raise bail("UNKNOWN_LOCATION", f"no location {campus_code}/{location_code}")
        item = None
        if barcode is not None:
            item = records.item_by_barcode(state, normalize_barcode(barcode))
            if item is None:
                raise bail("UNKNOWN_ITEM", f"no item with barcode {barcode!r}")
        name = (object_name or "").strip()
        if not name:
            if item is None:
                raise bail("EMPTY_OBJECT_NAME", "a finding without a barcode needs an object name")
            name = item["name"]
        record = {
            "id": records.new_id(),
            "barcode": item["barcode"] if item else None,
            "object_name": name,
            "object_description": object_description,
            "date": records.iso(on),
            "location_id": location["id"],
            "finding": finding.strip(),
            "recommendation": recommendation,
            "reporter": reporter["id"],
            "status": FindingStatus.OPEN.value,
            "follow_up_note": None,
            "resolution_date": None,
            "photos": list(photos or []),
        }
        self.store.commit(
            [Write(records.MONITORING, record["id"], record)],
            [
                AuditDraft(
                    reporter["id"], "finding.submit", records.MONITORING, record["id"], None, record
                )
            ],
        )
        return record

    def _record(self, state, record_id: str) -> dict:
        record = state.get(records.MONITORING, record_id)
        if record is None:
            raise bail("UNKNOWN_RECORD", f"no monitoring record {record_id!r}")
        return record

    def _commit_record(self, state, before: dict, after: dict, action: str, actor: str) -> None:
        self.store.commit(
            [
                Write(
                    records.MONITORING,
                    before["id"],
                    after,
                    state.version(records.MONITORING, before["id"]),
                )
            ],
            [AuditDraft(actor, action, records.MONITORING, before["id"], before, after)],
        )

    def follow_up(self, record_id: str, note: str, actor: dict) -> dict:
        if Role(actor["role"]) is not Role.FACILITIES_ADMIN:
            raise bail("FORBIDDEN", "only the facilities admin may follow up findings")
        state = self.store.state
        record = self._record(state, record_id)
        if record["status"] != FindingStatus.OPEN.value:
            raise bail("WRONG_STATE", f"record is {record['status']}, follow-up needs OPEN")
        after = {**record, "status": FindingStatus.FOLLOW_UP.value, "follow_up_note": note}
        self._commit_record(state, record, after, "finding.follow_up", actor["id"])
        return after

    def resolve(self, record_id: str, resolution_date: date, actor: dict) -> dict:
        if Role(actor["role"]) is not Role.FACILITIES_ADMIN:
            raise bail("FORBIDDEN", "only the facilities admin may resolve findings")
        state = self.store.state
        record = self._record(state, record_id)
        if record["status"] == FindingStatus.RESOLVED.value:
            raise bail("WRONG_STATE", "record is already resolved")
        if resolution_date < records.parse_date(record["date"]):
            raise bail("INVALID_DATE_ORDER", "resolution date precedes the finding date")
        after = {
            **record,
            "status": FindingStatus.RESOLVED.value,
            "resolution_date": records.iso(resolution_date),
        }
        self._commit_record(state, record, after, "finding.resolve", actor["id"])
        return after

    def get_record(self, record_id: str, viewer: dict | None = None) -> dict:
        record = self._record(self.store.state, record_id)
        if viewer is not None and not self._visible(record, viewer):
            raise bail("FORBIDDEN", "record is outside your unit's scope")
        return record

    @staticmethod
    def _visible(record: dict, viewer: dict) -> bool:
        if viewer["role"] != Role.WORK_UNIT.value:
            return True
        return record["reporter"] == viewer["id"] or record["location_id"] in viewer.get(
            "assigned_locations", []
        )

    def attach_photo(
        self, record_id: str, view: PhotoView | str, data: bytes, media_type: str, actor: str
    ) -> dict:
        state = self.store.state
        record = self._record(state, record_id)
        photo = self.registry.store_photo(data, view, media_type)
        photos = [p for p in record["photos"] if p["view"] != photo["view"]] + [photo]
        after = {**record, "photos": sorted(photos, key=lambda p: p["view"])}
        self._commit_record(state, record, after, "photo.upload", actor)
        return photo

    def list_records(
        self,
        status: FindingStatus | str | None = None,
        campus: str | None = None,
        location: str | None = None,
        condition_of_item: Condition | str | None = None,
        date_from: date | None = None,
        date_to: date | None = None,
        reporter: str | None = None,
        viewer: dict | None = None,
    ) -> list[dict]:
        """Conjunctive filter, ordered by date descending then id.

        ``reporter`` filters by username; ``condition_of_item`` keeps records
        whose linked item currently has that condition.
        """
        if date_from is not None and date_to is not None and date_from > date_to:
            raise bail("INVALID_PERIOD", "period start is after its end")
        state = self.store.state
        reporter_id = None
        if reporter is not None:
            user = records.user_by_username(state, reporter)
            reporter_id = user["id"] if user else "\0no-such-user"
        rows = []
        for _, record in state.all(records.MONITORING):
            if status is not None and record["status"] != FindingStatus(status).value:
                continue
            if campus is not None and records.campus_code_of_location(state, record["location_id"]) != campus:
                continue
            if location is not None and records.location_code_of(state, record["location_id"]) != location:
                continue
            if condition_of_item is not None:
                if record["barcode"] is None:
                    continue
                item = records.item_by_barcode(state, record["barcode"])
                if item is None or item["condition"] != Condition(condition_of_item).value:
                    continue
            record_date = records.parse_date(record["date"])
            if date_from is not None and record_date < date_from:
                continue
            if date_to is not None and record_date > date_to:
                continue
            if reporter_id is not None and record["reporter"] != reporter_id:
                continue
            if viewer is not None and not self._visible(record, viewer):
                continue
            rows.append(record)
        rows.sort(key=lambda r: r["id"])
        rows.sort(key=lambda r: r["date"], reverse=True)  # stable: date desc, id asc
        return rows
