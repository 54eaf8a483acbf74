"""JSON-facing representations of stored entities.

Both the HTTP API and the CLI's ``--output json`` go through these functions,
so a value printed by the CLI decodes identically to the API response for the
same query. Internal entity ids for references are replaced by their codes;
user ids become usernames; password digests never leave this layer.
"""

from __future__ import annotations

from . import records
from .storage import AuditEntry, StoreState


def actor_name(state: StoreState, actor_id: str) -> str:
    user = state.get(records.USER, actor_id)
    return user["username"] if user else actor_id


def _location_fields(state: StoreState, location_id: str, prefix: str = "") -> dict:
    return {
        f"{prefix}campus_code": records.campus_code_of_location(state, location_id),
        f"{prefix}location_code": records.location_code_of(state, location_id),
    }


def item_wire(state: StoreState, item: dict) -> dict:
    return {
        "barcode": item["barcode"],
        "name": item["name"],
        "specification": item["specification"],
        "category_code": records.taxonomy_code_of(state, item["category_id"]),
        "type_code": records.taxonomy_code_of(state, item["type_id"]),
        "brand_code": records.taxonomy_code_of(state, item["brand_id"]),
        "source_code": records.taxonomy_code_of(state, item["source_id"]),
        "purchase_date": item["purchase_date"],
        "warranty_end_date": item["warranty_end_date"],
        "maintenance_interval_days": item["maintenance_interval_days"],
        "condition": item["condition"],
        **_location_fields(state, item["location_id"]),
        "custodian": item["custodian"],
        "registered_date": item["registered_date"],
        "photos": item["photos"],
    }


def item_detail_wire(state: StoreState, item: dict) -> dict:
    return {
        **item_wire(state, item),
        "transfers": [transfer_wire(state, t) for t in item["transfers"]],
        "status_changes": [status_change_wire(state, s) for s in item["status_changes"]],
        "repairs": [repair_wire(state, r) for r in item["repairs"]],
    }


def transfer_wire(state: StoreState, transfer: dict) -> dict:
    return {
        "id": transfer["id"],
        "barcode": transfer["barcode"],
        **_location_fields(state, transfer["from_location_id"], "from_"),
        **_location_fields(state, transfer["to_location_id"], "to_"),
        "date": transfer["date"],
        "actor": actor_name(state, transfer["actor"]),
        "note": transfer["note"],
    }


def status_change_wire(state: StoreState, change: dict) -> dict:
    return {
        "id": change["id"],
        "barcode": change["barcode"],
        "event": change["event"],
        "from": change["from"],
        "to": change["to"],
        "date": change["date"],
        "actor": actor_name(state, change["actor"]),
        "note": change["note"],
    }


def repair_wire(state: StoreState, repair: dict) -> dict:
    return {
        "id": repair["id"],
        "barcode": repair["barcode"],
        "opened_date": repair["opened_date"],
        "completed_date": repair["completed_date"],
        "description": repair["description"],
        "cost": repair["cost"],
        "actor": actor_name(state, repair["actor"]),
    }


def finding_wire(state: StoreState, record: dict) -> dict:
    return {
        "id": record["id"],
        "barcode": record["barcode"],
        "object_name": record["object_name"],
        "object_description": record["object_description"],
        "date": record["date"],
        **_location_fields(state, record["location_id"]),
        "finding": record["finding"],
        "recommendation": record["recommendation"],
        "reporter": actor_name(state, record["reporter"]),
        "status": record["status"],
        "follow_up_note": record["follow_up_note"],
        "resolution_date": record["resolution_date"],
        "photos": record["photos"],
    }


def reference_wire(state: StoreState, kind: str, ref: dict) -> dict:
    if kind == "CAMPUS":
        return {k: ref[k] for k in ("code", "name", "address", "active")}
    if kind == "LOCATION":
        campus = state.get(records.CAMPUS, ref["campus_id"])
        return {
            "code": ref["code"],
            "name": ref["name"],
            "floor": ref["floor"],
            "campus_code": campus["code"] if campus else None,
            "active": ref["active"],
        }
    return {k: ref[k] for k in ("code", "name", "active")}


def user_wire(state: StoreState, user: dict) -> dict:
    assigned = []
    for location_id in user["assigned_locations"]:
        assigned.append(_location_fields(state, location_id))
    return {
        "username": user["username"],
        "role": user["role"],
        "work_unit_name": user["work_unit_name"],
        "assigned_locations": assigned,
        "active": user["active"],
    }


def warranty_report_wire(state: StoreState, report: dict) -> dict:
    return {
        "in_warranty": [
            {"item": item_wire(state, item), "days_remaining": days}
            for item, days in report["in_warranty"]
        ],
        "expired": [
            {"item": item_wire(state, item), "days_since": days} for item, days in report["expired"]
        ],
        "none": [item_wire(state, item) for item in report["none"]],
    }


def maintenance_due_wire(state: StoreState, due: list) -> list[dict]:
    return [{"item": item_wire(state, item), "days_overdue": days} for item, days in due]


def location_view_wire(state: StoreState, view: dict) -> dict:
    return {
        "location": reference_wire(state, "LOCATION", view["location"]),
        "items": [item_wire(state, i) for i in view["items"]],
        "open_findings": [finding_wire(state, r) for r in view["open_findings"]],
    }


def audit_wire(state: StoreState, entry: AuditEntry) -> dict:
    return {
        "seq": entry.seq,
        "timestamp": entry.timestamp,
        "actor": actor_name(state, entry.actor),
        "action": entry.action,
        "entity_kind": entry.entity_kind,
        "entity_id": entry.entity_id,
    }
