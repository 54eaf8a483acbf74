"""Processing operations: transfers, condition changes, repairs, warranty and
maintenance queries.

An item is the aggregate root of its own history: transfer, status-change and
repair records are embedded in the item entity, so each operation is a single
atomic write (one audit entry) and concurrent mutations of the same item
serialize through the store's version check.
"""

from __future__ import annotations

from datetime import date, timedelta
from decimal import Decimal, InvalidOperation

from . import records
from .domain import (
    Condition,
    LifecycleEvent,
    TERMINAL_CONDITIONS,
    normalize_barcode,
    next_condition,
    warranty_status,
    WarrantyState,
)
from .errors import bail
from .storage import AuditDraft, Store, Write


def open_repair_of(item: dict) -> dict | None:
    for repair in item["repairs"]:
        if repair["completed_date"] is None:
            return repair
    return None


def maintenance_anchor(item: dict) -> date:
    """Last completed repair date, else the purchase date."""
    completed = [r["completed_date"] for r in item["repairs"] if r["completed_date"] is not None]
    if completed:
        return records.parse_date(max(completed))
    return records.parse_date(item["purchase_date"])


class LifecycleService:
    def __init__(self, store: Store):
        self.store = store

    def _item(self, state, barcode: str) -> dict:
        item = records.item_by_barcode(state, normalize_barcode(barcode))
        if item is None:
            raise bail("UNKNOWN_ITEM", f"no item with barcode {barcode!r}")
        return item

    def _commit_item(self, state, before: dict, after: dict, action: str, actor: str) -> None:
        self.store.commit(
            [Write(records.ITEM, before["id"], after, state.version(records.ITEM, before["id"]))],
            [AuditDraft(actor, action, records.ITEM, before["id"], before, after)],
        )

    # -- transfers ---------------------------------------------------------------

    def transfer_item(
        self,
        barcode: str,
        to_campus_code: str,
        to_location_code: str,
        actor: str,
        on: date,
        note: str | None = None,
    ) -> dict:
        state = self.store.state
        item = self._item(state, barcode)
        if item["condition"] in TERMINAL_CONDITIONS:
            raise bail("TERMINAL_ITEM", f"item is {item['condition']} and cannot be transferred")
        target = records.location_by_address(state, to_campus_code, to_location_code)
        if target is None or not target["active"]:
            raise bail("UNKNOWN_LOCATION", f"no active location {to_campus_code}/{to_location_code}")
        if target["id"] == item["location_id"]:
            raise bail("SAME_LOCATION", "item is already at that location")
        transfer = {
            "id": records.new_id(),
            "barcode": item["barcode"],
            "from_location_id": item["location_id"],
            "to_location_id": target["id"],
            "date": records.iso(on),
            "actor": actor,
            "note": note,
        }
        after = {
            **item,
            "location_id": target["id"],
            "transfers": item["transfers"] + [transfer],
        }
        self._commit_item(state, item, after, "item.transfer", actor)
        return transfer

    # -- status changes ------------------------------------------------------------

    def change_status(
        self,
        barcode: str,
        event: LifecycleEvent | str,
        actor: str,
        on: date,
        note: str | None = None,
    ) -> dict:
        event = LifecycleEvent(event)
        state = self.store.state
        item = self._item(state, barcode)
        target = next_condition(Condition(item["condition"]), event)
        if event is LifecycleEvent.REPAIR_COMPLETE and open_repair_of(item) is not None:
            raise bail(
                "REPAIR_ALREADY_OPEN",
                "item has an open repair; close it via complete_repair",
            )
        change = {
            "id": records.new_id(),
            "barcode": item["barcode"],
            "event": event.value,
            "from": item["condition"],
            "to": target.value,
            "date": records.iso(on),
            "actor": actor,
            "note": note,
        }
        after = {
            **item,
            "condition": target.value,
            "status_changes": item["status_changes"] + [change],
        }
        self._commit_item(state, item, after, "item.status", actor)
        return change

    # -- repairs ----------------------------------------------------------------------

    def open_repair(self, barcode: str, on: date, description: str, actor: str) -> dict:
        state = self.store.state
        item = self._item(state, barcode)
        if item["condition"] not in (Condition.LIGHT_DAMAGE.value, Condition.HEAVY_DAMAGE.value):
            raise bail("NOT_DAMAGED", f"item condition is {item['condition']}, not a damage state")
        if open_repair_of(item) is not None:
            raise bail("REPAIR_ALREADY_OPEN", "item already has an open repair")
        repair = {
            "id": records.new_id(),
            "barcode": item["barcode"],
            "opened_date": records.iso(on),
            "completed_date": None,
            "description": description,
            "cost": None,
            "actor": actor,
        }
        after = {**item, "repairs": item["repairs"] + [repair]}
        self._commit_item(state, item, after, "repair.open", actor)
        return repair

    def find_repair(self, repair_id: str) -> tuple[dict, dict] | None:
        """Locate a repair by id; returns (item, repair) or None."""
        for _, item in self.store.state.all(records.ITEM):
            for repair in item["repairs"]:
                if repair["id"] == repair_id:
                    return item, repair
        return None

    def complete_repair(
        self, repair_id: str, completed_date: date, cost: str | None, actor: str
    ) -> dict:
        state = self.store.state
        found = self.find_repair(repair_id)
        if found is None:
            raise bail("UNKNOWN_REPAIR", f"no repair {repair_id!r}")
        item, repair = found
        if repair["completed_date"] is not None:
            raise bail("ALREADY_COMPLETED", f"repair {repair_id} is already completed")
        if completed_date < records.parse_date(repair["opened_date"]):
            raise bail("INVALID_DATE_ORDER", "completion precedes the repair opening date")
        if cost is not None:
            try:
                if Decimal(cost) < 0:
                    raise bail("INVALID_COST", "repair cost must be non-negative")
            except InvalidOperation:
                raise bail("INVALID_COST", f"cost {cost!r} is not a decimal") from None
        # the repair closure and the REPAIR_COMPLETE condition change commit together
        target = next_condition(Condition(item["condition"]), LifecycleEvent.REPAIR_COMPLETE)
        done = {**repair, "completed_date": records.iso(completed_date), "cost": cost}
        change = {
            "id": records.new_id(),
            "barcode": item["barcode"],
            "event": LifecycleEvent.REPAIR_COMPLETE.value,
            "from": item["condition"],
            "to": target.value,
            "date": records.iso(completed_date),
            "actor": actor,
            "note": f"repair {repair_id} completed",
        }
        after = {
            **item,
            "condition": target.value,
            "repairs": [done if r["id"] == repair_id else r for r in item["repairs"]],
            "status_changes": item["status_changes"] + [change],
        }
        self._commit_item(state, item, after, "repair.complete", actor)
        return done

    # -- warranty and maintenance -----------------------------------------------------

    def warranty_report(self, as_of: date) -> dict:
        """Partition non-terminal items by warranty position at ``as_of``."""
        in_warranty: list[tuple[dict, int]] = []
        expired: list[tuple[dict, int]] = []
        none: list[dict] = []
        for item in records.items_sorted(self.store.state):
            if item["condition"] in TERMINAL_CONDITIONS:
                continue
            status = warranty_status(records.parse_date(item["warranty_end_date"]), as_of)
            if status.state is WarrantyState.IN_WARRANTY:
                in_warranty.append((item, status.days))
            elif status.state is WarrantyState.EXPIRED:
                expired.append((item, status.days))
            else:
                none.append(item)
        in_warranty.sort(key=lambda pair: (pair[1], pair[0]["barcode"]))
        expired.sort(key=lambda pair: (pair[1], pair[0]["barcode"]))
        return {"in_warranty": in_warranty, "expired": expired, "none": none}

    def maintenance_due(self, as_of: date) -> list[tuple[dict, int]]:
        """Items whose maintenance interval has lapsed, most overdue first."""
        due: list[tuple[dict, int]] = []
        for item in records.items_sorted(self.store.state):
            if item["condition"] in TERMINAL_CONDITIONS:
                continue
            interval = item["maintenance_interval_days"]
            if interval is None:
                continue
            due_date = maintenance_anchor(item) + timedelta(days=interval)
            if due_date <= as_of:
                due.append((item, (as_of - due_date).days))
        due.sort(key=lambda pair: (-pair[1], pair[0]["barcode"]))
        return due
