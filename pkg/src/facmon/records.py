"""Entity kinds, uniqueness schema, and read helpers shared by the services.

Entities live in the store as plain JSON-friendly dicts (dates as ISO
strings); the helpers here centralize lookups so registry, lifecycle,
monitoring and reporting agree on how references resolve.
"""

from __future__ import annotations

import uuid
from datetime import date
from typing import Iterator

from .storage import Store, StoreState

CAMPUS = "campus"
LOCATION = "location"
TAXONOMY = "taxonomy"
ITEM = "item"
TRANSFER = "transfer"
REPAIR = "repair"
STATUS_CHANGE = "status_change"
MONITORING = "monitoring"
USER = "user"
SESSION = "session"

# Uniqueness enforced by the store at commit time, so it holds under
# concurrent writers. Taxonomy codes are unique per kind; location codes per
# campus.
UNIQUE_FIELDS: dict[str, tuple[str, ...]] = {
    CAMPUS: ("code",),
    LOCATION: ("campus_id", "code"),
    TAXONOMY: ("kind", "code"),
    ITEM: ("barcode",),
    USER: ("username",),
    SESSION: ("token",),
}


def open_store(data_dir) -> Store:
    return Store(data_dir, unique_fields=UNIQUE_FIELDS).open()


def new_id() -> str:
    return uuid.uuid4().hex


def iso(value: date | None) -> str | None:
    return value.isoformat() if value is not None else None


def parse_date(value: str | None) -> date | None:
    return date.fromisoformat(value) if value is not None else None


# -- reference lookups -------------------------------------------------------


def campus_by_code(state: StoreState, code: str) -> dict | None:
    return state.find_unique(CAMPUS, code)


def location_by_address(state: StoreState, campus_code: str, location_code: str) -> dict | None:
    campus = campus_by_code(state, campus_code)
    if campus is None:
        return None
    return state.find_unique(LOCATION, campus["id"], location_code)


def taxonomy_by_code(state: StoreState, kind: str, code: str) -> dict | None:
    return state.find_unique(TAXONOMY, kind, code)


def item_by_barcode(state: StoreState, barcode: str) -> dict | None:
    return state.find_unique(ITEM, barcode)


def user_by_username(state: StoreState, username: str) -> dict | None:
    return state.find_unique(USER, username)


def location_code_of(state: StoreState, location_id: str) -> str | None:
    loc = state.get(LOCATION, location_id)
    return loc["code"] if loc else None


def campus_code_of_location(state: StoreState, location_id: str) -> str | None:
    loc = state.get(LOCATION, location_id)
    if loc is None:
        return None
    campus = state.get(CAMPUS, loc["campus_id"])
    return campus["code"] if campus else None


def taxonomy_code_of(state: StoreState, taxonomy_id: str) -> str | None:
    ref = state.get(TAXONOMY, taxonomy_id)
    return ref["code"] if ref else None


def items_sorted(state: StoreState) -> Iterator[dict]:
    """All items in barcode order, the canonical listing order."""
    return iter(sorted((data for _, data in state.all(ITEM)), key=lambda d: d["barcode"]))
