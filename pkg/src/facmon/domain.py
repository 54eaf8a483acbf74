"""Pure value types and rules shared by every other module.

No storage, no I/O: everything here is an immutable value or a total/pure
function, safe to call from any number of concurrent callers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date
from enum import Enum

from .errors import bail


class Condition(str, Enum):
    """Current physical condition of a registered item."""

    GOOD = "GOOD"
    LIGHT_DAMAGE = "LIGHT_DAMAGE"
    HEAVY_DAMAGE = "HEAVY_DAMAGE"
    LOST = "LOST"
    DONATED = "DONATED"


class LifecycleEvent(str, Enum):
    """Events that drive condition changes."""

    REPORT_LIGHT_DAMAGE = "REPORT_LIGHT_DAMAGE"
    REPORT_HEAVY_DAMAGE = "REPORT_HEAVY_DAMAGE"
    REPORT_LOST = "REPORT_LOST"
    DONATE = "DONATE"
    REPAIR_COMPLETE = "REPAIR_COMPLETE"
    RECOVER = "RECOVER"


class Role(str, Enum):
    """The three user kinds operating the system."""

    FACILITIES_ADMIN = "FACILITIES_ADMIN"
    WORK_UNIT = "WORK_UNIT"
    LEADERSHIP = "LEADERSHIP"


class PhotoView(str, Enum):
    """Which side of the object a photo shows."""

    FRONT = "FRONT"
    SIDE = "SIDE"
    BACK = "BACK"
    SERIAL = "SERIAL"


class TaxonomyKind(str, Enum):
    """The four reference taxonomies items are classified under."""

    CATEGORY = "CATEGORY"
    TYPE = "TYPE"
    BRAND = "BRAND"
    SOURCE = "SOURCE"


class FindingStatus(str, Enum):
    """Workflow status of a monitoring record."""

    OPEN = "OPEN"
    FOLLOW_UP = "FOLLOW_UP"
    RESOLVED = "RESOLVED"


# Condition transition table. Damage reports and donation move an item out of
# GOOD; a repaired item returns to GOOD; donation is irreversible; a lost item
# may be recovered. Pairs absent from the table are illegal transitions.
TRANSITIONS: dict[tuple[Condition, LifecycleEvent], Condition] = {
    (Condition.GOOD, LifecycleEvent.REPORT_LIGHT_DAMAGE): Condition.LIGHT_DAMAGE,
    (Condition.GOOD, LifecycleEvent.REPORT_HEAVY_DAMAGE): Condition.HEAVY_DAMAGE,
    (Condition.GOOD, LifecycleEvent.REPORT_LOST): Condition.LOST,
    (Condition.GOOD, LifecycleEvent.DONATE): Condition.DONATED,
    (Condition.LIGHT_DAMAGE, LifecycleEvent.REPAIR_COMPLETE): Condition.GOOD,
    (Condition.LIGHT_DAMAGE, LifecycleEvent.REPORT_HEAVY_DAMAGE): Condition.HEAVY_DAMAGE,
    (Condition.LIGHT_DAMAGE, LifecycleEvent.REPORT_LOST): Condition.LOST,
    (Condition.HEAVY_DAMAGE, LifecycleEvent.REPAIR_COMPLETE): Condition.GOOD,
    (Condition.HEAVY_DAMAGE, LifecycleEvent.REPORT_LOST): Condition.LOST,
    (Condition.HEAVY_DAMAGE, LifecycleEvent.DONATE): Condition.DONATED,
    (Condition.LOST, LifecycleEvent.RECOVER): Condition.GOOD,
}

#: Conditions in which an item is no longer an operable asset.
TERMINAL_CONDITIONS = frozenset({Condition.LOST, Condition.DONATED})

_BARCODE_RE = re.compile(r"^[A-Z0-9.\-]+$")
BARCODE_MAX_LEN = 64


def normalize_barcode(raw: str) -> str:
    """Trim, uppercase and validate a barcode.

    Accepted output is 1-64 chars of letters, digits, ``-`` and ``.``.
    Idempotent over accepted inputs.
    """
    value = raw.strip().upper()
    if not value:
        raise bail("EMPTY_BARCODE", "barcode is empty after trimming")
    if len(value) > BARCODE_MAX_LEN:
        raise bail("TOO_LONG", f"barcode exceeds {BARCODE_MAX_LEN} chars", length=len(value))
    if not _BARCODE_RE.match(value):
        raise bail("INVALID_CHARS", f"barcode {value!r} contains characters outside [A-Z0-9.-]")
    return value


def next_condition(current: Condition, event: LifecycleEvent) -> Condition:
    """Return the condition reached by applying ``event`` in ``current``.

    Pure and deterministic; raises ILLEGAL_TRANSITION for pairs not in the
    transition table (e.g. any event on a DONATED item).
    """
    try:
        return TRANSITIONS[(Condition(current), LifecycleEvent(event))]
    except KeyError:
        raise bail(
            "ILLEGAL_TRANSITION",
            f"event {LifecycleEvent(event).value} is not legal in condition {Condition(current).value}",
            condition=Condition(current).value,
            event=LifecycleEvent(event).value,
        ) from None


class WarrantyState(str, Enum):
    NONE = "NONE"
    IN_WARRANTY = "IN_WARRANTY"
    EXPIRED = "EXPIRED"


@dataclass(frozen=True)
class WarrantyStatus:
    """Warranty position of an item at a given day.

    ``days`` is days remaining (IN_WARRANTY, >= 0), days since expiry
    (EXPIRED, >= 1) or None when no warranty end is recorded.
    """

    state: WarrantyState
    days: int | None = None


def warranty_status(warranty_end: date | None, as_of: date) -> WarrantyStatus:
    """Classify an item's warranty at ``as_of``; the end date itself is still in warranty."""
    if warranty_end is None:
        return WarrantyStatus(WarrantyState.NONE)
    delta = (warranty_end - as_of).days
    if delta >= 0:
        return WarrantyStatus(WarrantyState.IN_WARRANTY, delta)
    return WarrantyStatus(WarrantyState.EXPIRED, -delta)
