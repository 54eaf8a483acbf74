"""Reference data (campuses, locations, taxonomies), goods receipt, item photos.

References are deactivated rather than deleted so historical records keep
resolving; new registrations may only cite active references.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

from . import records
from .domain import Condition, PhotoView, TaxonomyKind, normalize_barcode
from .errors import DomainError, bail
from .storage import AuditDraft, Store, Write

REFERENCE_KINDS = ("CAMPUS", "LOCATION", "CATEGORY", "TYPE", "BRAND", "SOURCE")
TAXONOMY_KINDS = tuple(k.value for k in TaxonomyKind)

ALLOWED_MEDIA_TYPES = ("image/jpeg", "image/png")

# Default asset category taxonomy shipped with the system (codes C01-C20).
DEFAULT_CATEGORIES = (
    "Mesin ketik dan Hitung",
    "Alat Reproduksi (Pengganda)",
    "Peralatan Penyimpanan Peralatan Ktr",
    "Alat Kantor Lainnya",
    "Peralatan Rumah Tangga",
    "Alat Pembersih",
    "Perangkat Pendingin",
    "Peralatan Dapur",
    "Peralatan Rumah Berlangganan Lainnya",
    "Alat Pemadam Kebakaran",
    "Komputer",
    "Komputer Pribadi",
    "Peralatan Komputer Mainframe",
    "Peralatan Komputer Mini",
    "Peralatan Komputer Pribadi",
    "Peralatan Jaringan",
    "Peralatan Studio dan Peralatan Komunikasi",
    "Peralatan Video dan Film Studio",
    "Peralatan Video dan Film Studio A",
    "Peralatan Percetakan",
)

# Header of the CSV item import/export format; empty cell = absent optional.
ITEM_CSV_HEADER = [
    "barcode",
    "name",
    "specification",
    "category_code",
    "type_code",
    "brand_code",
    "source_code",
    "purchase_date",
    "warranty_end_date",
    "maintenance_interval_days",
    "campus_code",
    "location_code",
    "custodian",
]


@dataclass(frozen=True)
class ItemReceipt:
    """A goods-receipt row: everything needed to register one item."""

    barcode: str
    name: str
    category_code: str
    type_code: str
    brand_code: str
    source_code: str
    purchase_date: date
    campus_code: str
    location_code: str
    custodian: str
    specification: str = ""
    warranty_end_date: date | None = None
    maintenance_interval_days: int | None = None


def _clean_code(code: str) -> str:
    code = (code or "").strip()
    if not code:
        raise bail("INVALID_CODE", "reference code is empty after trimming")
    return code


class RegistryService:
    """Reference CRUD and item registration over the shared store."""

    def __init__(self, store: Store):
        self.store = store

    # -- references -----------------------------------------------------------

    def _build_reference(self, kind: str, payload: dict, existing: dict | None) -> dict:
        state = self.store.state
        code = _clean_code(payload.get("code", ""))
        name = (payload.get("name") or "").strip()
        if not name:
            raise bail("INVALID_NAME", f"{kind} name must not be empty")
        if kind == "CAMPUS":
            code = code.upper()
            if len(code) > 8:
                raise bail("INVALID_CODE", "campus code must be 1-8 chars")
            return {
                "id": existing["id"] if existing else records.new_id(),
                "code": code,
                "name": name,
                "address": (payload.get("address") or "").strip(),
                "active": payload.get("active", True),
            }
        if kind == "LOCATION":
            floor = payload.get("floor", 1)
            if not isinstance(floor, int) or floor < 1:
                raise bail("INVALID_FLOOR", "floor must be a positive integer")
            campus = records.campus_by_code(state, payload.get("campus_code", ""))
            if campus is None:
                raise bail("UNKNOWN_PARENT", f"no campus {payload.get('campus_code')!r}")
            return {
                "id": existing["id"] if existing else records.new_id(),
                "code": code,
                "name": name,
                "floor": floor,
                "campus_id": campus["id"],
                "active": payload.get("active", True),
            }
        return {
            "id": existing["id"] if existing else records.new_id(),
            "kind": kind,
            "code": code,
            "name": name,
            "active": payload.get("active", True),
        }

    def _find_reference(self, kind: str, code: str, campus_code: str | None = None) -> dict | None:
        state = self.store.state
        if kind == "CAMPUS":
            return records.campus_by_code(state, code.upper())
        if kind == "LOCATION":
            if campus_code is None:
                raise bail("UNKNOWN_PARENT", "locations are addressed as campus_code + code")
            return records.location_by_address(state, campus_code, code)
        return records.taxonomy_by_code(state, kind, code)

    @staticmethod
    def _store_kind(kind: str) -> str:
        return {"CAMPUS": records.CAMPUS, "LOCATION": records.LOCATION}.get(kind, records.TAXONOMY)

    def create_reference(self, kind: str, payload: dict, actor: str = "system") -> dict:
        kind = self._check_kind(kind)
        existing = self._find_reference(kind, payload.get("code", ""), payload.get("campus_code"))
        if existing is not None:
            raise bail("DUPLICATE_CODE", f"{kind} code {payload.get('code')!r} already exists")
        ref = self._build_reference(kind, payload, None)
        self._commit_reference(kind, ref, None, actor)
        return ref

    def update_reference(
        self, kind: str, code: str, payload: dict, actor: str = "system", campus_code: str | None = None
    ) -> dict:
        kind = self._check_kind(kind)
        existing = self._find_reference(kind, code, campus_code or payload.get("campus_code"))
        if existing is None:
            raise bail("UNKNOWN_REFERENCE", f"no {kind} with code {code!r}", which=kind.lower())
        merged = {**{k: v for k, v in existing.items() if k != "id"}, **payload, "code": code}
        if kind == "LOCATION":
            merged.setdefault("campus_code", campus_code)
            state = self.store.state
            campus = state.get(records.CAMPUS, existing["campus_id"])
            merged["campus_code"] = payload.get("campus_code") or (campus or {}).get("code")
        ref = self._build_reference(kind, merged, existing)
        self._commit_reference(kind, ref, existing, actor)
        return ref

    def upsert_reference(self, kind: str, payload: dict, actor: str = "system") -> dict:
        kind = self._check_kind(kind)
        existing = self._find_reference(kind, payload.get("code", ""), payload.get("campus_code"))
        if existing is None:
            return self.create_reference(kind, payload, actor)
        return self.update_reference(
            kind, payload["code"], payload, actor, campus_code=payload.get("campus_code")
        )

    def deactivate_reference(
        self, kind: str, code: str, actor: str = "system", campus_code: str | None = None
    ) -> dict:
        return self.update_reference(kind, code, {"active": False}, actor, campus_code=campus_code)

    def list_references(self, kind: str) -> list[dict]:
        kind = self._check_kind(kind)
        state = self.store.state
        if kind == "CAMPUS":
            rows = [c for _, c in state.all(records.CAMPUS)]
        elif kind == "LOCATION":
            rows = [l for _, l in state.all(records.LOCATION)]
        else:
            rows = [t for _, t in state.all(records.TAXONOMY) if t["kind"] == kind]
        return sorted(rows, key=lambda r: r["code"])

    def _check_kind(self, kind: str) -> str:
        kind = kind.upper()
        if kind not in REFERENCE_KINDS:
            raise bail("UNKNOWN_REFERENCE", f"no reference kind {kind!r}", which="kind")
        return kind

    def _commit_reference(self, kind: str, ref: dict, before: dict | None, actor: str) -> None:
        store_kind = self._store_kind(kind)
        version = self.store.state.version(store_kind, ref["id"]) if before else 0
        self.store.commit(
            [Write(store_kind, ref["id"], ref, version)],
            [AuditDraft(actor, "reference.write", store_kind, ref["id"], before, ref)],
        )

    def seed_default_categories(self, actor: str = "system") -> list[dict]:
        """Insert the stock 20-category taxonomy, codes C01-C20 in order."""
        state = self.store.state
        codes = [f"C{i:02d}" for i in range(1, len(DEFAULT_CATEGORIES) + 1)]
        for code in codes:
            if records.taxonomy_by_code(state, "CATEGORY", code) is not None:
                raise bail("ALREADY_SEEDED", f"category {code} already present")
        writes, audits = [], []
        refs = []
        for code, name in zip(codes, DEFAULT_CATEGORIES):
            ref = {"id": records.new_id(), "kind": "CATEGORY", "code": code, "name": name, "active": True}
            refs.append(ref)
            writes.append(Write(records.TAXONOMY, ref["id"], ref))
            audits.append(AuditDraft(actor, "reference.write", records.TAXONOMY, ref["id"], None, ref))
        self.store.commit(writes, audits)
        return refs

    # -- items -----------------------------------------------------------------

    def _resolve_receipt(self, state, receipt: ItemReceipt) -> dict:
        resolved = {}
        for which, kind, code in (
            ("category", "CATEGORY", receipt.category_code),
            ("type", "TYPE", receipt.type_code),
            ("brand", "BRAND", receipt.brand_code),
            ("source", "SOURCE", receipt.source_code),
        ):
            ref = records.taxonomy_by_code(state, kind, code)
            if ref is None or not ref["active"]:
                raise bail("UNKNOWN_REFERENCE", f"no active {which} with code {code!r}", which=which)
            resolved[f"{which}_id"] = ref["id"]
        campus = records.campus_by_code(state, receipt.campus_code)
        if campus is None or not campus["active"]:
            raise bail("UNKNOWN_REFERENCE", f"no active campus {receipt.campus_code!r}", which="campus")
        location = records.location_by_address(state, receipt.campus_code, receipt.location_code)
        if location is None or not location["active"]:
            raise bail(
                "UNKNOWN_REFERENCE",
                f"no active location {receipt.location_code!r} on campus {receipt.campus_code}",
                which="location",
            )
        resolved["location_id"] = location["id"]
        return resolved

    def build_item(self, state, receipt: ItemReceipt, on: date) -> dict:
        """Validate a receipt against a snapshot and shape the item record."""
        barcode = normalize_barcode(receipt.barcode)
        if records.item_by_barcode(state, barcode) is not None:
            raise bail("DUPLICATE_BARCODE", f"barcode {barcode!r} already registered")
        if receipt.warranty_end_date is not None and receipt.warranty_end_date < receipt.purchase_date:
            raise bail(
                "INVALID_WARRANTY_RANGE",
                f"warranty end {receipt.warranty_end_date} precedes purchase {receipt.purchase_date}",
            )
        if receipt.maintenance_interval_days is not None and receipt.maintenance_interval_days < 1:
            raise bail("INVALID_INTERVAL", "maintenance interval must be a positive number of days")
        resolved = self._resolve_receipt(state, receipt)
        return {
            "id": records.new_id(),
            "barcode": barcode,
            "name": receipt.name,
            "specification": receipt.specification,
            **resolved,
            "purchase_date": records.iso(receipt.purchase_date),
            "warranty_end_date": records.iso(receipt.warranty_end_date),
            "maintenance_interval_days": receipt.maintenance_interval_days,
            "condition": Condition.GOOD.value,
            "custodian": receipt.custodian,
            "registered_date": records.iso(on),
            "photos": [],
            "transfers": [],
            "status_changes": [],
            "repairs": [],
        }

    def register_item(self, receipt: ItemReceipt, actor: str, on: date) -> dict:
        item = self.build_item(self.store.state, receipt, on)
        try:
            self.store.commit(
                [Write(records.ITEM, item["id"], item)],
                [AuditDraft(actor, "item.register", records.ITEM, item["id"], None, item)],
            )
        except DomainError as exc:
            # lost a registration race on the same barcode
            if exc.code == "CONSTRAINT_VIOLATION":
                raise bail("DUPLICATE_BARCODE", f"barcode {item['barcode']!r} already registered")
            raise
        return item

    def register_items(self, receipts: list[ItemReceipt], actor: str, on: date) -> list[dict]:
        """Register a batch in a single commit: all receipts land or none do.

        Validation failures carry the offending receipt's index in details.
        """
        state = self.store.state
        items, writes, audits = [], [], []
        seen: set[str] = set()
        for index, receipt in enumerate(receipts):
            try:
                item = self.build_item(state, receipt, on)
                if item["barcode"] in seen:
                    raise bail("DUPLICATE_BARCODE", f"barcode {item['barcode']!r} repeats in the batch")
            except DomainError as exc:
                raise DomainError(exc.code, exc.message, {**exc.details, "index": index}) from None
            seen.add(item["barcode"])
            items.append(item)
            writes.append(Write(records.ITEM, item["id"], item))
            audits.append(AuditDraft(actor, "item.register", records.ITEM, item["id"], None, item))
        if writes:
            self.store.commit(writes, audits)
        return items

    def get_item(self, barcode: str, viewer: dict | None = None) -> dict:
        barcode = normalize_barcode(barcode)
        item = records.item_by_barcode(self.store.state, barcode)
        if item is None:
            raise bail("UNKNOWN_ITEM", f"no item with barcode {barcode!r}")
        if viewer is not None and viewer["role"] == "WORK_UNIT":
            if item["location_id"] not in viewer.get("assigned_locations", []):
                raise bail("FORBIDDEN", "item is outside your assigned locations")
        return item

    def list_items(
        self,
        campus: str | None = None,
        location: str | None = None,
        category: str | None = None,
        condition: Condition | str | None = None,
        text: str | None = None,
        viewer: dict | None = None,
    ) -> list[dict]:
        """Conjunctive filter over all items, ordered by barcode ascending."""
        state = self.store.state
        rows = []
        needle = text.lower() if text else None
        for item in records.items_sorted(state):
            if campus is not None and records.campus_code_of_location(state, item["location_id"]) != campus:
                continue
            if location is not None and records.location_code_of(state, item["location_id"]) != location:
                continue
            if category is not None and records.taxonomy_code_of(state, item["category_id"]) != category:
                continue
            if condition is not None and item["condition"] != Condition(condition).value:
                continue
            if needle is not None and not any(
                needle in (item[f] or "").lower() for f in ("barcode", "name", "specification")
            ):
                continue
            if viewer is not None and viewer["role"] == "WORK_UNIT":
                if item["location_id"] not in viewer.get("assigned_locations", []):
                    continue
            rows.append(item)
        return rows

    def suggest_barcode(self, campus_code: str, category_code: str) -> str:
        """Next free barcode of the form CAMPUS-CATEGORY-00001."""
        prefix = f"{campus_code.upper()}-{category_code.upper()}-"
        state = self.store.state
        taken = {
            data["barcode"]
            for _, data in state.all(records.ITEM)
            if data["barcode"].startswith(prefix)
        }
        seq = len(taken) + 1
        while f"{prefix}{seq:05d}" in taken:
            seq += 1
        return f"{prefix}{seq:05d}"

    # -- photos ------------------------------------------------------------------

    def store_photo(self, data: bytes, view: PhotoView | str, media_type: str) -> dict:
        """Validate and store photo bytes; returns the content-addressed photo ref."""
        view = PhotoView(view)
        if not data:
            raise bail("EMPTY_PAYLOAD", "photo payload is empty")
        if media_type not in ALLOWED_MEDIA_TYPES:
            raise bail(
                "UNSUPPORTED_MEDIA_TYPE",
                f"media type {media_type!r} not in {ALLOWED_MEDIA_TYPES}",
            )
        digest = self.store.put_blob(data)
        return {"id": digest, "view": view.value, "media_type": media_type, "byte_length": len(data)}

    def attach_photo(
        self, barcode: str, view: PhotoView | str, data: bytes, media_type: str, actor: str = "system"
    ) -> dict:
        """Attach a photo to an item; re-attaching a view replaces the link."""
        state = self.store.state
        item = records.item_by_barcode(state, normalize_barcode(barcode))
        if item is None:
            raise bail("UNKNOWN_ITEM", f"no item with barcode {barcode!r}")
        photo = self.store_photo(data, view, media_type)
        photos = [p for p in item["photos"] if p["view"] != photo["view"]] + [photo]
        updated = {**item, "photos": sorted(photos, key=lambda p: p["view"])}
        self.store.commit(
            [Write(records.ITEM, item["id"], updated, state.version(records.ITEM, item["id"]))],
            [AuditDraft(actor, "photo.upload", records.ITEM, item["id"], item, updated)],
        )
        return photo
