"""Deterministic randomized fixtures for oracle and acceptance tests.

Everything is driven by a seeded Random so failures reproduce; the builder
only goes through public service operations, so fixtures are reachable states
by construction.
"""

from datetime import date, timedelta
from random import Random

from facmon import records
from facmon.core import Backend
from facmon.domain import Condition, LifecycleEvent, TRANSITIONS
from facmon.registry import ItemReceipt

CAMPUSES = [
    {"code": "A", "name": "Kampus A", "address": "Jl. A No. 1"},
    {"code": "B", "name": "Kampus B", "address": "Jl. B No. 2"},
    {"code": "C", "name": "Kampus C", "address": "Jl. C No. 3"},
]

LOCATIONS = [
    {"code": "A.101", "name": "Kelas 101", "floor": 1, "campus_code": "A"},
    {"code": "A.201", "name": "Lab Komputer", "floor": 2, "campus_code": "A"},
    {"code": "B.101", "name": "Perpustakaan", "floor": 1, "campus_code": "B"},
    {"code": "B.201", "name": "Ruang Admin", "floor": 2, "campus_code": "B"},
    {"code": "C.301", "name": "Aula", "floor": 3, "campus_code": "C"},
]

TAXONOMIES = {
    "TYPE": ["AC", "PC", "MJ", "KRS"],
    "BRAND": ["ACME", "GEN", "NUSA"],
    "SOURCE": ["APBY", "HIBAH"],
}


def base_day(rng: Random) -> date:
    return date(2018, 1, 1) + timedelta(days=rng.randrange(0, 240))


def setup_references(backend: Backend) -> None:
    backend.registry.seed_default_categories()
    for campus in CAMPUSES:
        backend.registry.create_reference("CAMPUS", campus)
    for location in LOCATIONS:
        backend.registry.create_reference("LOCATION", location)
    for kind, codes in TAXONOMIES.items():
        for code in codes:
            backend.registry.create_reference(kind, {"code": code, "name": f"{kind} {code}"})


def setup_users(backend: Backend) -> dict:
    users = {
        "admin": backend.auth.add_user("admin", "fixture-pw-1", "FACILITIES_ADMIN"),
        "unit_a": backend.auth.add_user(
            "unit_a", "fixture-pw-1", "WORK_UNIT", "Unit A", locations=[("A", "A.101"), ("A", "A.201")]
        ),
        "unit_b": backend.auth.add_user(
            "unit_b", "fixture-pw-1", "WORK_UNIT", "Unit B", locations=[("B", "B.101")]
        ),
        "pimpinan": backend.auth.add_user("pimpinan", "fixture-pw-1", "LEADERSHIP"),
    }
    return users


def random_receipt(rng: Random, n: int) -> ItemReceipt:
    location = rng.choice(LOCATIONS)
    purchase = base_day(rng)
    warranty = None
    if rng.random() < 0.6:
        warranty = purchase + timedelta(days=rng.randrange(0, 720))
    interval = rng.choice([None, None, 30, 90, 180, 365])
    return ItemReceipt(
        barcode=f"IT-{n:05d}",
        name=f"Peralatan {n}",
        specification=rng.choice(["", "spek standar", "spek khusus"]),
        category_code=f"C{rng.randrange(1, 21):02d}",
        type_code=rng.choice(TAXONOMIES["TYPE"]),
        brand_code=rng.choice(TAXONOMIES["BRAND"]),
        source_code=rng.choice(TAXONOMIES["SOURCE"]),
        purchase_date=purchase,
        warranty_end_date=warranty,
        maintenance_interval_days=interval,
        campus_code=location["campus_code"],
        location_code=location["code"],
        custodian=rng.choice(["Staf Umum", "Kepala Lab", "Staf Sarana"]),
    )


def legal_events(condition: Condition) -> list[LifecycleEvent]:
    return [event for (current, event) in TRANSITIONS if current is condition]


def build_fixture(backend: Backend, rng: Random, n_items: int = 40, n_findings: int = 40) -> dict:
    """Populate a backend with references, users, items, history and findings."""
    setup_references(backend)
    users = setup_users(backend)
    admin = users["admin"]

    barcodes = []
    for n in range(1, n_items + 1):
        receipt = random_receipt(rng, n)
        item = backend.registry.register_item(receipt, admin["id"], receipt.purchase_date)
        barcodes.append(item["barcode"])

    # random walks over the condition machine, via the public operation
    for barcode in barcodes:
        for _ in range(rng.randrange(0, 3)):
            item = backend.registry.get_item(barcode)
            events = legal_events(Condition(item["condition"]))
            if not events:
                break
            event = rng.choice(events)
            if event is LifecycleEvent.REPAIR_COMPLETE:
                continue  # repairs are driven through open/complete below
            backend.lifecycle.change_status(barcode, event, admin["id"], base_day(rng))

    # some transfers on non-terminal items
    for barcode in rng.sample(barcodes, k=min(len(barcodes), n_items // 3)):
        item = backend.registry.get_item(barcode)
        if item["condition"] in ("LOST", "DONATED"):
            continue
        target = rng.choice(LOCATIONS)
        target_loc = records.location_by_address(
            backend.store.state, target["campus_code"], target["code"]
        )
        if target_loc["id"] == item["location_id"]:
            continue
        backend.lifecycle.transfer_item(
            barcode, target["campus_code"], target["code"], admin["id"], base_day(rng)
        )

    # open and sometimes complete repairs on damaged items
    for barcode in barcodes:
        item = backend.registry.get_item(barcode)
        if item["condition"] in ("LIGHT_DAMAGE", "HEAVY_DAMAGE") and rng.random() < 0.7:
            opened = base_day(rng)
            repair = backend.lifecycle.open_repair(barcode, opened, "perbaikan rutin", admin["id"])
            if rng.random() < 0.6:
                backend.lifecycle.complete_repair(
                    repair["id"],
                    opened + timedelta(days=rng.randrange(0, 30)),
                    rng.choice([None, "150000", "75000.50"]),
                    admin["id"],
                )

    findings = []
    reporters = [users["unit_a"], users["unit_b"], users["admin"]]
    for n in range(n_findings):
        reporter = rng.choice(reporters)
        location = rng.choice(LOCATIONS)
        barcode = rng.choice(barcodes) if rng.random() < 0.5 else None
        opened = base_day(rng)
        record = backend.monitoring.submit_finding(
            reporter=reporter,
            finding=rng.choice(["tidak dingin", "retak", "mati total", "bocor"]),
            recommendation=rng.choice(["service", "ganti baru", "perbaikan ringan"]),
            on=opened,
            campus_code=location["campus_code"],
            location_code=location["code"],
            barcode=barcode,
            object_name=None if barcode else f"objek {n}",
            object_description=rng.choice([None, "deskripsi singkat"]),
        )
        if rng.random() < 0.5:
            record = backend.monitoring.follow_up(record["id"], "surat dikirim", users["admin"])
        if rng.random() < 0.5:
            record = backend.monitoring.resolve(
                record["id"], opened + timedelta(days=rng.randrange(0, 45)), users["admin"]
            )
        findings.append(record)

    return {"users": users, "barcodes": barcodes, "findings": findings}
