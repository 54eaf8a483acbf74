"""Composition root: a Backend bundles the store and every service over it."""

from __future__ import annotations

from datetime import date

from . import records
from .auth import AuthService
from .config import AppConfig
from .lifecycle import LifecycleService
from .monitoring import MonitoringService
from .registry import ItemReceipt, RegistryService
from .reporting import ReportingService
from .storage import Store


class Backend:
    """Everything the API, the CLI and the tests operate through."""

    def __init__(self, config: AppConfig, clock=None):
        self.config = config
        self.store: Store = records.open_store(config.data_dir)
        self.auth = AuthService(
            self.store,
            session_ttl_hours=config.session_ttl_hours,
            scrypt_n=config.scrypt_n,
            scrypt_r=config.scrypt_r,
            scrypt_p=config.scrypt_p,
            clock=clock,
        )
        self.registry = RegistryService(self.store)
        self.lifecycle = LifecycleService(self.store)
        self.monitoring = MonitoringService(self.store, self.registry)
        self.reporting = ReportingService(self.store, self.registry, self.lifecycle, self.monitoring)

    def close(self) -> None:
        self.store.close()

    def __enter__(self) -> "Backend":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


DEMO_USERS = (
    ("admin", "FACILITIES_ADMIN", None, ()),
    ("unit_tu", "WORK_UNIT", "Tata Usaha", (("B", "B.201"), ("B", "B.202"))),
    ("pimpinan", "LEADERSHIP", None, ()),
)

DEMO_REFERENCES = {
    "CAMPUS": [
        {"code": "A", "name": "Kampus A", "address": "Jl. Jenderal Ahmad Yani No. 3"},
        {"code": "B", "name": "Kampus B", "address": "Jl. Jenderal Ahmad Yani No. 12"},
    ],
    "LOCATION": [
        {"code": "A.101", "name": "Ruang Kelas 101", "floor": 1, "campus_code": "A"},
        {"code": "A.102", "name": "Laboratorium Komputer", "floor": 1, "campus_code": "A"},
        {"code": "B.201", "name": "Ruang Tipe Admin", "floor": 2, "campus_code": "B"},
        {"code": "B.202", "name": "Ruang Rapat", "floor": 2, "campus_code": "B"},
    ],
    "TYPE": [
        {"code": "AC", "name": "Air Conditioner"},
        {"code": "PC", "name": "Personal Computer"},
        {"code": "PRJ", "name": "Proyektor"},
    ],
    "BRAND": [
        {"code": "GEN", "name": "Generik"},
        {"code": "ACME", "name": "Acme"},
    ],
    "SOURCE": [
        {"code": "APBY", "name": "Anggaran Yayasan"},
        {"code": "HIBAH", "name": "Hibah"},
    ],
}


def seed_demo(backend: Backend, demo_password: str = "rahasia-demo") -> dict:
    """Seed the default categories plus a small working fixture.

    Returns counts per seeded kind; fails with ALREADY_SEEDED if the category
    taxonomy is already present.
    """
    categories = backend.registry.seed_default_categories()
    counts = {"categories": len(categories), "references": 0, "users": 0, "items": 0}
    for kind, payloads in DEMO_REFERENCES.items():
        for payload in payloads:
            backend.registry.upsert_reference(kind, payload)
            counts["references"] += 1
    for username, role, work_unit, locations in DEMO_USERS:
        backend.auth.add_user(username, demo_password, role, work_unit, locations=locations)
        counts["users"] += 1

    demo_items = (
        ItemReceipt(
            barcode="B-AC-00001",
            name="AC Split 1PK",
            specification="1 PK, R32",
            category_code="C07",
            type_code="AC",
            brand_code="GEN",
            source_code="APBY",
            purchase_date=date(2018, 1, 15),
            warranty_end_date=date(2019, 1, 15),
            maintenance_interval_days=90,
            campus_code="B",
            location_code="B.201",
            custodian="Staf Sarana",
        ),
        ItemReceipt(
            barcode="A-PC-00001",
            name="PC Lab 01",
            specification="i5, 8GB RAM",
            category_code="C12",
            type_code="PC",
            brand_code="ACME",
            source_code="APBY",
            purchase_date=date(2018, 3, 1),
            warranty_end_date=date(2021, 3, 1),
            maintenance_interval_days=None,
            campus_code="A",
            location_code="A.102",
            custodian="Kepala Lab",
        ),
        ItemReceipt(
            barcode="A-PRJ-00001",
            name="Proyektor Kelas 101",
            specification="3500 lumen",
            category_code="C17",
            type_code="PRJ",
            brand_code="ACME",
            source_code="HIBAH",
            purchase_date=date(2017, 9, 1),
            warranty_end_date=None,
            maintenance_interval_days=180,
            campus_code="A",
            location_code="A.101",
            custodian="Staf Umum",
        ),
    )
    for receipt in demo_items:
        backend.registry.register_item(receipt, "system", receipt.purchase_date)
        counts["items"] += 1
    return counts
