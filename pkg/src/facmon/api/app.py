"""The HTTP service: every domain operation behind bearer-token auth.

Only POST /api/login and GET /healthz skip authentication; every other route
resolves the session and checks one permission key before the handler runs.
The acting user feeds audit attribution.
"""

from __future__ import annotations

import socket
from contextlib import asynccontextmanager
from datetime import date
from typing import Annotated, Optional

import uvicorn
from fastapi import Depends, FastAPI, File, Form, Query, Request, Response, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import records, wire
from ..config import AppConfig
from ..core import Backend
from ..domain import Condition, PhotoView
from ..errors import DomainError, bail
from ..registry import ItemReceipt
from . import schemas
from .errmap import status_for

REFERENCE_KIND_PATHS = {
    "campuses": "CAMPUS",
    "locations": "LOCATION",
    "categories": "CATEGORY",
    "types": "TYPE",
    "brands": "BRAND",
    "sources": "SOURCE",
}

# Permission key per route, used by authorization tests to enumerate the
# full (role x route) matrix. None = public.
ROUTE_PERMISSIONS: dict[tuple[str, str], str | None] = {
    ("POST", "/api/login"): None,
    ("GET", "/healthz"): None,
    ("GET", "/api/references/{kind}"): "reference.read",
    ("POST", "/api/references/{kind}"): "reference.write",
    ("PUT", "/api/references/{kind}/{code}"): "reference.write",
    ("DELETE", "/api/references/{kind}/{code}"): "reference.write",
    ("POST", "/api/items"): "item.register",
    ("GET", "/api/items"): "item.read",
    ("GET", "/api/items/{barcode}"): "item.read",
    ("POST", "/api/items/{barcode}/transfer"): "item.transfer",
    ("POST", "/api/items/{barcode}/status"): "item.status",
    ("POST", "/api/items/{barcode}/photos"): "photo.upload",
    ("POST", "/api/items/{barcode}/repairs"): "repair.open",
    ("POST", "/api/repairs/{repair_id}/complete"): "repair.complete",
    ("POST", "/api/monitoring"): "finding.submit",
    ("GET", "/api/monitoring"): "finding.read",
    ("GET", "/api/monitoring/{record_id}"): "finding.read",
    ("POST", "/api/monitoring/{record_id}/follow-up"): "finding.follow_up",
    ("POST", "/api/monitoring/{record_id}/resolve"): "finding.resolve",
    ("POST", "/api/monitoring/{record_id}/photos"): "photo.upload",
    ("GET", "/api/reports/summary"): "report.read",
    ("GET", "/api/reports/by-condition"): "report.read",
    ("GET", "/api/reports/by-location"): "report.read",
    ("GET", "/api/reports/warranty"): "report.read",
    ("GET", "/api/reports/maintenance-due"): "report.read",
    ("GET", "/api/export/items.csv"): "export.read",
    ("GET", "/api/export/monitoring.csv"): "export.read",
    ("GET", "/api/export/summary.csv"): "export.read",
    ("GET", "/api/photos/{digest}"): "photo.read",
    ("POST", "/api/users"): "user.manage",
    ("GET", "/api/users"): "user.manage",
    ("DELETE", "/api/users/{username}"): "user.manage",
    ("GET", "/api/audit"): "audit.read",
}


def _bearer_token(request: Request) -> str | None:
    header = request.headers.get("authorization", "")
    if header.lower().startswith("bearer "):
        return header[7:].strip()
    return None


def require(permission: str):
    """Dependency resolving the acting user for a permission key."""

    def dependency(request: Request) -> dict:
        backend: Backend = request.app.state.backend
        user = backend.auth.authorize(_bearer_token(request), permission)
        request.state.user = user
        return user

    return Depends(dependency)


def _kind(kind: str) -> str:
    try:
        return REFERENCE_KIND_PATHS[kind]
    except KeyError:
        raise bail("UNKNOWN_REFERENCE", f"no reference collection {kind!r}", which="kind") from None


def create_app(config: AppConfig | None = None, backend: Backend | None = None) -> FastAPI:
    """Build the service; opens its own backend unless one is passed in."""
    owns_backend = backend is None
    if owns_backend:
        if config is None:
            raise bail("CONFIG_ERROR", "create_app needs a config or a backend")
        backend = Backend(config)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        if owns_backend:
            backend.close()

    app = FastAPI(title="facmon", version="0.1.0", docs_url="/docs", lifespan=lifespan)
    app.state.backend = backend

    @app.exception_handler(DomainError)
    async def domain_error_handler(request: Request, exc: DomainError):
        return JSONResponse(
            status_code=status_for(exc.code),
            content={"code": exc.code, "message": exc.message, "details": exc.details},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={
                "code": "INVALID_REQUEST",
                "message": "request validation failed",
                "details": {"errors": exc.errors()},
            },
        )

    @app.middleware("http")
    async def reject_oversized_bodies(request: Request, call_next):
        length = request.headers.get("content-length")
        if length and length.isdigit() and int(length) > backend.config.max_upload_bytes:
            return JSONResponse(
                status_code=413,
                content={
                    "code": "PAYLOAD_TOO_LARGE",
                    "message": f"body exceeds {backend.config.max_upload_bytes} bytes",
                    "details": {},
                },
            )
        return await call_next(request)

    # -- public ---------------------------------------------------------------

    @app.get("/healthz")
    def healthz():
        backend.store.state  # raises if the store is gone
        if not backend.store.data_dir.exists():
            raise bail("DATA_DIR_UNWRITABLE", "data dir vanished")
        return {"status": "ok", "commits": backend.store.commit_count}

    @app.post("/api/login", response_model=schemas.SessionResponse)
    def login(body: schemas.LoginRequest):
        session = backend.auth.authenticate(body.username, body.password)
        user = backend.store.state.get(records.USER, session["user_id"])
        return {
            "token": session["token"],
            "role": user["role"],
            "username": user["username"],
            "expires_at": session["expires_at"],
        }

    # -- references --------------------------------------------------------------

    @app.get("/api/references/{kind}")
    def list_references(kind: str, user: dict = require("reference.read")):
        resolved = _kind(kind)
        state = backend.store.state
        return [wire.reference_wire(state, resolved, r) for r in backend.registry.list_references(resolved)]

    @app.post("/api/references/{kind}", status_code=201)
    def create_reference(kind: str, body: schemas.ReferencePayload, user: dict = require("reference.write")):
        resolved = _kind(kind)
        ref = backend.registry.create_reference(resolved, body.fields_for_registry(), user["id"])
        return wire.reference_wire(backend.store.state, resolved, ref)

    @app.put("/api/references/{kind}/{code}")
    def update_reference(
        kind: str,
        code: str,
        body: schemas.ReferencePayload,
        campus: Optional[str] = Query(default=None),
        user: dict = require("reference.write"),
    ):
        resolved = _kind(kind)
        payload = body.fields_for_registry()
        ref = backend.registry.update_reference(resolved, code, payload, user["id"], campus_code=campus)
        return wire.reference_wire(backend.store.state, resolved, ref)

    @app.delete("/api/references/{kind}/{code}")
    def deactivate_reference(
        kind: str,
        code: str,
        campus: Optional[str] = Query(default=None),
        user: dict = require("reference.write"),
    ):
        resolved = _kind(kind)
        ref = backend.registry.deactivate_reference(resolved, code, user["id"], campus_code=campus)
        return wire.reference_wire(backend.store.state, resolved, ref)

    # -- items ----------------------------------------------------------------------

    @app.post("/api/items", status_code=201, response_model=schemas.ItemOut)
    def register_item(body: schemas.ItemRegisterRequest, user: dict = require("item.register")):
        receipt = ItemReceipt(**body.model_dump())
        item = backend.registry.register_item(receipt, user["id"], date.today())
        return wire.item_wire(backend.store.state, item)

    @app.get("/api/items", response_model=list[schemas.ItemOut])
    def list_items(
        campus: Optional[str] = None,
        location: Optional[str] = None,
        category: Optional[str] = None,
        condition: Optional[Condition] = None,
        text: Optional[str] = None,
        limit: int = Query(default=100, ge=1, le=10_000),
        offset: int = Query(default=0, ge=0),
        user: dict = require("item.read"),
    ):
        items = backend.registry.list_items(
            campus=campus, location=location, category=category, condition=condition, text=text, viewer=user
        )
        state = backend.store.state
        return [wire.item_wire(state, i) for i in items[offset : offset + limit]]

    @app.get("/api/items/{barcode}", response_model=schemas.ItemDetailOut)
    def get_item(barcode: str, user: dict = require("item.read")):
        item = backend.registry.get_item(barcode, viewer=user)
        return wire.item_detail_wire(backend.store.state, item)

    @app.post("/api/items/{barcode}/transfer", response_model=schemas.TransferOut)
    def transfer_item(barcode: str, body: schemas.TransferRequest, user: dict = require("item.transfer")):
        transfer = backend.lifecycle.transfer_item(
            barcode, body.to_campus_code, body.to_location_code, user["id"], body.date, body.note
        )
        return wire.transfer_wire(backend.store.state, transfer)

    @app.post("/api/items/{barcode}/status", response_model=schemas.StatusChangeOut)
    def change_status(barcode: str, body: schemas.StatusChangeRequest, user: dict = require("item.status")):
        change = backend.lifecycle.change_status(barcode, body.event, user["id"], body.date, body.note)
        return wire.status_change_wire(backend.store.state, change)

    @app.post("/api/items/{barcode}/photos", status_code=201, response_model=schemas.PhotoOut)
    def upload_item_photo(
        barcode: str,
        view: Annotated[PhotoView, Form()],
        file: Annotated[UploadFile, File()],
        user: dict = require("photo.upload"),
    ):
        data = _read_upload(file, backend.config.max_upload_bytes)
        return backend.registry.attach_photo(
            barcode, view, data, file.content_type or "", actor=user["id"]
        )

    @app.post("/api/items/{barcode}/repairs", status_code=201, response_model=schemas.RepairOut)
    def open_repair(barcode: str, body: schemas.RepairOpenRequest, user: dict = require("repair.open")):
        repair = backend.lifecycle.open_repair(barcode, body.date, body.description, user["id"])
        return wire.repair_wire(backend.store.state, repair)

    @app.post("/api/repairs/{repair_id}/complete", response_model=schemas.RepairOut)
    def complete_repair(
        repair_id: str, body: schemas.RepairCompleteRequest, user: dict = require("repair.complete")
    ):
        repair = backend.lifecycle.complete_repair(repair_id, body.completed_date, body.cost, user["id"])
        return wire.repair_wire(backend.store.state, repair)

    # -- monitoring --------------------------------------------------------------------

    @app.post("/api/monitoring", status_code=201, response_model=schemas.FindingOut)
    def submit_finding(body: schemas.FindingSubmitRequest, user: dict = require("finding.submit")):
        record = backend.monitoring.submit_finding(
            reporter=user,
            finding=body.finding,
            recommendation=body.recommendation,
            on=body.date,
            campus_code=body.campus_code,
            location_code=body.location_code,
            barcode=body.barcode,
            object_name=body.object_name,
            object_description=body.object_description,
        )
        return wire.finding_wire(backend.store.state, record)

    @app.get("/api/monitoring", response_model=list[schemas.FindingOut])
    def list_findings(
        status: Optional[str] = None,
        campus: Optional[str] = None,
        location: Optional[str] = None,
        condition_of_item: Optional[Condition] = None,
        date_from: Annotated[Optional[date], Query(alias="from")] = None,
        date_to: Annotated[Optional[date], Query(alias="to")] = None,
        reporter: Optional[str] = None,
        limit: int = Query(default=100, ge=1, le=10_000),
        offset: int = Query(default=0, ge=0),
        user: dict = require("finding.read"),
    ):
        rows = backend.monitoring.list_records(
            status=status,
            campus=campus,
            location=location,
            condition_of_item=condition_of_item,
            date_from=date_from,
            date_to=date_to,
            reporter=reporter,
            viewer=user,
        )
        state = backend.store.state
        return [wire.finding_wire(state, r) for r in rows[offset : offset + limit]]

    @app.get("/api/monitoring/{record_id}", response_model=schemas.FindingOut)
    def get_finding(record_id: str, user: dict = require("finding.read")):
        record = backend.monitoring.get_record(record_id, viewer=user)
        return wire.finding_wire(backend.store.state, record)

    @app.post("/api/monitoring/{record_id}/follow-up", response_model=schemas.FindingOut)
    def follow_up(record_id: str, body: schemas.FollowUpRequest, user: dict = require("finding.follow_up")):
        record = backend.monitoring.follow_up(record_id, body.note, user)
        return wire.finding_wire(backend.store.state, record)

    @app.post("/api/monitoring/{record_id}/resolve", response_model=schemas.FindingOut)
    def resolve(record_id: str, body: schemas.ResolveRequest, user: dict = require("finding.resolve")):
        record = backend.monitoring.resolve(record_id, body.resolution_date, user)
        return wire.finding_wire(backend.store.state, record)

    @app.post("/api/monitoring/{record_id}/photos", status_code=201, response_model=schemas.PhotoOut)
    def upload_finding_photo(
        record_id: str,
        view: Annotated[PhotoView, Form()],
        file: Annotated[UploadFile, File()],
        user: dict = require("photo.upload"),
    ):
        data = _read_upload(file, backend.config.max_upload_bytes)
        return backend.monitoring.attach_photo(
            record_id, view, data, file.content_type or "", actor=user["id"]
        )

    # -- reports and exports ----------------------------------------------------------

    @app.get("/api/reports/summary", response_model=schemas.SummaryOut)
    def report_summary(
        period_from: Annotated[date, Query(alias="from")],
        period_to: Annotated[date, Query(alias="to")],
        as_of: Optional[date] = None,
        user: dict = require("report.read"),
    ):
        return backend.reporting.summary(period_from, period_to, as_of or period_to)

    @app.get("/api/reports/by-condition", response_model=list[schemas.ItemOut])
    def report_by_condition(condition: Condition, user: dict = require("report.read")):
        state = backend.store.state
        return [wire.item_wire(state, i) for i in backend.reporting.condition_view(condition)]

    @app.get("/api/reports/by-location", response_model=schemas.LocationViewOut)
    def report_by_location(campus: str, location: str, user: dict = require("report.read")):
        view = backend.reporting.location_view(campus, location)
        return wire.location_view_wire(backend.store.state, view)

    @app.get("/api/reports/warranty", response_model=schemas.WarrantyReportOut)
    def report_warranty(as_of: date, user: dict = require("report.read")):
        report = backend.lifecycle.warranty_report(as_of)
        return wire.warranty_report_wire(backend.store.state, report)

    @app.get("/api/reports/maintenance-due", response_model=list[schemas.MaintenanceDueOut])
    def report_maintenance_due(as_of: date, user: dict = require("report.read")):
        due = backend.lifecycle.maintenance_due(as_of)
        return wire.maintenance_due_wire(backend.store.state, due)

    @app.get("/api/export/items.csv")
    def export_items(user: dict = require("export.read")):
        return Response(content=backend.reporting.export_csv("ITEMS"), media_type="text/csv")

    @app.get("/api/export/monitoring.csv")
    def export_monitoring(user: dict = require("export.read")):
        return Response(content=backend.reporting.export_csv("MONITORING"), media_type="text/csv")

    @app.get("/api/export/summary.csv")
    def export_summary(
        period_from: Annotated[date, Query(alias="from")],
        period_to: Annotated[date, Query(alias="to")],
        as_of: Optional[date] = None,
        user: dict = require("export.read"),
    ):
        data = backend.reporting.export_csv(
            "SUMMARY", period_from=period_from, period_to=period_to, as_of=as_of
        )
        return Response(content=data, media_type="text/csv")

    # -- photos, users, audit ------------------------------------------------------------

    @app.get("/api/photos/{digest}")
    def get_photo(digest: str, user: dict = require("photo.read")):
        data = backend.store.get_blob(digest)
        media_type = "application/octet-stream"
        state = backend.store.state
        for kind in (records.ITEM, records.MONITORING):
            for _, entity in state.all(kind):
                for photo in entity["photos"]:
                    if photo["id"] == digest:
                        media_type = photo["media_type"]
        return Response(content=data, media_type=media_type)

    @app.post("/api/users", status_code=201, response_model=schemas.UserOut)
    def add_user(body: schemas.UserCreateRequest, user: dict = require("user.manage")):
        created = backend.auth.add_user(
            body.username,
            body.password,
            body.role,
            body.work_unit_name,
            locations=[(a.campus_code, a.location_code) for a in body.assigned_locations],
            actor=user["id"],
        )
        return wire.user_wire(backend.store.state, created)

    @app.get("/api/users", response_model=list[schemas.UserOut])
    def list_users(user: dict = require("user.manage")):
        state = backend.store.state
        return [wire.user_wire(state, u) for u in backend.auth.list_users()]

    @app.delete("/api/users/{username}", response_model=schemas.UserOut)
    def deactivate_user(username: str, user: dict = require("user.manage")):
        deactivated = backend.auth.deactivate_user(username, actor=user["id"])
        return wire.user_wire(backend.store.state, deactivated)

    @app.get("/api/audit")
    def audit_range(
        from_seq: int = Query(default=1, ge=1),
        to_seq: int = Query(default=10_000_000),
        user: dict = require("audit.read"),
    ):
        state = backend.store.state
        return [wire.audit_wire(state, e) for e in backend.store.audit_range(from_seq, to_seq)]

    return app


def _read_upload(file: UploadFile, max_bytes: int) -> bytes:
    data = file.file.read(max_bytes + 1)
    if len(data) > max_bytes:
        raise bail("PAYLOAD_TOO_LARGE", f"upload exceeds {max_bytes} bytes")
    return data


def serve(config: AppConfig, backend: Backend | None = None) -> None:
    """Run the service until interrupted; fails fast on an unbindable address."""
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((config.host, config.port))
    except OSError as exc:
        raise bail("BIND_FAILURE", f"cannot bind {config.bind_addr}: {exc}")
    finally:
        probe.close()
    app = create_app(config, backend)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
