"""Operator CLI: run the service, seed data, manage users, import/export, reports.

By default commands open the data dir directly (embedded mode) under an
exclusive lock, so offline administration works without a running server and
refuses to race a live one. ``--remote URL`` switches the data commands to
the HTTP API instead; ``--token`` (or FACMON_TOKEN) carries the session.
"""

from __future__ import annotations

import csv as csv_mod
import json
import sys
from datetime import date
from pathlib import Path

import click
import httpx

from . import records, wire
from .api.app import serve as serve_app
from .config import AppConfig, load_config
from .core import Backend, seed_demo
from .errors import DomainError, bail
from .registry import ITEM_CSV_HEADER, ItemReceipt

SYSTEM_ADMIN = {"id": "system", "role": "FACILITIES_ADMIN", "assigned_locations": []}


class Remote:
    """Thin client for a running facmon service."""

    def __init__(self, base_url: str, token: str | None):
        self.base_url = base_url.rstrip("/")
        self.token = token

    def request(self, method: str, path: str, **kwargs) -> httpx.Response:
        headers = kwargs.pop("headers", {})
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        response = httpx.request(
            method, f"{self.base_url}{path}", headers=headers, timeout=30.0, **kwargs
        )
        if response.status_code >= 400:
            try:
                body = response.json()
                raise bail(body.get("code", "HTTP_ERROR"), body.get("message", response.text))
            except (ValueError, KeyError):
                raise bail("HTTP_ERROR", f"{response.status_code}: {response.text[:200]}")
        return response

    def json(self, method: str, path: str, **kwargs):
        return self.request(method, path, **kwargs).json()


class Context:
    def __init__(self, config_file, data_dir, remote, token, output):
        self.config_file = config_file
        self.data_dir = data_dir
        self.remote_url = remote
        self.token = token
        self.output = output
        self._backend: Backend | None = None

    @property
    def is_remote(self) -> bool:
        return self.remote_url is not None

    def config(self, **overrides) -> AppConfig:
        return load_config(self.config_file, data_dir=self.data_dir, **overrides)

    def backend(self) -> Backend:
        if self.is_remote:
            raise bail("CONFIG_ERROR", "this command is embedded-only; drop --remote")
        if self._backend is None:
            self._backend = Backend(self.config())
        return self._backend

    def remote(self) -> Remote:
        return Remote(self.remote_url, self.token)

    def close(self) -> None:
        if self._backend is not None:
            self._backend.close()
            self._backend = None


pass_context = click.make_pass_decorator(Context)


def emit(ctx: Context, value, table_rows=None, csv_bytes: bytes | None = None) -> None:
    """Print a result in the selected output format."""
    if ctx.output == "json":
        click.echo(json.dumps(value, indent=2, default=str))
    elif ctx.output == "csv":
        if csv_bytes is None:
            raise bail("INVALID_REQUEST", "csv output is not available for this command")
        sys.stdout.write(csv_bytes.decode("utf-8"))
    else:
        if table_rows is None:
            click.echo(json.dumps(value, indent=2, default=str))
        else:
            header, rows = table_rows
            widths = [
                max(len(str(h)), *(len(str(r[i])) for r in rows)) if rows else len(str(h))
                for i, h in enumerate(header)
            ]
            click.echo("  ".join(str(h).ljust(w) for h, w in zip(header, widths)))
            for row in rows:
                click.echo("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))


@click.group()
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--data-dir", type=click.Path(file_okay=False), default=None, help="embedded data dir")
@click.option("--remote", default=None, metavar="URL", help="talk to a running server instead")
@click.option("--token", envvar="FACMON_TOKEN", default=None, help="bearer token for --remote")
@click.option("--output", type=click.Choice(["table", "json", "csv"]), default="table")
@click.pass_context
def main(click_ctx, config_file, data_dir, remote, token, output):
    """Facilities asset and monitoring administration."""
    click_ctx.obj = Context(config_file, data_dir, remote, token, output)
    click_ctx.call_on_close(click_ctx.obj.close)


# -- service --------------------------------------------------------------------


@main.command()
@click.option("--bind", default=None, metavar="HOST:PORT", help="overrides BIND_ADDR")
@click.option("--session-ttl-hours", type=float, default=None, help="overrides SESSION_TTL_HOURS")
@click.option("--max-upload-bytes", type=int, default=None, help="overrides MAX_UPLOAD_BYTES")
@pass_context
def serve(ctx, bind, session_ttl_hours, max_upload_bytes):
    """Run the HTTP service."""
    serve_app(
        ctx.config(
            bind_addr=bind,
            session_ttl_hours=session_ttl_hours,
            max_upload_bytes=max_upload_bytes,
        )
    )


@main.command()
@click.option("--demo-password", default="rahasia-demo", show_default=True)
@pass_context
def seed(ctx, demo_password):
    """Seed the stock categories and a demo fixture into an empty data dir."""
    counts = seed_demo(ctx.backend(), demo_password)
    for kind, count in counts.items():
        click.echo(f"{count} {kind}")


@main.command()
@pass_context
def login(ctx):
    """Obtain a session token from a remote server."""
    if not ctx.is_remote:
        raise bail("CONFIG_ERROR", "login needs --remote URL")
    username = click.prompt("username")
    password = click.prompt("password", hide_input=True)
    body = Remote(ctx.remote_url, None).json(
        "POST", "/api/login", json={"username": username, "password": password}
    )
    click.echo(body["token"])


# -- users ----------------------------------------------------------------------


@main.group()
def user():
    """Manage accounts."""


@user.command("add")
@click.option("--username", required=True)
@click.option("--password", required=True)
@click.option("--role", required=True, type=click.Choice(["FACILITIES_ADMIN", "WORK_UNIT", "LEADERSHIP"]))
@click.option("--work-unit", default=None)
@click.option("--location", "locations", multiple=True, metavar="CAMPUS:CODE", help="assign a location")
@pass_context
def user_add(ctx, username, password, role, work_unit, locations):
    parsed = []
    for raw in locations:
        campus, _, code = raw.partition(":")
        if not code:
            raise bail("INVALID_REQUEST", f"--location wants CAMPUS:CODE, got {raw!r}")
        parsed.append((campus, code))
    if ctx.is_remote:
        body = ctx.remote().json(
            "POST",
            "/api/users",
            json={
                "username": username,
                "password": password,
                "role": role,
                "work_unit_name": work_unit,
                "assigned_locations": [
                    {"campus_code": c, "location_code": l} for c, l in parsed
                ],
            },
        )
        emit(ctx, body)
        return
    backend = ctx.backend()
    created = backend.auth.add_user(username, password, role, work_unit, locations=parsed)
    emit(ctx, wire.user_wire(backend.store.state, created))


@user.command("list")
@pass_context
def user_list(ctx):
    if ctx.is_remote:
        users = ctx.remote().json("GET", "/api/users")
    else:
        backend = ctx.backend()
        users = [wire.user_wire(backend.store.state, u) for u in backend.auth.list_users()]
    rows = [[u["username"], u["role"], u["work_unit_name"] or "", u["active"]] for u in users]
    emit(ctx, users, table_rows=(["username", "role", "work unit", "active"], rows))


@user.command("deactivate")
@click.argument("username")
@pass_context
def user_deactivate(ctx, username):
    if ctx.is_remote:
        emit(ctx, ctx.remote().json("DELETE", f"/api/users/{username}"))
        return
    backend = ctx.backend()
    updated = backend.auth.deactivate_user(username)
    emit(ctx, wire.user_wire(backend.store.state, updated))


# -- references -------------------------------------------------------------------

KIND_PATHS = {
    "CAMPUS": "campuses",
    "LOCATION": "locations",
    "CATEGORY": "categories",
    "TYPE": "types",
    "BRAND": "brands",
    "SOURCE": "sources",
}


@main.group()
def ref():
    """Manage reference data."""


@ref.command("upsert")
@click.argument("kind", type=click.Choice(list(KIND_PATHS), case_sensitive=False))
@click.option("--code", required=True)
@click.option("--name", required=True)
@click.option("--address", default=None)
@click.option("--floor", type=int, default=None)
@click.option("--campus", "campus_code", default=None)
@pass_context
def ref_upsert(ctx, kind, code, name, address, floor, campus_code):
    kind = kind.upper()
    payload = {"code": code, "name": name}
    if address is not None:
        payload["address"] = address
    if floor is not None:
        payload["floor"] = floor
    if campus_code is not None:
        payload["campus_code"] = campus_code
    if ctx.is_remote:
        emit(ctx, ctx.remote().json("POST", f"/api/references/{KIND_PATHS[kind]}", json=payload))
        return
    backend = ctx.backend()
    stored = backend.registry.upsert_reference(kind, payload)
    emit(ctx, wire.reference_wire(backend.store.state, kind, stored))


@ref.command("list")
@click.argument("kind", type=click.Choice(list(KIND_PATHS), case_sensitive=False))
@pass_context
def ref_list(ctx, kind):
    kind = kind.upper()
    if ctx.is_remote:
        refs = ctx.remote().json("GET", f"/api/references/{KIND_PATHS[kind]}")
    else:
        backend = ctx.backend()
        refs = [
            wire.reference_wire(backend.store.state, kind, r)
            for r in backend.registry.list_references(kind)
        ]
    rows = [[r["code"], r["name"], r.get("campus_code", ""), r["active"]] for r in refs]
    emit(ctx, refs, table_rows=(["code", "name", "campus", "active"], rows))


# -- items -----------------------------------------------------------------------


@main.group()
def item():
    """Register and operate items."""


def _receipt_from_options(values: dict) -> ItemReceipt:
    return ItemReceipt(
        barcode=values["barcode"],
        name=values["name"],
        specification=values["specification"] or "",
        category_code=values["category"],
        type_code=values["type"],
        brand_code=values["brand"],
        source_code=values["source"],
        purchase_date=values["purchase_date"],
        warranty_end_date=values["warranty_end"],
        maintenance_interval_days=values["maintenance_interval"],
        campus_code=values["campus"],
        location_code=values["location"],
        custodian=values["custodian"],
    )


@item.command("register")
@click.option("--barcode", default=None, help="omit with --auto-barcode")
@click.option("--auto-barcode", is_flag=True, help="generate CAMPUS-CATEGORY-NNNNN")
@click.option("--name", required=True)
@click.option("--specification", default="")
@click.option("--category", required=True)
@click.option("--type", "type_", required=True)
@click.option("--brand", required=True)
@click.option("--source", required=True)
@click.option("--purchase-date", type=click.DateTime(["%Y-%m-%d"]), required=True)
@click.option("--warranty-end", type=click.DateTime(["%Y-%m-%d"]), default=None)
@click.option("--maintenance-interval", type=int, default=None, help="days between services")
@click.option("--campus", required=True)
@click.option("--location", required=True)
@click.option("--custodian", required=True)
@pass_context
def item_register(ctx, **values):
    values["type"] = values.pop("type_")
    values["purchase_date"] = values["purchase_date"].date()
    if values["warranty_end"] is not None:
        values["warranty_end"] = values["warranty_end"].date()
    if ctx.is_remote:
        if values.pop("auto_barcode"):
            raise bail("CONFIG_ERROR", "--auto-barcode is embedded-only")
        body = {
            "barcode": values["barcode"],
            "name": values["name"],
            "specification": values["specification"] or "",
            "category_code": values["category"],
            "type_code": values["type"],
            "brand_code": values["brand"],
            "source_code": values["source"],
            "purchase_date": values["purchase_date"].isoformat(),
            "warranty_end_date": values["warranty_end"].isoformat() if values["warranty_end"] else None,
            "maintenance_interval_days": values["maintenance_interval"],
            "campus_code": values["campus"],
            "location_code": values["location"],
            "custodian": values["custodian"],
        }
        emit(ctx, ctx.remote().json("POST", "/api/items", json=body))
        return
    backend = ctx.backend()
    if values.pop("auto_barcode"):
        values["barcode"] = backend.registry.suggest_barcode(values["campus"], values["category"])
    elif not values["barcode"]:
        raise bail("INVALID_REQUEST", "either --barcode or --auto-barcode is required")
    registered = backend.registry.register_item(
        _receipt_from_options(values), "system", date.today()
    )
    emit(ctx, wire.item_wire(backend.store.state, registered))


@item.command("get")
@click.argument("barcode")
@pass_context
def item_get(ctx, barcode):
    if ctx.is_remote:
        emit(ctx, ctx.remote().json("GET", f"/api/items/{barcode}"))
        return
    backend = ctx.backend()
    found = backend.registry.get_item(barcode)
    emit(ctx, wire.item_detail_wire(backend.store.state, found))


@item.command("list")
@click.option("--campus", default=None)
@click.option("--location", default=None)
@click.option("--category", default=None)
@click.option("--condition", default=None)
@click.option("--text", default=None)
@pass_context
def item_list(ctx, **filters):
    filters = {k: v for k, v in filters.items() if v is not None}
    if ctx.is_remote:
        items = ctx.remote().json("GET", "/api/items", params={**filters, "limit": 10_000})
        emit(ctx, items)
        return
    backend = ctx.backend()
    found = backend.registry.list_items(**filters)
    state = backend.store.state
    value = [wire.item_wire(state, i) for i in found]
    rows = [
        [i["barcode"], i["name"], i["condition"], f"{i['campus_code']}/{i['location_code']}"]
        for i in value
    ]
    emit(
        ctx,
        value,
        table_rows=(["barcode", "name", "condition", "location"], rows),
        csv_bytes=backend.reporting.export_csv("ITEMS", **filters),
    )


@item.command("transfer")
@click.argument("barcode")
@click.option("--to-campus", required=True)
@click.option("--to-location", required=True)
@click.option("--date", "on", type=click.DateTime(["%Y-%m-%d"]), required=True)
@click.option("--note", default=None)
@pass_context
def item_transfer(ctx, barcode, to_campus, to_location, on, note):
    if ctx.is_remote:
        body = {
            "to_campus_code": to_campus,
            "to_location_code": to_location,
            "date": on.date().isoformat(),
            "note": note,
        }
        emit(ctx, ctx.remote().json("POST", f"/api/items/{barcode}/transfer", json=body))
        return
    backend = ctx.backend()
    transfer = backend.lifecycle.transfer_item(
        barcode, to_campus, to_location, "system", on.date(), note
    )
    emit(ctx, wire.transfer_wire(backend.store.state, transfer))


@item.command("status")
@click.argument("barcode")
@click.option(
    "--event",
    required=True,
    type=click.Choice(
        ["REPORT_LIGHT_DAMAGE", "REPORT_HEAVY_DAMAGE", "REPORT_LOST", "DONATE", "REPAIR_COMPLETE", "RECOVER"]
    ),
)
@click.option("--date", "on", type=click.DateTime(["%Y-%m-%d"]), required=True)
@click.option("--note", default=None)
@pass_context
def item_status(ctx, barcode, event, on, note):
    if ctx.is_remote:
        body = {"event": event, "date": on.date().isoformat(), "note": note}
        emit(ctx, ctx.remote().json("POST", f"/api/items/{barcode}/status", json=body))
        return
    backend = ctx.backend()
    change = backend.lifecycle.change_status(barcode, event, "system", on.date(), note)
    emit(ctx, wire.status_change_wire(backend.store.state, change))


# -- findings ---------------------------------------------------------------------


@main.group()
def finding():
    """Monitoring findings workflow."""


@finding.command("submit")
@click.option("--barcode", default=None)
@click.option("--object-name", default=None)
@click.option("--object-description", default=None)
@click.option("--date", "on", type=click.DateTime(["%Y-%m-%d"]), required=True)
@click.option("--campus", required=True)
@click.option("--location", required=True)
@click.option("--finding", "finding_text", required=True)
@click.option("--recommendation", default="")
@click.option("--reporter", default=None, help="reporting username (embedded mode)")
@pass_context
def finding_submit(ctx, barcode, object_name, object_description, on, campus, location, finding_text, recommendation, reporter):
    if ctx.is_remote:
        body = {
            "barcode": barcode,
            "object_name": object_name,
            "object_description": object_description,
            "date": on.date().isoformat(),
            "campus_code": campus,
            "location_code": location,
            "finding": finding_text,
            "recommendation": recommendation,
        }
        emit(ctx, ctx.remote().json("POST", "/api/monitoring", json=body))
        return
    backend = ctx.backend()
    if reporter is None:
        raise bail("INVALID_REQUEST", "--reporter USERNAME is required in embedded mode")
    user = records.user_by_username(backend.store.state, reporter)
    if user is None:
        raise bail("UNKNOWN_USER", f"no user {reporter!r}")
    record = backend.monitoring.submit_finding(
        reporter=user,
        finding=finding_text,
        recommendation=recommendation,
        on=on.date(),
        campus_code=campus,
        location_code=location,
        barcode=barcode,
        object_name=object_name,
        object_description=object_description,
    )
    emit(ctx, wire.finding_wire(backend.store.state, record))


@finding.command("follow-up")
@click.argument("record_id")
@click.option("--note", required=True)
@click.option("--actor", default=None, help="acting admin username (embedded; default system)")
@pass_context
def finding_follow_up(ctx, record_id, note, actor):
    if ctx.is_remote:
        emit(ctx, ctx.remote().json("POST", f"/api/monitoring/{record_id}/follow-up", json={"note": note}))
        return
    backend = ctx.backend()
    record = backend.monitoring.follow_up(record_id, note, _acting_admin(backend, actor))
    emit(ctx, wire.finding_wire(backend.store.state, record))


@finding.command("resolve")
@click.argument("record_id")
@click.option("--resolution-date", type=click.DateTime(["%Y-%m-%d"]), required=True)
@click.option("--actor", default=None, help="acting admin username (embedded; default system)")
@pass_context
def finding_resolve(ctx, record_id, resolution_date, actor):
    if ctx.is_remote:
        body = {"resolution_date": resolution_date.date().isoformat()}
        emit(ctx, ctx.remote().json("POST", f"/api/monitoring/{record_id}/resolve", json=body))
        return
    backend = ctx.backend()
    record = backend.monitoring.resolve(record_id, resolution_date.date(), _acting_admin(backend, actor))
    emit(ctx, wire.finding_wire(backend.store.state, record))


def _acting_admin(backend: Backend, username: str | None) -> dict:
    if username is None:
        return SYSTEM_ADMIN
    user = records.user_by_username(backend.store.state, username)
    if user is None:
        raise bail("UNKNOWN_USER", f"no user {username!r}")
    return user


@finding.command("list")
@click.option("--status", default=None)
@click.option("--campus", default=None)
@click.option("--location", default=None)
@click.option("--condition-of-item", default=None)
@click.option("--from", "date_from", type=click.DateTime(["%Y-%m-%d"]), default=None)
@click.option("--to", "date_to", type=click.DateTime(["%Y-%m-%d"]), default=None)
@click.option("--reporter", default=None)
@pass_context
def finding_list(ctx, **filters):
    filters = {k: v for k, v in filters.items() if v is not None}
    for key in ("date_from", "date_to"):
        if key in filters:
            filters[key] = filters[key].date()
    if ctx.is_remote:
        params = {
            {"date_from": "from", "date_to": "to"}.get(k, k): v.isoformat() if isinstance(v, date) else v
            for k, v in filters.items()
        }
        emit(ctx, ctx.remote().json("GET", "/api/monitoring", params={**params, "limit": 10_000}))
        return
    backend = ctx.backend()
    found = backend.monitoring.list_records(**filters)
    state = backend.store.state
    value = [wire.finding_wire(state, r) for r in found]
    rows = [[r["id"][:8], r["date"], r["status"], r["object_name"], r["finding"][:40]] for r in value]
    emit(
        ctx,
        value,
        table_rows=(["id", "date", "status", "object", "finding"], rows),
        csv_bytes=backend.reporting.export_csv("MONITORING", **filters),
    )


# -- reports and bulk data -----------------------------------------------------------


@main.group()
def report():
    """Aggregated reports."""


@report.command("summary")
@click.option("--from", "period_from", type=click.DateTime(["%Y-%m-%d"]), required=True)
@click.option("--to", "period_to", type=click.DateTime(["%Y-%m-%d"]), required=True)
@click.option("--as-of", type=click.DateTime(["%Y-%m-%d"]), default=None)
@pass_context
def report_summary(ctx, period_from, period_to, as_of):
    period_from, period_to = period_from.date(), period_to.date()
    as_of = as_of.date() if as_of else period_to
    if ctx.is_remote:
        params = {"from": period_from.isoformat(), "to": period_to.isoformat(), "as_of": as_of.isoformat()}
        emit(ctx, ctx.remote().json("GET", "/api/reports/summary", params=params))
        return
    backend = ctx.backend()
    summary = backend.reporting.summary(period_from, period_to, as_of)
    rows = [[k, v] for k, v in summary.items() if not isinstance(v, dict)]
    emit(
        ctx,
        summary,
        table_rows=(["metric", "value"], rows),
        csv_bytes=backend.reporting.export_csv(
            "SUMMARY", period_from=period_from, period_to=period_to, as_of=as_of
        ),
    )


@main.group(name="import")
def import_():
    """Bulk imports."""


@import_.command("items")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@pass_context
def import_items(ctx, path):
    """Import items from CSV; all rows commit together or not at all."""
    backend = ctx.backend()
    count = run_items_import(backend, Path(path))
    click.echo(f"{count} items imported")


@main.command()
@click.argument("dataset", type=click.Choice(["items", "monitoring", "summary"]))
@click.argument("path", type=click.Path(dir_okay=False, writable=True))
@click.option("--from", "period_from", type=click.DateTime(["%Y-%m-%d"]), default=None)
@click.option("--to", "period_to", type=click.DateTime(["%Y-%m-%d"]), default=None)
@click.option("--as-of", type=click.DateTime(["%Y-%m-%d"]), default=None)
@pass_context
def export(ctx, dataset, path, period_from, period_to, as_of):
    """Write a dataset as CSV to PATH."""
    if ctx.is_remote:
        params = {}
        if dataset == "summary":
            if not (period_from and period_to):
                raise bail("INVALID_PERIOD", "summary export needs --from and --to")
            params = {"from": period_from.date().isoformat(), "to": period_to.date().isoformat()}
            if as_of:
                params["as_of"] = as_of.date().isoformat()
        data = ctx.remote().request("GET", f"/api/export/{dataset}.csv", params=params).content
    else:
        backend = ctx.backend()
        kwargs = {}
        if dataset == "summary":
            if not (period_from and period_to):
                raise bail("INVALID_PERIOD", "summary export needs --from and --to")
            kwargs = {"period_from": period_from.date(), "period_to": period_to.date()}
            if as_of:
                kwargs["as_of"] = as_of.date()
        data = backend.reporting.export_csv(dataset.upper(), **kwargs)
    Path(path).write_bytes(data)
    click.echo(f"wrote {path}")


def run_items_import(backend: Backend, path: Path) -> int:
    """Parse and register every row of an item CSV in one transaction."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv_mod.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise bail("HEADER_MISMATCH", "file is empty, expected the item CSV header") from None
        if header != ITEM_CSV_HEADER:
            raise bail(
                "HEADER_MISMATCH",
                f"expected header {','.join(ITEM_CSV_HEADER)!r}",
                found=header,
            )
        receipts = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(ITEM_CSV_HEADER):
                raise bail("INVALID_ROW", f"line {line_no}: expected {len(ITEM_CSV_HEADER)} fields")
            values = dict(zip(ITEM_CSV_HEADER, row))
            try:
                receipts.append(
                    ItemReceipt(
                        barcode=values["barcode"],
                        name=values["name"],
                        specification=values["specification"],
                        category_code=values["category_code"],
                        type_code=values["type_code"],
                        brand_code=values["brand_code"],
                        source_code=values["source_code"],
                        purchase_date=date.fromisoformat(values["purchase_date"]),
                        warranty_end_date=(
                            date.fromisoformat(values["warranty_end_date"])
                            if values["warranty_end_date"]
                            else None
                        ),
                        maintenance_interval_days=(
                            int(values["maintenance_interval_days"])
                            if values["maintenance_interval_days"]
                            else None
                        ),
                        campus_code=values["campus_code"],
                        location_code=values["location_code"],
                        custodian=values["custodian"],
                    )
                )
            except ValueError as exc:
                raise bail("INVALID_ROW", f"line {line_no}: {exc}") from None
    try:
        items = backend.registry.register_items(receipts, "system", date.today())
    except DomainError as exc:
        if "index" in exc.details:
            line_no = exc.details["index"] + 2
            raise bail(exc.code, f"line {line_no}: {exc.message}", line=line_no) from None
        raise
    return len(items)


def run() -> None:  # console entry point wrapper
    try:
        main(standalone_mode=False)
    except DomainError as exc:
        click.echo(f"error [{exc.code}]: {exc.message}", err=True)
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)


if __name__ == "__main__":
    run()
