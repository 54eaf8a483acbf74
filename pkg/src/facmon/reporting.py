"""Aggregated views and the periodic summary report, plus CSV exports.

All operations are read-only over a committed snapshot; two calls with the
same arguments and no intervening commits return equal results.
"""

from __future__ import annotations

import csv
import io
from datetime import date

from . import records
from .domain import Condition, FindingStatus, TERMINAL_CONDITIONS, warranty_status, WarrantyState
from .errors import bail
from .lifecycle import LifecycleService
from .monitoring import MonitoringService
from .registry import ITEM_CSV_HEADER, RegistryService

MONITORING_CSV_HEADER = [
    "id",
    "barcode",
    "object_name",
    "date",
    "location_code",
    "finding",
    "recommendation",
    "status",
    "resolution_date",
    "reporter",
]

DATASETS = ("ITEMS", "MONITORING", "SUMMARY")

WARRANTY_ALERT_WINDOW_DAYS = 30


class ReportingService:
    def __init__(
        self,
        store,
        registry: RegistryService,
        lifecycle: LifecycleService,
        monitoring: MonitoringService,
    ):
        self.store = store
        self.registry = registry
        self.lifecycle = lifecycle
        self.monitoring = monitoring

    # -- the periodic summary ----------------------------------------------------

    def summary(self, period_from: date, period_to: date, as_of: date) -> dict:
        """Inventory snapshot plus finding throughput for the period.

        Item counts are taken over current committed state; finding counts are
        scoped to the period; the mean resolution latency averages over
        records resolved within the period.
        """
        if period_from > period_to:
            raise bail("INVALID_PERIOD", "period start is after its end")
        if as_of < period_to:
            raise bail("INVALID_PERIOD", "as_of must not precede the period end")
        state = self.store.state

        by_condition = {c.value: 0 for c in Condition}
        by_campus: dict[str, int] = {}
        by_category: dict[str, int] = {}
        expiring = 0
        total = 0
        for _, item in state.all(records.ITEM):
            total += 1
            by_condition[item["condition"]] += 1
            campus_code = records.campus_code_of_location(state, item["location_id"]) or "?"
            by_campus[campus_code] = by_campus.get(campus_code, 0) + 1
            category_code = records.taxonomy_code_of(state, item["category_id"]) or "?"
            by_category[category_code] = by_category.get(category_code, 0) + 1
            if item["condition"] not in TERMINAL_CONDITIONS:
                status = warranty_status(records.parse_date(item["warranty_end_date"]), as_of)
                if status.state is WarrantyState.IN_WARRANTY and status.days <= WARRANTY_ALERT_WINDOW_DAYS:
                    expiring += 1

        opened = resolved = open_at_end = 0
        latencies: list[int] = []
        for _, rec in state.all(records.MONITORING):
            rec_date = records.parse_date(rec["date"])
            res_date = records.parse_date(rec["resolution_date"])
            if period_from <= rec_date <= period_to:
                opened += 1
            if res_date is not None and period_from <= res_date <= period_to:
                resolved += 1
                latencies.append((res_date - rec_date).days)
            if rec_date <= period_to and (res_date is None or res_date > period_to):
                open_at_end += 1

        return {
            "period": {"from": records.iso(period_from), "to": records.iso(period_to)},
            "as_of": records.iso(as_of),
            "items_total": total,
            "items_by_condition": by_condition,
            "items_by_campus": dict(sorted(by_campus.items())),
            "items_by_category": dict(sorted(by_category.items())),
            "findings_opened": opened,
            "findings_resolved": resolved,
            "findings_open_at_end": open_at_end,
            "mean_resolution_days": (sum(latencies) / len(latencies)) if latencies else None,
            "warranty_expiring_within_30_days": expiring,
        }

    # -- views ----------------------------------------------------------------------

    def condition_view(self, condition: Condition | str) -> list[dict]:
        """Exactly the items currently in ``condition``, by barcode."""
        wanted = Condition(condition).value
        return [i for i in records.items_sorted(self.store.state) if i["condition"] == wanted]

    def location_view(self, campus_code: str, location_code: str) -> dict:
        """Items at the location plus its unresolved monitoring records."""
        state = self.store.state
        location = records.location_by_address(state, campus_code, location_code)
        if location is None:
            raise bail("UNKNOWN_LOCATION", f"no location {campus_code}/{location_code}")
        items = [i for i in records.items_sorted(state) if i["location_id"] == location["id"]]
        findings = [
            r
            for r in self.monitoring.list_records(campus=campus_code, location=location_code)
            if r["status"] != FindingStatus.RESOLVED.value
        ]
        return {"location": location, "items": items, "open_findings": findings}

    # -- CSV export -------------------------------------------------------------------

    def export_csv(self, dataset: str, **filters) -> bytes:
        """UTF-8 CSV with a header row and deterministic row order."""
        dataset = dataset.upper()
        if dataset == "ITEMS":
            return self._export_items(**filters)
        if dataset == "MONITORING":
            return self._export_monitoring(**filters)
        if dataset == "SUMMARY":
            return self._export_summary(**filters)
        raise bail("UNKNOWN_DATASET", f"dataset must be one of {DATASETS}")

    @staticmethod
    def _sheet(header: list[str], rows: list[list]) -> bytes:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue().encode("utf-8")

    def item_csv_row(self, item: dict) -> list[str]:
        state = self.store.state
        interval = item["maintenance_interval_days"]
        return [
            item["barcode"],
            item["name"],
            item["specification"],
            records.taxonomy_code_of(state, item["category_id"]) or "",
            records.taxonomy_code_of(state, item["type_id"]) or "",
            records.taxonomy_code_of(state, item["brand_id"]) or "",
            records.taxonomy_code_of(state, item["source_id"]) or "",
            item["purchase_date"],
            item["warranty_end_date"] or "",
            str(interval) if interval is not None else "",
            records.campus_code_of_location(state, item["location_id"]) or "",
            records.location_code_of(state, item["location_id"]) or "",
            item["custodian"],
        ]

    def _export_items(self, **filters) -> bytes:
        items = self.registry.list_items(**filters)  # already barcode-ordered
        return self._sheet(ITEM_CSV_HEADER, [self.item_csv_row(i) for i in items])

    def _export_monitoring(self, **filters) -> bytes:
        state = self.store.state
        rows = []
        for rec in sorted(self.monitoring.list_records(**filters), key=lambda r: r["id"]):
            user = state.get(records.USER, rec["reporter"])
            rows.append(
                [
                    rec["id"],
                    rec["barcode"] or "",
                    rec["object_name"],
                    rec["date"],
                    records.location_code_of(state, rec["location_id"]) or "",
                    rec["finding"],
                    rec["recommendation"],
                    rec["status"],
                    rec["resolution_date"] or "",
                    user["username"] if user else rec["reporter"],
                ]
            )
        return self._sheet(MONITORING_CSV_HEADER, rows)

    def _export_summary(self, period_from: date, period_to: date, as_of: date | None = None) -> bytes:
        report = self.summary(period_from, period_to, as_of if as_of is not None else period_to)
        rows: list[list] = [
            ["period_from", report["period"]["from"]],
            ["period_to", report["period"]["to"]],
            ["as_of", report["as_of"]],
            ["items_total", report["items_total"]],
        ]
        for condition in Condition:
            rows.append([f"items_by_condition.{condition.value}", report["items_by_condition"][condition.value]])
        for code, count in report["items_by_campus"].items():
            rows.append([f"items_by_campus.{code}", count])
        for code, count in report["items_by_category"].items():
            rows.append([f"items_by_category.{code}", count])
        rows += [
            ["findings_opened", report["findings_opened"]],
            ["findings_resolved", report["findings_resolved"]],
            ["findings_open_at_end", report["findings_open_at_end"]],
            ["mean_resolution_days", "" if report["mean_resolution_days"] is None else report["mean_resolution_days"]],
            ["warranty_expiring_within_30_days", report["warranty_expiring_within_30_days"]],
        ]
        return self._sheet(["metric", "value"], rows)
