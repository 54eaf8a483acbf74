"""Operator CLI: seeding, users, import/export round trips, reports, remote mode."""

import json
import socket
import subprocess
import sys
import threading
import time
from random import Random

import httpx
import pytest
import uvicorn
from click.testing import CliRunner
from fastapi.testclient import TestClient

from facmon.api import create_app
from facmon.cli import main
from facmon.core import Backend
from facmon.errors import DomainError

from conftest import make_config
from fixtures import build_fixture

runner = CliRunner()


def run_cli(*args, data_dir=None, expect_ok=True):
    argv = []
    if data_dir is not None:
        argv += ["--data-dir", str(data_dir)]
    argv += [str(a) for a in args]
    result = runner.invoke(main, argv, catch_exceptions=True)
    if expect_ok and result.exit_code != 0:
        raise AssertionError(f"cli failed: {argv}\n{result.output}\n{result.exception}")
    return result


def cli_json(*args, data_dir=None):
    result = runner.invoke(main, ["--data-dir", str(data_dir), "--output", "json", *map(str, args)])
    assert result.exit_code == 0, result.output
    return json.loads(result.output)


class TestSeed:
    def test_seed_prints_counts(self, tmp_path):
        result = run_cli("seed", data_dir=tmp_path / "data")
        assert "20 categories" in result.output

    def test_seed_inserts_c01_to_c20_in_order(self, tmp_path):
        run_cli("seed", data_dir=tmp_path / "data")
        refs = cli_json("ref", "list", "CATEGORY", data_dir=tmp_path / "data")
        assert [r["code"] for r in refs] == [f"C{i:02d}" for i in range(1, 21)]
        assert refs[0]["name"] == "Mesin ketik dan Hitung"

    def test_seed_twice_fails(self, tmp_path):
        run_cli("seed", data_dir=tmp_path / "data")
        result = run_cli("seed", data_dir=tmp_path / "data", expect_ok=False)
        assert result.exit_code != 0
        assert isinstance(result.exception, DomainError)
        assert result.exception.code == "ALREADY_SEEDED"


class TestUsers:
    def test_add_list_deactivate(self, tmp_path):
        data_dir = tmp_path / "data"
        run_cli(
            "user", "add", "--username", "bpm_admin", "--password", "password1",
            "--role", "FACILITIES_ADMIN", data_dir=data_dir,
        )
        users = cli_json("user", "list", data_dir=data_dir)
        assert [u["username"] for u in users] == ["bpm_admin"]
        run_cli("user", "deactivate", "bpm_admin", data_dir=data_dir)
        users = cli_json("user", "list", data_dir=data_dir)
        assert users[0]["active"] is False

    def test_no_password_leak_in_output(self, tmp_path):
        result = run_cli(
            "user", "add", "--username", "bpm_admin", "--password", "sup3r-secret",
            "--role", "FACILITIES_ADMIN", data_dir=tmp_path / "data",
        )
        assert "sup3r-secret" not in result.output


class TestItemsAndFindings:
    def test_register_transfer_status_get(self, tmp_path):
        data_dir = tmp_path / "data"
        run_cli("seed", data_dir=data_dir)
        run_cli(
            "item", "register", "--barcode", "ac-10", "--name", "AC Aula",
            "--category", "C07", "--type", "AC", "--brand", "GEN", "--source", "APBY",
            "--purchase-date", "2018-01-10", "--warranty-end", "2019-01-10",
            "--maintenance-interval", "90", "--campus", "B", "--location", "B.201",
            "--custodian", "Staf", data_dir=data_dir,
        )
        item = cli_json("item", "get", "AC-10", data_dir=data_dir)
        assert item["condition"] == "GOOD" and item["barcode"] == "AC-10"

        run_cli(
            "item", "transfer", "AC-10", "--to-campus", "B", "--to-location", "B.202",
            "--date", "2018-02-01", data_dir=data_dir,
        )
        run_cli(
            "item", "status", "AC-10", "--event", "REPORT_LIGHT_DAMAGE",
            "--date", "2018-03-01", data_dir=data_dir,
        )
        item = cli_json("item", "get", "AC-10", data_dir=data_dir)
        assert item["location_code"] == "B.202"
        assert item["condition"] == "LIGHT_DAMAGE"
        assert len(item["transfers"]) == 1 and len(item["status_changes"]) == 1

    def test_auto_barcode(self, tmp_path):
        data_dir = tmp_path / "data"
        run_cli("seed", data_dir=data_dir)
        run_cli(
            "item", "register", "--auto-barcode", "--name", "PC Baru",
            "--category", "C12", "--type", "PC", "--brand", "ACME", "--source", "APBY",
            "--purchase-date", "2018-01-10", "--campus", "A", "--location", "A.101",
            "--custodian", "Staf", data_dir=data_dir,
        )
        items = cli_json("item", "list", "--category", "C12", data_dir=data_dir)
        assert any(i["barcode"] == "A-C12-00001" for i in items)

    def test_finding_workflow(self, tmp_path):
        data_dir = tmp_path / "data"
        run_cli("seed", data_dir=data_dir)
        record = cli_json(
            "finding", "submit", "--object-name", "plafon", "--date", "2018-05-01",
            "--campus", "B", "--location", "B.201", "--finding", "retak",
            "--recommendation", "perbaikan", "--reporter", "unit_tu", data_dir=data_dir,
        )
        assert record["status"] == "OPEN"
        run_cli("finding", "follow-up", record["id"], "--note", "surat dikirim", data_dir=data_dir)
        resolved = cli_json(
            "finding", "resolve", record["id"], "--resolution-date", "2018-05-10", data_dir=data_dir
        )
        assert resolved["status"] == "RESOLVED"
        rows = cli_json("finding", "list", "--status", "RESOLVED", data_dir=data_dir)
        assert [r["id"] for r in rows] == [record["id"]]

    def test_report_summary(self, tmp_path):
        data_dir = tmp_path / "data"
        run_cli("seed", data_dir=data_dir)
        summary = cli_json(
            "report", "summary", "--from", "2018-01-01", "--to", "2018-12-31", data_dir=data_dir
        )
        assert summary["items_total"] == 3  # the demo fixture items
        assert sum(summary["items_by_condition"].values()) == 3


def write_csv(path, rows):
    from facmon.registry import ITEM_CSV_HEADER

    lines = [",".join(ITEM_CSV_HEADER)]
    lines += [",".join(row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


ROW_OK = [
    "MJ-001", "Meja Rapat", "kayu jati", "C05", "AC", "GEN", "APBY",
    "2018-01-05", "", "", "B", "B.201", "Staf Umum",
]
ROW_OK2 = [
    "MJ-002", "Meja Kerja", "", "C05", "AC", "GEN", "APBY",
    "2018-01-06", "2019-01-06", "30", "A", "A.101", "Staf Umum",
]


class TestImport:
    def test_header_only_imports_zero(self, tmp_path):
        data_dir = tmp_path / "data"
        run_cli("seed", data_dir=data_dir)
        csv_path = tmp_path / "items.csv"
        write_csv(csv_path, [])
        result = run_cli("import", "items", csv_path, data_dir=data_dir)
        assert "0 items imported" in result.output

    def test_import_counts(self, tmp_path):
        data_dir = tmp_path / "data"
        run_cli("seed", data_dir=data_dir)
        csv_path = tmp_path / "items.csv"
        write_csv(csv_path, [ROW_OK, ROW_OK2])
        result = run_cli("import", "items", csv_path, data_dir=data_dir)
        assert "2 items imported" in result.output
        items = cli_json("item", "list", data_dir=data_dir)
        assert len(items) == 3 + 2  # demo fixture + imported

    def test_header_mismatch(self, tmp_path):
        data_dir = tmp_path / "data"
        run_cli("seed", data_dir=data_dir)
        csv_path = tmp_path / "bad.csv"
        csv_path.write_text("barcode,name\nX,Y\n")
        result = run_cli("import", "items", csv_path, data_dir=data_dir, expect_ok=False)
        assert result.exception.code == "HEADER_MISMATCH"

    def test_duplicate_row_aborts_whole_import_with_line_number(self, tmp_path):
        data_dir = tmp_path / "data"
        run_cli("seed", data_dir=data_dir)
        before = cli_json("item", "list", data_dir=data_dir)
        csv_path = tmp_path / "dup.csv"
        dup = list(ROW_OK2)
        dup[0] = "MJ-001"  # collides with row 2
        write_csv(csv_path, [ROW_OK, dup])
        result = run_cli("import", "items", csv_path, data_dir=data_dir, expect_ok=False)
        assert result.exception.code == "DUPLICATE_BARCODE"
        assert "line 3" in result.exception.message
        after = cli_json("item", "list", data_dir=data_dir)
        assert after == before  # nothing imported

    def test_invalid_warranty_row_aborts(self, tmp_path):
        data_dir = tmp_path / "data"
        run_cli("seed", data_dir=data_dir)
        csv_path = tmp_path / "bad.csv"
        bad = list(ROW_OK)
        bad[8] = "2017-01-01"  # warranty before purchase
        write_csv(csv_path, [ROW_OK2, bad])
        result = run_cli("import", "items", csv_path, data_dir=data_dir, expect_ok=False)
        assert result.exception.code == "INVALID_WARRANTY_RANGE"
        assert "line 3" in result.exception.message
        assert len(cli_json("item", "list", data_dir=data_dir)) == 3  # demo only


def clone_references(source_dir, target_dir):
    """Recreate source's reference data (only) in another data dir via the CLI."""
    for kind in ("CAMPUS", "LOCATION", "CATEGORY", "TYPE", "BRAND", "SOURCE"):
        for ref in cli_json("ref", "list", kind, data_dir=source_dir):
            args = ["ref", "upsert", kind, "--code", ref["code"], "--name", ref["name"]]
            if kind == "CAMPUS":
                args += ["--address", ref.get("address", "")]
            if kind == "LOCATION":
                args += ["--floor", str(ref["floor"]), "--campus", ref["campus_code"]]
            run_cli(*args, data_dir=target_dir)


class TestExportImportRoundTrip:
    def test_byte_identical_round_trip(self, tmp_path):
        source_dir = tmp_path / "source"
        run_cli("seed", data_dir=source_dir)
        csv_path = tmp_path / "bulk.csv"
        write_csv(csv_path, [ROW_OK, ROW_OK2])
        run_cli("import", "items", csv_path, data_dir=source_dir)

        first_export = tmp_path / "out1.csv"
        run_cli("export", "items", first_export, data_dir=source_dir)

        # import the export into a fresh store carrying the same references
        fresh_dir = tmp_path / "fresh"
        clone_references(source_dir, fresh_dir)
        run_cli("import", "items", first_export, data_dir=fresh_dir)

        final_export = tmp_path / "out2.csv"
        run_cli("export", "items", final_export, data_dir=fresh_dir)
        assert final_export.read_bytes() == first_export.read_bytes()

    def test_summary_export_needs_period(self, tmp_path):
        data_dir = tmp_path / "data"
        run_cli("seed", data_dir=data_dir)
        result = run_cli("export", "summary", tmp_path / "s.csv", data_dir=data_dir, expect_ok=False)
        assert result.exception.code == "INVALID_PERIOD"
        run_cli(
            "export", "summary", tmp_path / "s.csv", "--from", "2018-01-01", "--to", "2018-12-31",
            data_dir=data_dir,
        )
        assert (tmp_path / "s.csv").read_text().startswith("metric,value")


class TestJsonOutputMatchesApi:
    def test_item_get_equals_api_response(self, tmp_path):
        backend = Backend(make_config(tmp_path))
        build_fixture(backend, Random(77), n_items=8, n_findings=6)
        app = create_app(backend=backend)
        with TestClient(app) as client:
            token = client.post(
                "/api/login", json={"username": "admin", "password": "fixture-pw-1"}
            ).json()["token"]
            api_item = client.get(
                "/api/items/IT-00003", headers={"Authorization": f"Bearer {token}"}
            ).json()
            api_summary = client.get(
                "/api/reports/summary?from=2018-01-01&to=2018-12-31",
                headers={"Authorization": f"Bearer {token}"},
            ).json()
        backend.close()

        cli_item = cli_json("item", "get", "IT-00003", data_dir=tmp_path / "data")
        assert cli_item == api_item
        cli_summary = cli_json(
            "report", "summary", "--from", "2018-01-01", "--to", "2018-12-31",
            data_dir=tmp_path / "data",
        )
        assert cli_summary == api_summary


class TestDataDirLock:
    def test_embedded_refuses_locked_dir(self, tmp_path):
        backend = Backend(make_config(tmp_path))  # holds the lock like a live server
        try:
            result = run_cli("user", "list", data_dir=tmp_path / "data", expect_ok=False)
            assert result.exception.code == "DATA_DIR_LOCKED"
        finally:
            backend.close()


class TestExitCodes:
    def test_console_script_error_format(self, tmp_path):
        data_dir = tmp_path / "data"
        run_cli("seed", data_dir=data_dir)
        proc = subprocess.run(
            [sys.executable, "-m", "facmon.cli", "--data-dir", str(data_dir), "item", "get", "GHOST-1"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 1
        assert "error [UNKNOWN_ITEM]" in proc.stderr

    def test_usage_error_exits_nonzero(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "facmon.cli", "item", "register"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2
        assert proc.stderr


@pytest.fixture(scope="module")
def live_server(tmp_path_factory):
    tmp_path = tmp_path_factory.mktemp("server")
    config = make_config(tmp_path)
    backend = Backend(config)
    build_fixture(backend, Random(3), n_items=6, n_findings=4)
    app = create_app(backend=backend)

    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()

    server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=port, log_level="warning"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{port}"
    for _ in range(100):
        try:
            if httpx.get(f"{base}/healthz").status_code == 200:
                break
        except httpx.TransportError:
            time.sleep(0.05)
    else:
        raise RuntimeError("server did not come up")
    token = httpx.post(
        f"{base}/api/login", json={"username": "admin", "password": "fixture-pw-1"}
    ).json()["token"]
    yield base, token
    server.should_exit = True
    thread.join(timeout=5)
    backend.close()


class TestRemoteMode:
    def test_item_get_remote(self, live_server):
        base, token = live_server
        result = runner.invoke(
            main, ["--remote", base, "--token", token, "--output", "json", "item", "get", "IT-00001"]
        )
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["barcode"] == "IT-00001"

    def test_finding_list_remote(self, live_server):
        base, token = live_server
        result = runner.invoke(
            main, ["--remote", base, "--token", token, "--output", "json", "finding", "list"]
        )
        assert result.exit_code == 0, result.output
        assert isinstance(json.loads(result.output), list)

    def test_remote_error_propagates(self, live_server):
        base, token = live_server
        result = runner.invoke(
            main, ["--remote", base, "--token", token, "item", "get", "GHOST-9"]
        )
        assert result.exit_code != 0
        assert result.exception.code == "UNKNOWN_ITEM"

    def test_embedded_only_command_refuses_remote(self, live_server):
        base, token = live_server
        result = runner.invoke(main, ["--remote", base, "--token", token, "seed"])
        assert result.exit_code != 0
        assert result.exception.code == "CONFIG_ERROR"
