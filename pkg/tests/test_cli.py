import http.client
import json
import os
import signal
import subprocess
import sys
import time
from pathlib import Path

import pytest

from classmarks.cli import main
from classmarks.service import Application, HttpRequest, ServiceConfig
from classmarks.store import DatasetTier

from . import support


@pytest.fixture(scope="module")
def archive(tmp_path_factory):
    out = tmp_path_factory.mktemp("archive")
    code = main(["ingest", str(support.SAMPLE_DIR), "-o", str(out)])
    assert code == 0
    return out


class TestIngest:
    def test_report_counts(self, capsys, tmp_path):
        code = main(["ingest", str(support.SAMPLE_DIR), "-o", str(tmp_path / "a")])
        out = capsys.readouterr().out
        assert code == 0
        assert "40 records, 3 redirects, 2 alignments" in out

    def test_manifest_contents(self, archive, snapshot):
        manifest = json.loads((archive / "manifest.json").read_text())
        assert manifest["checksum"] == snapshot.checksum
        assert manifest["counts"] == {"records": 40, "redirects": 3, "alignments": 2}
        assert [v["label"] for v in manifest["versions"]] == ["MRF93", "MRF98", "MRF11"]

    def test_archive_is_loadable(self, archive, snapshot):
        from classmarks.service import load_snapshot_dir
        assert load_snapshot_dir(archive).checksum == snapshot.checksum

    def test_missing_file(self, capsys, tmp_path):
        code = main(["ingest", str(tmp_path), "-o", str(tmp_path / "out")])
        assert code == 2
        assert "missing ingestion file" in capsys.readouterr().err

    def test_duplicate_record_reports_line(self, capsys, tmp_path):
        src = tmp_path / "src"
        src.mkdir()
        line = '{"notation": "1", "identifier": "a", "tier": "summary", "introduced_in": {"label": "V1", "ordinal": 1}}'
        (src / "records.jsonl").write_text(line + "\n" + line + "\n")
        (src / "redirects.jsonl").write_text("")
        (src / "alignments.jsonl").write_text("")
        code = main(["ingest", str(src), "-o", str(tmp_path / "out")])
        err = capsys.readouterr().err
        assert code == 2
        assert "records.jsonl:2" in err

    def test_dangling_reference_blocks_unless_lenient(self, capsys, tmp_path):
        src = tmp_path / "src"
        src.mkdir()
        (src / "records.jsonl").write_text(
            '{"notation": "1", "identifier": "a", "tier": "summary", '
            '"introduced_in": {"label": "V1", "ordinal": 1}, "see_also": ["77"]}\n')
        (src / "redirects.jsonl").write_text("")
        (src / "alignments.jsonl").write_text("")
        assert main(["ingest", str(src), "-o", str(tmp_path / "out")]) == 2
        capsys.readouterr()
        assert main(["ingest", str(src), "-o", str(tmp_path / "out"), "--lenient"]) == 0


class TestParse:
    def test_components_printed(self, capsys):
        assert main(["parse", "681.3(035)"]) == 0
        out = capsys.readouterr().out
        assert "main 681.3" in out
        assert "form-aux (035)" in out
        assert "span=0:5" in out

    def test_language_aux(self, capsys):
        assert main(["parse", "=162.3"]) == 0
        assert "language-aux =162.3" in capsys.readouterr().out

    def test_error_with_caret(self, capsys):
        assert main(["parse", "68.13"]) == 2
        err = capsys.readouterr().err
        assert "parse error" in err
        assert "68.13\n  ^" in err


class TestLookup:
    def test_matches_service_bytes_json(self, archive, snapshot, capsysbinary):
        code = main(["lookup", "681.3(035)", "--snapshot", str(archive),
                     "--tier", "full", "--format", "json"])
        assert code == 0
        cli_bytes = capsysbinary.readouterr().out
        config = ServiceConfig(base_uri=support.BASE_URI,
                               keys={"k": DatasetTier.FULL})
        app = Application(config, snapshot)
        response = app.handle(HttpRequest.from_target(
            "GET", "/lookup?classmark=681.3(035)&key=k&format=json"))
        assert cli_bytes == response.body

    def test_matches_service_bytes_turtle(self, archive, snapshot, capsysbinary):
        assert main(["lookup", "=162.3", "--snapshot", str(archive),
                     "--tier", "summary", "--format", "ttl"]) == 0
        cli_bytes = capsysbinary.readouterr().out
        app = Application(ServiceConfig(base_uri=support.BASE_URI), snapshot)
        response = app.handle(HttpRequest.from_target(
            "GET", "/lookup?classmark=%3D162.3&format=ttl"))
        assert cli_bytes == response.body

    def test_unknown_notation_is_data_answer(self, archive, capsys):
        assert main(["lookup", "999.999", "--snapshot", str(archive)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["components"][0]["status"] == "unknown"

    def test_parse_error_exit(self, archive, capsys):
        assert main(["lookup", "68.13", "--snapshot", str(archive)]) == 2

    def test_requires_snapshot(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["lookup", "5"])
        assert exc.value.code == 1


class TestMint:
    def test_paper_uri(self, archive, capsys):
        assert main(["mint", "=162.3", "--snapshot", str(archive)]) == 0
        assert capsys.readouterr().out.strip() == "https://udcdata.info/MRF93/%3D162.3"

    def test_unknown(self, archive, capsys):
        assert main(["mint", "999.999", "--snapshot", str(archive)]) == 2

    def test_custom_base_uri(self, archive, capsys):
        assert main(["mint", "004", "--snapshot", str(archive),
                     "--base-uri", "http://example.org/kos"]) == 0
        assert capsys.readouterr().out.strip() == "http://example.org/kos/MRF98/004"


class TestUsage:
    def test_bad_flag_exits_one(self):
        with pytest.raises(SystemExit) as exc:
            main(["parse", "--bogus"])
        assert exc.value.code == 1

    def test_missing_command_exits_one(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 1


class TestServe:
    def test_bad_key_table_names_entry(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({
            "base_uri": "https://udcdata.info",
            "keys": {"abc": "platinum"},
            "snapshot": "unused",
        }))
        assert main(["serve", str(config)]) == 2
        err = capsys.readouterr().err
        assert "abc" in err and "platinum" in err

    def test_missing_snapshot_config(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"base_uri": "https://udcdata.info"}))
        assert main(["serve", str(config)]) == 2

    def test_serve_and_graceful_shutdown(self, archive, tmp_path):
        config = tmp_path / "config.json"
        port = _free_port()
        config.write_text(json.dumps({
            "base_uri": "https://udcdata.info",
            "host": "127.0.0.1",
            "port": port,
            "keys": {"full-key": "full"},
            "snapshot": str(archive),
        }))
        proc = subprocess.Popen(
            [sys.executable, "-m", "classmarks.cli", "serve", str(config)],
            stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True,
            cwd=str(Path(__file__).parent.parent))
        try:
            _wait_ready(proc)
            conn = http.client.HTTPConnection("127.0.0.1", port, timeout=10)
            conn.request("GET", "/lookup?classmark=681.3&key=full-key")
            response = conn.getresponse()
            doc = json.loads(response.read())
            conn.close()
            assert response.status == 200
            assert doc["components"][0]["status"] == "deprecated"
            proc.send_signal(signal.SIGTERM)
            assert proc.wait(timeout=10) == 0
        finally:
            if proc.poll() is None:
                proc.kill()
                proc.wait()


def _free_port() -> int:
    import socket
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def _wait_ready(proc, timeout=15.0):
    deadline = time.monotonic() + timeout
    line = ""
    while time.monotonic() < deadline:
        line = proc.stderr.readline()
        if "ready:" in line:
            return
        if proc.poll() is not None:
            break
        time.sleep(0.01)
    raise AssertionError(f"service did not become ready: {line!r}")
