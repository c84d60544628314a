"""Command line behaviour: transcripts, exit codes, reports."""

import json
import os

import pytest

from hmiv.cli import main

from .conftest import fixture_path

FCU = fixture_path("fcu.hmi")


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as e:
        code = e.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_script(tmp_path, lines):
    path = tmp_path / "script.txt"
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def test_simulate_990(tmp_path, capsys):
    script = write_script(tmp_path, ["qnhClick", "digit9", "digit9", "digit0", "entKey"])
    code, out, _ = run(capsys, "simulate", FCU, "--script", script)
    assert code == 0
    rows = [line.split("\t") for line in out.strip().split("\n")]
    assert rows[0] == ["event", "result", "mode", "display"]
    assert rows[-1] == ["entKey", "accepted", "QNH", "990 hPa"]


def test_simulate_empty_script(tmp_path, capsys):
    script = write_script(tmp_path, [])
    code, out, _ = run(capsys, "simulate", FCU, "--script", script)
    assert code == 0
    assert out.strip().split("\n")[-1].startswith("(init)\t-\tSTD")


def test_simulate_repeated_click_ignored(tmp_path, capsys):
    script = write_script(tmp_path, ["qnhClick", "qnhClick"])
    code, out, _ = run(capsys, "simulate", FCU, "--script", script)
    assert code == 0
    last = out.strip().split("\n")[-1].split("\t")
    assert last[:3] == ["qnhClick", "ignored", "QNH"]


def test_simulate_tick_times_out(tmp_path, capsys):
    script = write_script(tmp_path, ["qnhClick", "digit5", "tick 5000"])
    code, out, _ = run(capsys, "simulate", FCU, "--script", script)
    assert code == 0
    last = out.strip().split("\n")[-1].split("\t")
    assert last[0] == "tick 5000" and last[2] == "QNH"


def test_simulate_unknown_event(tmp_path, capsys):
    script = write_script(tmp_path, ["warpDrive"])
    code, _out, err = run(capsys, "simulate", FCU, "--script", script)
    assert code == 3
    assert "unknown event" in err


def test_simulate_transcript_replays(tmp_path, capsys):
    """Feeding a transcript's event column back reproduces the transcript."""
    script = write_script(tmp_path, ["qnhClick", "digit1", "digit0", "digit1",
                                     "digit3", "entKey", "unitClick", "stdClick"])
    code, out1, _ = run(capsys, "simulate", FCU, "--script", script)
    assert code == 0
    events = [row.split("\t")[0] for row in out1.strip().split("\n")[2:]]
    script2 = write_script(tmp_path, events)
    code, out2, _ = run(capsys, "simulate", FCU, "--script", script2)
    assert code == 0
    assert out1 == out2


def test_missing_file_exit_3(capsys):
    code, _out, err = run(capsys, "check", "no_such_file.hmi")
    assert code == 3
    assert "error" in err


def test_invalid_document_exit_3(tmp_path, capsys):
    bad = tmp_path / "bad.hmi"
    bad.write_text("statechart X { initial M }")
    code, _out, err = run(capsys, "check", str(bad))
    assert code == 3
    assert "initial mode" in err


def test_check_mutant_exit_1(capsys):
    code, out, _ = run(capsys, "check", fixture_path("fcu-mutant-digit-flips-units.hmi"),
                       "--depth", "6")
    assert code == 1
    assert "violated" in out


def test_workload_text_and_json(capsys):
    code, out, _ = run(capsys, "workload", FCU, "--scope", "set_baro", "--json")
    assert code == 0
    assert "cognitive total: 4" in out
    payload = json.loads(out[out.index("{"):])
    assert payload["counts"]["perception"] == 5
    assert payload["information_items_to_remember"] == 3


def test_workload_unknown_scope(capsys):
    code, _out, err = run(capsys, "workload", FCU, "--scope", "nope")
    assert code == 3


def test_petri_report(tmp_path, capsys):
    report_dir = str(tmp_path / "rep")
    code, out, _ = run(capsys, "petri", FCU, "--report-dir", report_dir)
    assert code == 0
    assert "STD + QNH is conserved" in out
    assert "deadlocks: 0" in out
    assert "event qnhClick: always" in out
    files = os.listdir(report_dir)
    assert "barometer_invariants.csv" in files
    assert "barometer_reachability.png" in files


def test_coexec_fixture_and_junit(tmp_path, capsys):
    junit = str(tmp_path / "junit.xml")
    code, out, _ = run(capsys, "coexec", FCU, "--depth", "14", "--junit", junit)
    assert code == 0
    assert "0 divergences" in out
    text = open(junit).read()
    assert "<testsuite" in text and 'failures="0"' in text


def test_coexec_mutant_exit_1(capsys):
    code, out, _ = run(capsys, "coexec", fixture_path("fcu-mutant-no-qnhclick.hmi"),
                       "--depth", "14")
    assert code == 1
    assert "task_allowed_system_disabled" in out


def test_export_json(capsys):
    code, out, _ = run(capsys, "export-json", FCU)
    assert code == 0
    payload = json.loads(out)
    assert [m["name"] for m in payload["statecharts"]] == ["fcu"]
    assert payload["taskmodels"][0]["root"]["id"] == "perform_descent_preparation"


def test_check_fixture_small_depth(capsys):
    code, out, _ = run(capsys, "check", FCU, "--depth", "4")
    # shallow reachability leaves properties unknown; nothing is violated
    assert code == 2
    assert "violated" not in out


def test_check_report_dir(tmp_path, capsys):
    report_dir = str(tmp_path / "rep")
    code, _out, _ = run(capsys, "check", FCU, "--depth", "4", "--report-dir", report_dir)
    files = os.listdir(report_dir)
    assert "obligations.csv" in files and "verdicts.png" in files
    header = open(os.path.join(report_dir, "obligations.csv")).readline().strip()
    assert header == "obligation,status,method,coverage,witness"
