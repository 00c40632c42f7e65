import io
import json
from pathlib import Path

import jsonschema
import pytest

from conftest import SUITE
from rackgeom.api.parsers import (
    emit_rack_json,
    emit_rack_text,
    parse_group_spec_text,
    parse_rack_json,
    parse_rack_text,
)
from rackgeom.core.errors import NotAQuandle, ParseError
from rackgeom.main import main
from rackgeom.models.report import Report

DIHEDRAL3_JSON = '{"size": 3, "table": [[0, 2, 1], [2, 1, 0], [1, 0, 2]]}'

S3_SPEC = """PERM 3
# symmetric group on 3 points
(0 1)
(0 1 2)
REP (0 1) | Z
"""


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# === Parsers ===


def test_parse_dihedral3_json():
    rack = parse_rack_json(DIHEDRAL3_JSON)
    assert rack.table == ((0, 2, 1), (2, 1, 0), (1, 0, 2))
    assert rack.is_quandle


@pytest.mark.parametrize("name", sorted(SUITE))
def test_emit_then_parse_is_identity(name):
    rack = SUITE[name]
    assert parse_rack_json(emit_rack_json(rack)).table == rack.table
    assert parse_rack_text(emit_rack_text(rack)).table == rack.table


def test_out_of_range_entry_has_position():
    text = '{"size": 3,\n "table": [[0, 2, 1],\n           [2, 7, 0],\n           [1, 0, 2]]}'
    with pytest.raises(ParseError) as exc:
        parse_rack_json(text)
    assert (exc.value.line, exc.value.col) == (3, 16)


def test_text_format_errors():
    with pytest.raises(ParseError) as exc:
        parse_rack_text("RACK 2\n0 1\n1 x\n")
    assert (exc.value.line, exc.value.col) == (3, 3)
    with pytest.raises(ParseError):
        parse_rack_text("RING 2\n0 1\n1 0\n")
    with pytest.raises(ParseError):
        parse_rack_text("RACK 2\n0 1\n")
    with pytest.raises(NotAQuandle):
        parse_rack_text("QUANDLE 2\n1 0\n1 0\n")


def test_malformed_json():
    with pytest.raises(ParseError) as exc:
        parse_rack_json('{"size": 3, "table": [')
    assert exc.value.line == 1


def test_group_spec():
    seed = parse_group_spec_text(S3_SPEC)
    assert seed.degree == 3
    assert seed.generators == [(1, 0, 2), (1, 2, 0)]
    assert seed.reps == [((1, 0, 2), None)]

    seed = parse_group_spec_text("PERM 3\n(0 1 2)\nREP (0 1 2) |\n")
    assert seed.reps == [((1, 2, 0), [])]
    with pytest.raises(ParseError) as exc:
        parse_group_spec_text("PERM 3\n(0 4)\n")
    assert exc.value.line == 2


# === Commands ===


def test_gen_dihedral(capsys):
    code, out, _ = run(capsys, ["gen", "dihedral", "3"])
    assert code == 0
    assert json.loads(out)["table"] == [[0, 2, 1], [2, 1, 0], [1, 0, 2]]


def test_gen_text_format(capsys):
    code, out, _ = run(capsys, ["gen", "cyclic", "2", "--text"])
    assert code == 0
    assert out == "RACK 2\n1 0\n1 0\n"


def test_betti_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(DIHEDRAL3_JSON))
    code, out, _ = run(capsys, ["betti", "-", "--theory", "rack", "--max-degree", "3"])
    assert code == 0
    report = json.loads(out)
    assert report["tool"] == "rackgeom"
    assert report["command"] == "betti"
    assert report["payload"]["betti"] == [1, 1, 1]
    assert report["payload"]["match"] is True


def test_amenable_check_dihedral4_quandle(capsys, tmp_path):
    path = write(tmp_path, "d4.json", emit_rack_json(SUITE["dihedral(4)"]))
    code, out, _ = run(capsys, ["amenable-check", path, "--theory", "quandle", "--max-degree", "3"])
    assert code == 0
    payload = json.loads(out)["payload"]
    assert payload["betti"] == [2, 2, 2]
    assert payload["complement_betti"] == [0, 0, 0]
    assert payload["match"] is True


def test_reports_are_deterministic(capsys, tmp_path):
    path = write(tmp_path, "d5.json", emit_rack_json(SUITE["dihedral(5)"]))
    first = run(capsys, ["metric", path, "--pairs"])[1]
    second = run(capsys, ["metric", path, "--pairs"])[1]
    assert first == second
    payload = json.loads(first)["payload"]
    assert payload["diameters"] == [max(max(r) for r in payload["components"]["0"]["distances"])]


def test_timing_is_opt_in(capsys, tmp_path):
    path = write(tmp_path, "d3.json", DIHEDRAL3_JSON)
    assert "timing" not in json.loads(run(capsys, ["components", path])[1])
    assert "timing" in json.loads(run(capsys, ["--timing", "components", path])[1])


def test_fq_distance(capsys):
    code, out, _ = run(capsys, ["fq", "distance", "--target", "y^3@x"])
    assert code == 0
    payload = json.loads(out)["payload"]
    assert payload["distance"] == 3
    assert payload["exact"] is True


def test_fq_quasimorphism_chain(capsys):
    code, out, _ = run(capsys, ["fq", "quasimorphism", "--radius", "2", "--mover-len", "1"])
    assert code == 0
    payload = json.loads(out)["payload"]
    assert [entry["value"] for entry in payload["chain"]] == list(range(7))
    assert payload["function"] == "hat_phi"


def test_fq_ball(capsys):
    code, out, _ = run(capsys, ["fq", "ball", "--radius", "2", "--conjlen", "0"])
    assert code == 0
    payload = json.loads(out)["payload"]
    assert payload["layer_sizes"][0] == 2
    assert payload["lower_diameter"] >= 2


def test_verify_non_rack(capsys, tmp_path):
    path = write(tmp_path, "bad.txt", "RACK 2\n1 0\n0 1\n")
    code, _, err = run(capsys, ["verify", path])
    assert code == 3
    assert "A1" in err


def test_parse_error_exit_code(capsys, tmp_path):
    path = write(tmp_path, "bad.json", '{"size": 3, "table": [[0, 2, 1], [2, 7, 0], [1, 0, 2]]}')
    code, _, err = run(capsys, ["verify", path])
    assert code == 2
    assert err.startswith("error: ParseError")


def test_resource_cap_exit_code(capsys, tmp_path):
    path = write(tmp_path, "d6.json", emit_rack_json(SUITE["dihedral(6)"]))
    code, _, err = run(capsys, ["betti", path, "--max-degree", "4"])
    assert code == 4
    assert "DegreeTooLarge" in err


def test_quotient_check_and_coset_gen(capsys, tmp_path):
    spec = write(tmp_path, "s3.perm", S3_SPEC)
    code, out, _ = run(capsys, ["quotient-check", spec])
    assert code == 0
    assert json.loads(out)["payload"]["equal"] is True

    code, out, _ = run(capsys, ["gen", "coset", spec])
    assert code == 0
    assert json.loads(out)["size"] == 3


def test_rack_reports(capsys, tmp_path):
    path = write(tmp_path, "c4.json", emit_rack_json(SUITE["cyclic(4)"]))
    assert json.loads(run(capsys, ["verify", path])[1])["payload"]["quandle"] is False
    assert json.loads(run(capsys, ["inn", path, "--norm"])[1])["payload"]["order"] == 4
    assert json.loads(run(capsys, ["extension", path])[1])["payload"]["quotient_size"] == 1
    assert json.loads(run(capsys, ["joyce", path])[1])["payload"]["verified"] is True
    assert json.loads(run(capsys, ["defect", path])[1])["payload"]["defect"] == "1"


def test_json_output_file(capsys, tmp_path):
    path = write(tmp_path, "d3.json", DIHEDRAL3_JSON)
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, ["--json", str(target), "--seed", "7", "components", path])
    assert code == 0
    assert out == ""
    report = json.loads(target.read_text())
    assert report["input"]["seed"] == 7
    assert report["payload"]["count"] == 1


# === Configuration and logging ===


def test_settings_from_environment(monkeypatch):
    from rackgeom.core.config import Settings

    monkeypatch.setenv("RACKGEOM_GROUP_CAP", "5000")
    monkeypatch.setenv("RACKGEOM_LOG_JSON", "true")
    loaded = Settings()
    assert loaded.GROUP_CAP == 5000
    assert loaded.LOG_JSON is True
    assert loaded.FQ_DISTANCE_RADIUS == 6


def test_json_logging():
    import logging

    from pythonjsonlogger import jsonlogger

    from rackgeom.core.logging_config import configure_logging

    configure_logging("info", json_format=True)
    logger = logging.getLogger("rackgeom")
    assert logger.level == logging.INFO
    assert isinstance(logger.handlers[0].formatter, jsonlogger.JsonFormatter)
    configure_logging()
    assert logger.level == logging.WARNING


# === Input decoding, flags and the report schema ===


def test_invalid_utf8_is_a_parse_error(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_bytes(b"RACK 2\n0 1\n1 \xff\n")
    code, _, err = run(capsys, ["verify", str(path)])
    assert code == 2
    assert err.startswith("error: ParseError: line 3, column 3")


def test_invalid_utf8_on_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.TextIOWrapper(io.BytesIO(b"\xff\xfe")))
    code, _, err = run(capsys, ["verify", "-"])
    assert code == 2
    assert "UTF-8" in err


def test_unknown_log_level_is_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--log-level", "bogus", "gen", "trivial", "2"])
    assert exc.value.code == 2
    assert run(capsys, ["--log-level", "debug", "gen", "trivial", "1"])[0] == 0


def test_metric_flags(capsys, tmp_path):
    path = write(tmp_path, "d4.json", emit_rack_json(SUITE["dihedral(4)"]))
    default = json.loads(run(capsys, ["metric", path])[1])["payload"]
    assert default == {"diameters": [1, 1], "component_sizes": [2, 2]}
    only = json.loads(run(capsys, ["metric", path, "--diameters"])[1])["payload"]
    assert only == {"diameters": [1, 1]}


def test_seeded_property_checks(capsys, tmp_path):
    path = write(tmp_path, "d4.json", emit_rack_json(SUITE["dihedral(4)"]))
    argv = ["--seed", "11", "amenable-check", path, "--max-degree", "2", "--samples", "10"]
    first = run(capsys, argv)[1]
    assert first == run(capsys, argv)[1]
    checks = json.loads(first)["payload"]["property_checks"]
    assert checks == {"seed": 11, "samples": 10, "failures": 0, "passed": True}
    unseeded = json.loads(run(capsys, argv[2:])[1])["payload"]
    assert "property_checks" not in unseeded


def test_reports_match_published_schema(capsys, tmp_path):
    schema = json.loads((Path(__file__).parent / "docs" / "report.schema.json").read_text())
    generated = Report.model_json_schema()
    assert set(schema["properties"]) == set(generated["properties"])
    assert schema["required"] == generated["required"]

    path = write(tmp_path, "d3.json", DIHEDRAL3_JSON)
    for argv in (
        ["--timing", "components", path],
        ["betti", path, "--max-degree", "2"],
        ["fq", "distance", "--target", "y^2@x"],
    ):
        jsonschema.validate(instance=json.loads(run(capsys, argv)[1]), schema=schema)
