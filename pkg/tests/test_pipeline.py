import json

import jsonschema
import pytest

from a2boundary.cli import main
from a2boundary.group import load_preset
from a2boundary.pipeline import ConfigError, PipelineConfig, load_config, run_pipeline
from a2boundary.report import (
    VerificationReport,
    emit_report,
    exit_code,
    report_body,
    validate_report,
)


def test_radius_zero_rejected(tmp_path):
    with pytest.raises(ConfigError):
        run_pipeline(PipelineConfig(radius=0, out_dir=str(tmp_path)))
    assert not any(tmp_path.iterdir())


def test_small_radius_rejected_for_matrices(tmp_path):
    with pytest.raises(ConfigError, match="too small"):
        run_pipeline(PipelineConfig(radius=6, out_dir=str(tmp_path)), stages=("matrices",))


def test_build_only_small_radius(tmp_path):
    cfg = PipelineConfig(radius=5, out_dir=str(tmp_path))
    rep = run_pipeline(cfg, stages=("build", "links"))
    assert rep.status == "pass" and rep.complete
    assert rep["chambers per vertex k"].observed == {"subgroup": 21, "ball": 21}
    validate_report(json.loads((tmp_path / "report.json").read_text()))
    # second run hits the cache and gives the same body
    again = run_pipeline(cfg, stages=("build", "links"))
    assert report_body(again) == report_body(rep)
    assert list((tmp_path / "cache").iterdir())


def test_hard_failure_marks_incomplete(tmp_path):
    doc = load_preset().to_dict()
    doc["panels"][0]["generators"] = ["s0", "s1"]  # closure far bigger than q+1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    cfg = PipelineConfig(preset=None, datum_path=str(path), radius=5, out_dir=str(tmp_path))
    rep = run_pipeline(cfg, stages=("build",))
    assert not rep.complete and rep.status == "fail"
    assert "DatumError" in rep["stage build"].counterexample
    assert exit_code(rep) == 1


def test_empty_report_is_valid():
    rep = VerificationReport()
    doc = json.loads(emit_report(rep, "json"))
    validate_report(doc)
    assert doc["checks"] == []
    md = emit_report(rep, "markdown")
    assert "| check |" not in md


def test_unknown_format():
    with pytest.raises(ValueError, match="unknown report format"):
        emit_report(VerificationReport(), "html")


def test_schema_rejects_bad_status():
    rep = VerificationReport()
    rep.add("x", True, 1, 1, "a")
    doc = rep.to_dict()
    doc["checks"][0]["status"] = "maybe"
    with pytest.raises(jsonschema.ValidationError):
        validate_report(doc)


def test_exit_codes():
    rep = VerificationReport()
    rep.add("a", True, 1, 1, "x")
    assert exit_code(rep) == 0
    rep.add("b", None, 1, 0, "x", status="inconclusive")
    assert exit_code(rep) == 3
    rep.add("c", False, 1, 0, "x", counterexample={"at": 0})
    assert exit_code(rep) == 1
    with pytest.raises(ValueError, match="duplicate"):
        rep.add("a", True, 1, 1, "x")


def test_markdown_groups_by_anchor():
    rep = VerificationReport()
    rep.add("one", True, 1, 1, "anchor A")
    rep.add("two", True, 1, 1, "anchor B")
    rep.add("three", False, 1, 2, "anchor A", counterexample=[1])
    md = emit_report(rep, "markdown")
    assert md.count("## anchor A") == 1
    assert md.index("three") < md.index("## anchor B")
    assert "## Counterexamples" in md


def test_config_file(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"radius": 11, "workers": 2}))
    cfg = load_config(p)
    assert cfg.radius == 11 and cfg.workers == 2 and cfg.preset == "paper-q2"
    p.write_text(json.dumps({"radius": 11, "colour": "red"}))
    with pytest.raises(ConfigError, match="unknown config keys"):
        load_config(p)


def test_cli_oracle(tmp_path, capsys):
    code = main(["oracle-snf", "--out", str(tmp_path), "-q", "--format", "json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["checks"][0]["observed"] == {"agree": 200}


def test_cli_bad_radius(tmp_path, capsys):
    assert main(["verify", "--radius", "0", "--out", str(tmp_path), "-q"]) == 2
    assert "radius" in capsys.readouterr().err


def test_cli_build_with_config(tmp_path, capsys):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"radius": 4, "out_dir": str(tmp_path / "o")}))
    assert main(["build", "--config", str(p), "--no-cache", "-q"]) == 0
    out = capsys.readouterr().out
    assert "vertex links" in out
    assert not (tmp_path / "o" / "cache").exists()
