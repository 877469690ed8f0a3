import json
from pathlib import Path

import jsonschema
import pytest

from chronohurst import __version__
from chronohurst.errors import InsufficientDataError
from chronohurst.pipeline import (
    PipelineConfig,
    ReportDocument,
    StageError,
    emit_report,
    load_report,
    run_pipeline,
)
from chronohurst.series import fixture_checksums, fixture_text, parse_csv

SCHEMA = json.loads((Path(__file__).parents[1] / "docs" / "report.schema.json").read_text())


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig()
    with pytest.raises(ValueError):
        PipelineConfig(fixture="patents", input_path="x.csv")
    with pytest.raises(ValueError):
        PipelineConfig(fixture="patents", min_window=15)
    with pytest.raises(ValueError):
        PipelineConfig(fixture="patents", step=0)
    with pytest.raises(ValueError):
        PipelineConfig(fixture="patents", hurst_method="dma")


def test_patents_verdicts_and_meta(docs):
    d = docs["patents"]
    assert d.battery["verdicts"] == {"non_normal": True, "non_stationary": True, "seasonal": True, "non_linear": True}
    assert d.battery["integration_order"] == 1
    assert d.meta["version"] == __version__
    assert d.meta["input_digest"] == fixture_checksums()["patents"]
    assert d.meta["config"]["min_window"] == 24
    assert list(d.as_dict()) == ["meta", "descriptive", "outliers", "battery", "hurst", "che", "periods"]


def test_trademarks_sd(docs):
    assert docs["trademarks"].descriptive["sd"] == pytest.approx(9418.054, abs=5)


def test_reports_validate_against_schema(docs):
    for d in docs.values():
        jsonschema.validate(json.loads(d.to_json()), SCHEMA)


def test_report_is_finite_json(docs):
    text = docs["patents"].to_json()
    assert "NaN" not in text and "Infinity" not in text


def test_emit_and_round_trip(docs, tmp_path):
    out = tmp_path / "new" / "dir"
    paths = emit_report(docs["patents"], out)
    assert [p.name for p in paths] == ["report.json", "che.csv", "clean.csv"]
    assert load_report(out / "report.json") == docs["patents"]
    assert len((out / "che.csv").read_text().splitlines()) == 1 + 449
    clean = parse_csv((out / "clean.csv").read_text(), allow_fractional=True)
    assert clean == docs["patents"].cleaned_series()


def test_report_is_byte_deterministic(docs):
    again = run_pipeline(PipelineConfig(fixture="patents", workers=4))
    assert again.to_json() == docs["patents"].to_json()


def test_input_digest_covers_the_analyzed_bytes(tmp_path):
    path = tmp_path / "tm.csv"
    path.write_bytes(fixture_text("trademarks").encode())
    d = run_pipeline(PipelineConfig(input_path=str(path), clean_mode="paper_list", step=12))
    assert d.meta["input_digest"] == fixture_checksums()["trademarks"]
    assert d.label == "tm"


def test_short_series_aborts_with_stage(tmp_path):
    path = tmp_path / "short.csv"
    path.write_text("date,value\n" + "".join(f"2000-{m:02d},{m}\n" for m in range(1, 11)))
    with pytest.raises(StageError) as info:
        run_pipeline(PipelineConfig(input_path=str(path), clean_mode="off"))
    assert info.value.stage == "battery"
    assert isinstance(info.value.__cause__, InsufficientDataError)


def test_parse_errors_are_tagged(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("date,value\n2000-01,1\n2000-03,2\n")
    with pytest.raises(StageError) as info:
        run_pipeline(PipelineConfig(input_path=str(path)))
    assert info.value.stage == "parse"


def test_paper_list_on_foreign_data_is_a_clean_error(tmp_path):
    path = tmp_path / "other.csv"
    path.write_text("date,value\n" + "".join(f"{2000 + i // 12}-{i % 12 + 1:02d},{i * 7 % 13}\n" for i in range(60)))
    with pytest.raises(StageError) as info:
        run_pipeline(PipelineConfig(input_path=str(path), clean_mode="paper_list"))
    assert info.value.stage == "clean"


def test_unwritable_directory(docs, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match=str(blocker)):
        emit_report(docs["patents"], blocker / "sub")


def test_from_dict_requires_all_sections(docs):
    d = docs["patents"].as_dict()
    d.pop("periods")
    with pytest.raises(KeyError):
        ReportDocument.from_dict(d)
