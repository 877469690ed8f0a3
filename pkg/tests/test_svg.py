import xml.etree.ElementTree as ET

import pytest

from chronohurst.svg import emit_figures

NS = "{http://www.w3.org/2000/svg}"


def parse(path):
    root = ET.parse(path).getroot()
    assert root.tag == NS + "svg"
    assert root.get("viewBox") == "0 0 960 640"
    return root


def test_single_series_figure(docs, tmp_path):
    paths = emit_figures([docs["patents"]], tmp_path)
    assert [p.name for p in paths] == ["fig_patents.svg"]
    root = parse(paths[0])
    frames = [r for r in root.iter(NS + "rect") if r.get("fill") == "none"]
    # two stacked panels sharing the horizontal extent
    assert len(frames) == 2
    assert frames[0].get("x") == frames[1].get("x") and frames[0].get("width") == frames[1].get("width")
    assert float(frames[0].get("y")) < float(frames[1].get("y"))
    assert len(root.findall(NS + "path")) == 2
    years = [t.text for t in root.iter(NS + "text") if t.text and t.text.isdigit() and len(t.text) == 4]
    assert "1980" in years and "2015" in years


def test_comparison_figure(docs, tmp_path):
    paths = emit_figures([docs["patents"], docs["trademarks"]], tmp_path)
    assert {p.name for p in paths} == {"fig_patents.svg", "fig_trademarks.svg", "fig_compare.svg"}
    root = parse(tmp_path / "fig_compare.svg")
    curves = root.findall(NS + "path")
    assert len(curves) == 2
    assert curves[0].get("stroke") != curves[1].get("stroke")
    labels = {t.text for t in root.iter(NS + "text")}
    assert {"patents", "trademarks"} <= labels


def test_no_external_references(docs, tmp_path):
    for p in emit_figures([docs["patents"], docs["trademarks"]], tmp_path):
        text = p.read_text()
        assert "href" not in text and "<script" not in text and "<image" not in text


def test_figures_are_deterministic(docs, tmp_path):
    a = emit_figures([docs["trademarks"]], tmp_path / "a")[0].read_bytes()
    b = emit_figures([docs["trademarks"]], tmp_path / "b")[0].read_bytes()
    assert a == b


def test_comparison_needs_two(docs, tmp_path):
    with pytest.raises(ValueError):
        emit_figures([docs["patents"]], tmp_path, compare=True)
    with pytest.raises(ValueError):
        emit_figures([], tmp_path)
