import json
import subprocess
import sys

import pytest

from chronohurst.cli import main, read_config, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_stats(capsys):
    code, out, _ = run(capsys, "stats", "--fixture", "patents")
    assert code == 0
    d = json.loads(out)
    assert (d["min"], d["max"]) == (3134, 30969)


def test_clean_with_forced_months(capsys, tmp_path):
    code, out, _ = run(capsys, "clean", "--fixture", "patents", "--months", "1995-06", "--out", str(tmp_path))
    assert code == 0
    d = json.loads(out)
    assert [e["month"] for e in d["events"]] == ["1995-06"]
    row = [line for line in (tmp_path / "clean.csv").read_text().splitlines() if line.startswith("1995-06")]
    assert row == ["1995-06,13041"]


def test_che_and_segment(capsys, tmp_path):
    code, out, _ = run(capsys, "che", "--fixture", "patents", "--out", str(tmp_path))
    assert code == 0 and json.loads(out)["points"] == 449
    code, out, _ = run(capsys, "segment", "--fixture", "patents")
    assert code == 0 and json.loads(out)["p2_end"] == "1990-03"


def test_report_and_figures(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "report", "--fixture", "patents", "--step", "6", "--out", str(a))[0] == 0
    assert run(capsys, "report", "--fixture", "trademarks", "--step", "6", "--no-figures", "--out", str(b))[0] == 0
    assert {p.name for p in a.iterdir()} == {"report.json", "che.csv", "clean.csv", "fig_patents.svg"}
    code, out, _ = run(capsys, "figures", str(a / "report.json"), str(b / "report.json"), "--out", str(tmp_path / "f"))
    assert code == 0 and (tmp_path / "f" / "fig_compare.svg").exists()
    code, _, err = run(capsys, "figures", str(a / "report.json"), "--compare")
    assert code == 1 and "two" in err


def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nfixture = trademarks\nmin-window = 30\nstep = 2\n")
    code, out, _ = run(capsys, "che", "--config", str(cfg), "--step", "3", "--out", str(tmp_path))
    assert code == 0
    # 472 months, prefixes 30, 33, ..., 471
    assert json.loads(out)["points"] == len(range(30, 473, 3))
    assert (tmp_path / "che.csv").read_text().splitlines()[1].startswith("1980-02,")


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    with pytest.raises(UsageError):
        read_config(bad)
    bad.write_text("step = many\n")
    with pytest.raises(UsageError):
        read_config(bad)
    with pytest.raises(UsageError):
        read_config(tmp_path / "missing.cfg")


def test_usage_errors_exit_1(capsys, tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["report", "--fixture", "patents", "--bogus"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
    assert run(capsys, "stats")[0] == 1
    assert run(capsys, "che", "--fixture", "patents", "--min-window", "8")[0] == 1
    assert run(capsys, "simulate-fgn", "--hurst", "0.7", "--n", "100")[0] == 1


def test_data_errors_exit_2(capsys, tmp_path):
    short = tmp_path / "short.csv"
    short.write_text("date,value\n" + "".join(f"2000-{m:02d},{m}\n" for m in range(1, 11)))
    code, _, err = run(capsys, "report", "--input", str(short), "--clean", "off", "--out", str(tmp_path))
    assert code == 2 and "[battery]" in err and "InsufficientDataError" in err
    gap = tmp_path / "gap.csv"
    gap.write_text("date,value\n2000-01,1\n2000-03,2\n")
    code, _, err = run(capsys, "stats", "--input", str(gap))
    assert code == 2 and "[parse]" in err
    code, _, err = run(capsys, "stats", "--input", str(tmp_path / "nope.csv"))
    assert code == 2


def test_simulate_fgn(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate-fgn", "--hurst", "0.7", "--n", "64", "--seed", "2")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "t,value" and len(lines) == 65
    assert run(capsys, "simulate-fgn", "--hurst", "0.7", "--n", "64", "--seed", "2")[1] == out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "chronohurst", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "chronohurst" in proc.stdout
