import json
import os

import pytest

from moorev1.cli import (
    RunConfig,
    export_dimension_table,
    import_dimension_table,
    run,
)
from moorev1.dga import DimensionTable
from moorev1.gf2poly import Multidegree, default_window
from moorev1.specseq import CheckRow, Report, Workbench

SMALL = ["--t-max", "20", "--s-max", "5", "--v1-min", "-5", "--v1-max", "5"]


def run_in(tmp_path, *argv):
    return run([*argv, "--out", str(tmp_path)])


def test_page_export_schema(tmp_path):
    assert run_in(tmp_path, "page", *SMALL, "--spectrum", "M") == 0
    doc = json.loads((tmp_path / "page-M-r2.json").read_text())
    assert doc["coords"] == ["s", "t", "u"]
    meta = doc["meta"]
    assert meta["spectrum"] == "M"
    assert meta["page"] == "2"
    assert meta["conditional"] == "false"
    assert "window" in meta and "trusted" in meta
    rows = doc["rows"]
    assert rows == sorted(rows)
    assert all(len(r) == 4 for r in rows)


def test_conditional_flag_on_conjectural_page(tmp_path):
    assert run_in(tmp_path, "page", *SMALL, "--spectrum", "EndM", "--page", "3") == 0
    doc = json.loads((tmp_path / "page-EndM-r3.json").read_text())
    assert doc["meta"]["conditional"] == "true"


def test_page_rows_match_enumeration_oracle(tmp_path):
    assert (
        run_in(tmp_path, "page", "--t-max", "8", "--s-max", "2", "--v1-min", "-2",
               "--v1-max", "2", "--spectrum", "M") == 0
    )
    table = import_dimension_table(str(tmp_path / "page-M-r2.json"))
    # count monomials v1^k h11^a h21^b by hand; the window keeps h-indices
    # with 2^(n+1)-2 <= 13, so exactly v1, h(1,1), h(2,1)
    page = Workbench(default_window(8, 2, -2, 2)).page("M", 2)

    def oracle(s, t, u):
        count = 0
        for k in range(-4, 5):
            for a in range(0, 3):
                for b in range(0, 3):
                    if (a + b, 2 * k + 2 * a + 6 * b, k) == (s, t, u):
                        count += 1
        return count

    for s in range(0, 3):
        for t in range(0, 6):
            for u in range(-1, 2):
                d = Multidegree(s, t, u)
                if page.trusted(d):
                    assert table.dim(s, t, u) == oracle(s, t, u), (s, t, u)
    assert table.dim(0, 2, 1) == 1
    assert table.dim(1, 4, 1) == 1


def test_export_import_round_trip(tmp_path):
    table = DimensionTable(
        ("s", "t"), {(0, 0): 1, (2, 9): 3, (-1, 4): 2}, {"window": "w", "page": "2"}
    )
    for fmt in ("json", "tsv"):
        path = str(tmp_path / f"table.{fmt}")
        export_dimension_table(table, path)
        assert import_dimension_table(path) == table


def test_export_empty_table(tmp_path):
    table = DimensionTable(("s", "t"), {}, {"note": "empty"})
    path = str(tmp_path / "empty.tsv")
    export_dimension_table(table, path)
    text = (tmp_path / "empty.tsv").read_text()
    assert "# note=empty" in text
    assert "s\tt\tdim" in text
    assert import_dimension_table(path) == table


def test_ext_closed_form_spots(tmp_path):
    assert run_in(tmp_path, "ext", "--spectrum", "EndM") == 0
    table = import_dimension_table(str(tmp_path / "ext-EndM.json"))
    assert table.dim(0, 0) == 1  # the identity
    assert table.dim(0, -1) == 1  # alpha
    assert table.dim(1, 2) == 1  # h11
    assert table.dim(1, 1) == 1  # alpha h11
    assert table.dim(2, 3) == 1  # alpha h11^2
    assert table.dim(1, 3) == 0


def test_verify_small_window(tmp_path, capsys):
    code = run_in(tmp_path, "verify", *SMALL, "--workers", "2")
    out = capsys.readouterr().out
    assert code == 0
    assert "verify: PASS" in out
    doc = json.loads((tmp_path / "verify-report.json").read_text())
    assert doc["ok"] is True
    assert doc["conditional"] is True
    names = {r["name"] for r in doc["reports"]}
    assert {"d-squared:EndM r=2", "d-squared:cobar", "ext-closed-form",
            "cobar-identity", "e3-presentation", "w-grading", "e4-claims",
            "e4-closed-form", "survival"} <= names
    by_name = {r["name"]: r for r in doc["reports"]}
    assert by_name["d-squared:EndM r=2"]["conditional"] is False
    assert by_name["d-squared:EndM r=3"]["conditional"] is True
    assert by_name["e4-claims"]["conditional"] is True
    assert all(r["failures"] == [] for r in doc["reports"])


def test_verify_failure_exits_one(tmp_path, monkeypatch):
    bad = Report("w-grading", [CheckRow("w-step", (0, 0, 0), 1, 2, "mismatch")], True)
    monkeypatch.setattr(Workbench, "verify_w_grading", lambda self: bad)
    code = run_in(tmp_path, "verify", *SMALL, "--no-cache")
    assert code == 1
    doc = json.loads((tmp_path / "verify-report.json").read_text())
    assert doc["ok"] is False
    by_name = {r["name"]: r for r in doc["reports"]}
    assert by_name["w-grading"]["failures"] == [
        {"claim": "w-step", "degree": [0, 0, 0], "lhs": 1, "rhs": 2, "status": "mismatch"}
    ]


def test_decompose_report(tmp_path):
    assert run_in(tmp_path, "decompose", *SMALL) == 0
    doc = json.loads((tmp_path / "decomposition.json").read_text())
    assert doc["counts"]["mismatch"] == 0
    assert doc["counts"]["ok"] > 0
    row = doc["rows"][0]
    assert set(row) == {"claim", "degree", "lhs", "rhs", "status"}


def test_chart_outputs(tmp_path):
    assert run_in(tmp_path, "chart", *SMALL, "--spectrum", "M", "--page", "2") == 0
    svg = (tmp_path / "chart-page-M-r2.svg").read_bytes()
    assert svg.startswith(b"<svg")
    assert run_in(tmp_path, "chart", "decomposition", *SMALL, "--format", "txt") == 0
    txt = (tmp_path / "chart-decomposition.txt").read_bytes()
    assert b"+---" in txt


def test_cache_replay_is_byte_identical(tmp_path, capsys):
    argv = ["mahowald", "--t-max", "16", "--s-max", "4", "--v1-min", "-4", "--v1-max", "4"]
    assert run_in(tmp_path, *argv) == 0
    first_out = capsys.readouterr().out
    first = (tmp_path / "mahowald-H.json").read_bytes()
    assert (tmp_path / ".cache").is_dir()
    assert run_in(tmp_path, *argv) == 0
    assert capsys.readouterr().out == first_out
    assert (tmp_path / "mahowald-H.json").read_bytes() == first


def test_no_cache_leaves_no_entries(tmp_path):
    assert run_in(tmp_path, "page", *SMALL, "--no-cache") == 0
    assert not (tmp_path / ".cache").exists()


def test_fresh_and_cached_runs_agree(tmp_path):
    argv = ["page", *SMALL, "--spectrum", "S"]
    a = tmp_path / "a"
    b = tmp_path / "b"
    assert run([*argv, "--out", str(a)]) == 0
    assert run([*argv, "--out", str(b), "--no-cache"]) == 0
    assert (a / "page-S-r2.json").read_bytes() == (b / "page-S-r2.json").read_bytes()


def test_unknown_flag_exits_two(capsys):
    assert run(["verify", "--bogus"]) == 2
    assert "usage" in capsys.readouterr().err


def test_missing_subcommand_exits_two(capsys):
    assert run([]) == 2


def test_chart_rejects_table_formats(capsys):
    assert run(["chart", "--format", "json"]) == 2
    assert "not valid for chart" in capsys.readouterr().err


def test_tables_reject_chart_formats(capsys):
    assert run(["page", "--format", "svg"]) == 2


def test_unsupported_page_exits_two(tmp_path, capsys):
    assert run_in(tmp_path, "page", *SMALL, "--spectrum", "S", "--page", "3") == 2
    assert "error:" in capsys.readouterr().err


def test_config_file_merge_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("t-max=20\ns-max=5\nv1-min=-5\nv1-max=5\nspectrum=M\n# comment\n\n")
    assert run_in(tmp_path, "page", "--config", str(cfg)) == 0
    doc = json.loads((tmp_path / "page-M-r2.json").read_text())
    assert doc["meta"]["window"] == "t_max=20,s_max=5,v1_min=-5,v1_max=5"
    assert run_in(tmp_path, "page", "--config", str(cfg), "--t-max", "16") == 0
    doc = json.loads((tmp_path / "page-M-r2.json").read_text())
    assert doc["meta"]["window"].startswith("t_max=16")


def test_config_file_errors(tmp_path, capsys):
    bad_key = tmp_path / "bad1.cfg"
    bad_key.write_text("bogus=1\n")
    assert run_in(tmp_path, "page", "--config", str(bad_key)) == 2
    bad_int = tmp_path / "bad2.cfg"
    bad_int.write_text("t-max=sixty\n")
    assert run_in(tmp_path, "page", "--config", str(bad_int)) == 2
    assert run_in(tmp_path, "page", "--config", str(tmp_path / "missing.cfg")) == 2


def test_workers_must_be_positive(tmp_path, capsys):
    assert run_in(tmp_path, "page", *SMALL, "--workers", "0") == 2


def test_cache_key_depends_on_config_not_out():
    base = dict(cmd="page", t_max=8, s_max=2, v1_min=-2, v1_max=2, page=2,
                spectrum="M", format="json", out=".", workers=1, no_cache=False,
                what="page")
    a = RunConfig(**base)
    b = RunConfig(**{**base, "out": "/elsewhere", "no_cache": True})
    c = RunConfig(**{**base, "t_max": 10})
    assert a.cache_key() == b.cache_key()
    assert a.cache_key() != c.cache_key()
