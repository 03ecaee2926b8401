"""Command-line driver: window configuration, one subcommand per
verification, table export, chart rendering, and cached artifacts.

Every output is a deterministic function of the resolved configuration.
Artifacts land in the output directory; a result cache under
`<out>/.cache` is keyed by a hash of the configuration and the package
version, and writes are atomic so concurrent invocations are safe.

Exit codes: 0 all checks pass, 1 a verification failed (the report is
still written), 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Tuple

from . import __version__
from .chart import decomposition_chart, page_chart, render
from .cobar import (
    CobarCochain,
    class_identity_check,
    endomorphism_comodule,
    ext_dimensions,
    moore_comodule,
    trivial_comodule,
    verify_cobar_d_squared,
)
from .dga import DimensionTable, page_dimension_table
from .gf2poly import GF2PolyError, TruncationWindow, default_window
from .specseq import TAGS, CheckRow, Report, Workbench

__all__ = [
    "RunConfig",
    "run",
    "main",
    "export_dimension_table",
    "import_dimension_table",
]

_COMODULES = {
    "S": trivial_comodule,
    "M": moore_comodule,
    "EndM": endomorphism_comodule,
}

_TABLE_FORMATS = ("json", "tsv")
_CHART_FORMATS = ("svg", "txt")

_DEFAULTS = {
    "t_max": 64,
    "s_max": 12,
    "v1_min": -16,
    "v1_max": 16,
    "page": 2,
    "spectrum": "EndM",
    "format": None,  # filled per subcommand
    "out": ".",
    "workers": 1,
    "no_cache": False,
    "what": "page",
}

_INT_KEYS = ("t_max", "s_max", "v1_min", "v1_max", "page", "workers")
_TRUE = ("1", "true", "yes", "on")
_FALSE = ("0", "false", "no", "off")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    cmd: str
    t_max: int
    s_max: int
    v1_min: int
    v1_max: int
    page: int
    spectrum: str
    format: str
    out: str
    workers: int
    no_cache: bool
    what: str

    def window(self) -> TruncationWindow:
        return default_window(self.t_max, self.s_max, self.v1_min, self.v1_max)

    def window_label(self) -> str:
        return (
            f"t_max={self.t_max},s_max={self.s_max},"
            f"v1_min={self.v1_min},v1_max={self.v1_max}"
        )

    def cache_key(self) -> str:
        payload = asdict(self)
        # the output directory and the cache switch do not affect content
        del payload["out"]
        del payload["no_cache"]
        payload["version"] = __version__
        blob = json.dumps(payload, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()


# ---- configuration ----


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="flat key=value file")
    common.add_argument("--t-max", type=int, dest="t_max")
    common.add_argument("--s-max", type=int, dest="s_max")
    common.add_argument("--v1-min", type=int, dest="v1_min")
    common.add_argument("--v1-max", type=int, dest="v1_max")
    common.add_argument("--page", type=int, choices=(2, 3, 4))
    common.add_argument("--spectrum", choices=TAGS)
    common.add_argument("--format", choices=_TABLE_FORMATS + _CHART_FORMATS)
    common.add_argument("--out", metavar="DIR")
    common.add_argument("--workers", type=int)
    common.add_argument("--no-cache", action="store_const", const=True, dest="no_cache")

    parser = argparse.ArgumentParser(
        prog="moorev1",
        description="exact GF(2) workbench for truncated spectral-sequence pages",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)
    sub.add_parser("page", parents=[common], help="export a page dimension table")
    sub.add_parser("ext", parents=[common], help="export cobar Ext dimension tables")
    sub.add_parser("mahowald", parents=[common], help="export Z/B/H tables and classes")
    sub.add_parser("verify", parents=[common], help="run the verification battery")
    sub.add_parser("decompose", parents=[common], help="check the pattern decomposition")
    chart = sub.add_parser("chart", parents=[common], help="render an Adams chart")
    chart.add_argument("what", nargs="?", choices=("page", "decomposition"))
    return parser


def _load_config_file(path: str) -> Dict[str, str]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    out: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        if key not in _DEFAULTS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value.strip()
    return out


def _coerce(key: str, value: str):
    if key in _INT_KEYS:
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"config key {key} needs an integer, got {value!r}")
    if key == "no_cache":
        if value.lower() in _TRUE:
            return True
        if value.lower() in _FALSE:
            return False
        raise ConfigError(f"config key no_cache needs a boolean, got {value!r}")
    return value


def _resolve(ns: argparse.Namespace) -> RunConfig:
    file_opts: Dict[str, str] = {}
    if getattr(ns, "config", None):
        file_opts = _load_config_file(ns.config)
    merged = {}
    for key, default in _DEFAULTS.items():
        flag = getattr(ns, key, None)
        if flag is not None:
            merged[key] = flag
        elif key in file_opts:
            merged[key] = _coerce(key, file_opts[key])
        else:
            merged[key] = default
    if merged["spectrum"] not in TAGS:
        raise ConfigError(f"spectrum must be one of {TAGS}, got {merged['spectrum']!r}")
    if merged["page"] not in (2, 3, 4):
        raise ConfigError(f"page must be 2, 3, or 4, got {merged['page']!r}")
    if merged["what"] not in ("page", "decomposition"):
        raise ConfigError(f"chart target must be page or decomposition")
    if merged["workers"] < 1:
        raise ConfigError("workers must be at least 1")
    allowed = _CHART_FORMATS if ns.cmd == "chart" else _TABLE_FORMATS
    if merged["format"] is None:
        merged["format"] = allowed[0]
    if merged["format"] not in allowed:
        raise ConfigError(
            f"format {merged['format']!r} is not valid for {ns.cmd}; "
            f"choose from {', '.join(allowed)}"
        )
    return RunConfig(cmd=ns.cmd, **merged)


# ---- output plumbing ----


def _atomic_write(path: str, data: bytes) -> None:
    parent = os.path.dirname(path) or "."
    os.makedirs(parent, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except OSError:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _table_payload(table: DimensionTable, fmt: str) -> str:
    if fmt == "tsv":
        return table.to_tsv()
    return _json_text(table.to_json_obj())


def export_dimension_table(table: DimensionTable, path: str, fmt: Optional[str] = None) -> None:
    """Write a table to path as json or tsv (inferred from the extension
    when fmt is not given)."""
    if fmt is None:
        fmt = "tsv" if path.endswith(".tsv") else "json"
    if fmt not in _TABLE_FORMATS:
        raise GF2PolyError(f"unsupported table format {fmt!r}")
    try:
        _atomic_write(path, _table_payload(table, fmt).encode())
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def import_dimension_table(path: str) -> DimensionTable:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    if text.lstrip().startswith("{"):
        return DimensionTable.from_json_obj(json.loads(text))
    return DimensionTable.from_text(text)


def _with_meta(table: DimensionTable, extra: Dict[str, str]) -> DimensionTable:
    return DimensionTable(table.coords, table.rows, {**table.meta, **extra})


# ---- subcommands ----

Artifacts = Tuple[int, str, Dict[str, str]]  # exit code, stdout, files


def _cmd_page(cfg: RunConfig) -> Artifacts:
    wb = Workbench(cfg.window(), workers=cfg.workers)
    pg = wb.page(cfg.spectrum, cfg.page)
    meta = {
        "window": cfg.window_label(),
        "trusted": "rows limited to window-complete degrees",
        "page": str(cfg.page),
        "spectrum": cfg.spectrum,
        "conditional": "true" if pg.conditional else "false",
    }
    table = page_dimension_table(pg, meta=meta)
    fname = f"page-{cfg.spectrum}-r{cfg.page}.{cfg.format}"
    stdout = f"page {cfg.spectrum} r={cfg.page}: {len(table.rows)} nonzero degrees -> {fname}\n"
    return 0, stdout, {fname: _table_payload(table, cfg.format)}


def _cmd_ext(cfg: RunConfig) -> Artifacts:
    # the cobar complex is small by design; its verified envelope is
    # s <= 8, -1 <= t <= 16
    s_max = min(cfg.s_max, 8)
    t_range = (-1, min(cfg.t_max, 16))
    comodule = _COMODULES[cfg.spectrum]()
    table = _with_meta(
        ext_dimensions(comodule, s_max, t_range),
        {"window": cfg.window_label(), "spectrum": cfg.spectrum, "conditional": "false"},
    )
    fname = f"ext-{cfg.spectrum}.{cfg.format}"
    stdout = f"ext {cfg.spectrum}: {len(table.rows)} nonzero bidegrees -> {fname}\n"
    return 0, stdout, {fname: _table_payload(table, cfg.format)}


def _cmd_mahowald(cfg: RunConfig) -> Artifacts:
    wb = Workbench(cfg.window(), workers=cfg.workers)
    tables = wb.mahowald_tables()
    extra = {"window": cfg.window_label(), "conditional": "false"}
    files: Dict[str, str] = {}
    counts = {}
    for kind in ("Z", "B", "H"):
        table = _with_meta(tables.dimension_table(kind), extra)
        counts[kind] = sum(table.rows.values())
        files[f"mahowald-{kind}.{cfg.format}"] = _table_payload(table, cfg.format)
    for kind in ("H", "B"):
        lines = tables.export_lines(kind)
        files[f"mahowald-classes-{kind}.txt"] = "\n".join(lines) + "\n" if lines else ""
    stdout = (
        f"mahowald box p<={tables.p_max} q<={tables.q_max}: "
        f"Z {counts['Z']} B {counts['B']} H {counts['H']} -> mahowald-*.{cfg.format}\n"
    )
    return 0, stdout, files


def _ext_closed_form_report() -> Report:
    """Ext of the endomorphism comodule is F2<1,alpha> tensor F2[h11],
    and Ext of the two-cell comodule is F2[h11] on x0."""
    rows: List[CheckRow] = []
    for tag, expected in (
        ("EndM", lambda s, t: int(t == 2 * s) + int(t == 2 * s - 1)),
        ("M", lambda s, t: int(t == 2 * s)),
    ):
        table = ext_dimensions(_COMODULES[tag](), 8, (-1, 16))
        for s in range(9):
            for t in range(-1, 17):
                lhs = table.dim(s, t)
                rhs = expected(s, t)
                status = "ok" if lhs == rhs else "mismatch"
                rows.append(CheckRow(f"ext-closed-form:{tag}", (s, t), lhs, rhs, status))
    return Report("ext-closed-form", rows)


def _identity_check_report() -> Report:
    endo = endomorphism_comodule()
    c = CobarCochain.basis_element(endo, (1,), "1") + CobarCochain.basis_element(
        endo, (2,), "alpha"
    )
    verdict = class_identity_check(endo, c)
    status = "ok" if verdict == "zero-in-cohomology" else "mismatch"
    rows = [CheckRow("identity-vs-alpha-h11", (1, 2), 0, 0, status)]
    return Report("cobar-identity", rows)


def _report_summary(name: str, ok: bool, conditional: bool, checked: int, failures) -> dict:
    return {
        "name": name,
        "ok": ok,
        "conditional": conditional,
        "checked": checked,
        "failures": failures,
    }


def _cmd_verify(cfg: RunConfig) -> Artifacts:
    wb = Workbench(cfg.window(), workers=cfg.workers)
    summaries: List[dict] = []
    lines: List[str] = []

    def note(name: str, ok: bool, checked: int) -> None:
        lines.append(f"{name}: {'PASS' if ok else 'FAIL'} ({checked} checked)")

    d2_conditional = {"EndM r=2": False, "M r=2": False, "EndM r=3": True, "M r=3": True}
    for key, rep in wb.verify_differentials_square_to_zero().items():
        fails = [f"{m} -> {p}" for m, p in rep.failures]
        summaries.append(
            _report_summary(f"d-squared:{key}", rep.ok, d2_conditional[key], rep.checked, fails)
        )
        note(f"d-squared:{key}", rep.ok, rep.checked)

    cobar_d2 = verify_cobar_d_squared(endomorphism_comodule(), 6, (-1, 12))
    summaries.append(
        _report_summary(
            "d-squared:cobar",
            cobar_d2.ok,
            False,
            cobar_d2.checked,
            [str(f) for f in cobar_d2.failures],
        )
    )
    note("d-squared:cobar", cobar_d2.ok, cobar_d2.checked)

    for report in (
        _ext_closed_form_report(),
        _identity_check_report(),
        wb.verify_e3_presentation(),
        wb.verify_w_grading(),
        wb.verify_module_isomorphisms(),
        wb.verify_e4_claims(),
        wb.verify_e4_dimensions(),
        wb.survival_report(),
    ):
        summaries.append(
            _report_summary(
                report.name,
                report.ok,
                report.conditional,
                len(report.rows),
                [row.to_json_obj() for row in report.failures()],
            )
        )
        note(report.name, report.ok, len(report.rows))

    ok = all(s["ok"] for s in summaries)
    doc = {
        "version": __version__,
        "window": cfg.window_label(),
        "trusted": "each report row sits at a degree its page trusts",
        "ok": ok,
        "conditional": any(s["conditional"] for s in summaries),
        "reports": summaries,
    }
    lines.append(f"verify: {'PASS' if ok else 'FAIL'}")
    stdout = "\n".join(lines) + "\n"
    return (0 if ok else 1), stdout, {"verify-report.json": _json_text(doc)}


def _cmd_decompose(cfg: RunConfig) -> Artifacts:
    wb = Workbench(cfg.window(), workers=cfg.workers)
    report = wb.mahowald_decomposition_check()
    counts = {"ok": 0, "mismatch": 0, "insufficient": 0}
    for row in report.rows:
        counts[row.status] += 1
    doc = {
        "version": __version__,
        "window": cfg.window_label(),
        "trusted": "cells are exact unless marked insufficient",
        "ok": counts["mismatch"] == 0,
        "conditional": report.conditional,
        "counts": counts,
        "rows": [row.to_json_obj() for row in report.rows],
    }
    files: Dict[str, str] = {}
    if cfg.format == "tsv":
        body = ["s\tt\tlhs\trhs\tstatus"]
        for row in report.rows:
            body.append(
                "\t".join(str(x) for x in row.degree + (row.lhs, row.rhs, row.status))
            )
        files["decomposition.tsv"] = "\n".join(body) + "\n"
    files["decomposition.json"] = _json_text(doc)
    stdout = (
        f"decomposition: {counts['ok']} cells ok, {counts['insufficient']} insufficient, "
        f"{counts['mismatch']} mismatches -> decomposition.{cfg.format}\n"
    )
    return (0 if counts["mismatch"] == 0 else 1), stdout, files


def _cmd_chart(cfg: RunConfig) -> Artifacts:
    wb = Workbench(cfg.window(), workers=cfg.workers)
    if cfg.what == "page":
        doc = page_chart(wb.page(cfg.spectrum, cfg.page), title=f"{cfg.spectrum} r={cfg.page}")
        fname = f"chart-page-{cfg.spectrum}-r{cfg.page}.{cfg.format}"
        label = f"chart page {cfg.spectrum} r={cfg.page}"
    else:
        doc = decomposition_chart(wb.mahowald_tables(), (0, 24), (0, 12))
        fname = f"chart-decomposition.{cfg.format}"
        label = "chart decomposition"
    payload = render(doc, cfg.format).decode()
    stdout = f"{label}: {len(doc.dots)} dots -> {fname}\n"
    return 0, stdout, {fname: payload}


_DISPATCH = {
    "page": _cmd_page,
    "ext": _cmd_ext,
    "mahowald": _cmd_mahowald,
    "verify": _cmd_verify,
    "decompose": _cmd_decompose,
    "chart": _cmd_chart,
}


# ---- entry points ----


def run(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve(ns)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    cache_entry = os.path.join(cfg.out, ".cache", cfg.cache_key() + ".json")
    if not cfg.no_cache and os.path.exists(cache_entry):
        try:
            with open(cache_entry, "r", encoding="utf-8") as f:
                manifest = json.load(f)
        except (OSError, ValueError):
            manifest = None
        if manifest is not None:
            for rel in sorted(manifest["files"]):
                _atomic_write(os.path.join(cfg.out, rel), manifest["files"][rel].encode())
            sys.stdout.write(manifest["stdout"])
            return manifest["exit_code"]

    try:
        code, stdout, files = _DISPATCH[cfg.cmd](cfg)
    except GF2PolyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        for rel in sorted(files):
            _atomic_write(os.path.join(cfg.out, rel), files[rel].encode())
    except OSError as exc:
        print(f"error: cannot write output under {cfg.out}: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(stdout)
    if not cfg.no_cache:
        manifest = {"exit_code": code, "stdout": stdout, "files": files}
        try:
            _atomic_write(cache_entry, _json_text(manifest).encode())
        except OSError:
            pass  # a cold cache never changes the result
    return code


def main() -> None:
    sys.exit(run())
