"""CSV, JSON and plot-script emission."""

from __future__ import annotations

import csv
import hashlib
import logging
import math
from pathlib import Path
from typing import Optional

from mako.template import Template
from pydantic import BaseModel

from app.exceptions.output_error import OutputError
from app.schemas.cop import DiversitySummary
from app.schemas.manifest import EmittedFile, RunManifest
from app.schemas.sweep import SweepResult
from app.schemas.validation import ValidationReport

logger = logging.getLogger(__name__)

CSV_HEADER = (
    "axis",
    "mode",
    "exact",
    "asymptotic",
    "mc_estimate",
    "mc_stderr",
    "trials",
    "feasible",
)

VALIDATION_HEADER = (
    "snr_db",
    "mode",
    "analytic",
    "mc_estimate",
    "mc_stderr",
    "tolerance",
    "passed",
    "counted",
)

DIVERSITY_HEADER = (
    "mode",
    "window_lo_db",
    "window_hi_db",
    "slope",
    "expected_order",
    "points_used",
    "error_floor",
)

PLOT_SCRIPT_TEMPLATE = Template(
    """\
# plot script: one data file, one log-y panel, one curve per column and mode
data "${csv_name}"
xlabel "${axis}"
ylabel "${ylabel}"
% if log_y:
yscale log
% endif
% for mode in modes:
curve "${mode}" x=axis y=exact filter mode="${mode}" style=line
% if with_asymptotic:
curve "${mode} asymptotic" x=axis y=asymptotic filter mode="${mode}" style=dashed
% endif
% if with_mc:
curve "${mode} simulation" x=axis y=mc_estimate err=mc_stderr filter mode="${mode}" style=markers
% endif
% endfor
"""
)


def format_number(value: Optional[float]) -> str:
    """Ten significant digits, dot decimal separator; None becomes an empty field."""
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return f"{value:.10g}"


def sha256_of(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def _emitted(path: Path) -> EmittedFile:
    return EmittedFile(path=str(path), sha256=sha256_of(path))


def ensure_dir(out_dir: Path) -> Path:
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputError(f"cannot create output directory {out_dir}: {e}") from e
    return out_dir


def write_sweep_csv(result: SweepResult, path: Path) -> Path:
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for row in result.rows:
                trials = row.trials if row.mc_estimate is not None else None
                writer.writerow(
                    [
                        format_number(row.axis),
                        row.mode,
                        format_number(row.exact),
                        format_number(row.asymptotic),
                        format_number(row.mc_estimate),
                        format_number(row.mc_stderr),
                        "" if trials is None else str(trials),
                        "true" if row.feasible else "false",
                    ]
                )
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    return path


def write_validation_csv(report: ValidationReport, path: Path) -> Path:
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(VALIDATION_HEADER)
            for point in report.points:
                writer.writerow(
                    [
                        format_number(point.snr_db),
                        point.mode,
                        format_number(point.analytic),
                        format_number(point.mc_estimate),
                        format_number(point.mc_stderr),
                        format_number(point.tolerance),
                        "true" if point.passed else "false",
                        "true" if point.counted else "false",
                    ]
                )
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    return path


def write_diversity_csv(summary: DiversitySummary, path: Path) -> Path:
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(DIVERSITY_HEADER)
            for report in summary.reports:
                lo, hi = report.fit_window_db
                order = report.expected_order
                writer.writerow(
                    [
                        report.mode or "",
                        format_number(lo),
                        format_number(hi),
                        format_number(report.slope),
                        "" if order is None else str(order),
                        str(report.points_used),
                        format_number(report.error_floor),
                    ]
                )
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    return path


def write_plot_script(result: SweepResult, csv_name: str, path: Path) -> Path:
    modes = list(dict.fromkeys(row.mode for row in result.rows))
    text = PLOT_SCRIPT_TEMPLATE.render(
        csv_name=csv_name,
        axis=result.axis,
        ylabel="throughput (BPCU)" if result.metric == "throughput" else "outage probability",
        log_y=result.metric != "throughput",
        modes=modes,
        with_asymptotic=any(row.asymptotic is not None for row in result.rows),
        with_mc=any(row.mc_estimate is not None for row in result.rows),
    )
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    return path


def write_json(model: BaseModel, path: Path) -> Path:
    try:
        path.write_text(model.model_dump_json(indent=2), encoding="utf-8")
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    return path


def emit_outputs(
    result: SweepResult, out_dir: Path, stem: str, plot: bool = True
) -> list[EmittedFile]:
    """Write ``<stem>.csv``, ``<stem>.json`` and optionally ``<stem>.plot``."""
    if not result.rows:
        raise ValueError("refusing to emit an empty result")
    ensure_dir(out_dir)

    csv_path = write_sweep_csv(result, out_dir / f"{stem}.csv")
    paths = [csv_path, write_json(result, out_dir / f"{stem}.json")]
    if plot:
        paths.append(write_plot_script(result, csv_path.name, out_dir / f"{stem}.plot"))

    for path in paths:
        logger.info(f"Wrote {path}")
    return [_emitted(path) for path in paths]


def emit_validation(report: ValidationReport, out_dir: Path, stem: str) -> list[EmittedFile]:
    ensure_dir(out_dir)
    paths = [
        write_validation_csv(report, out_dir / f"{stem}.csv"),
        write_json(report, out_dir / f"{stem}.json"),
    ]
    for path in paths:
        logger.info(f"Wrote {path}")
    return [_emitted(path) for path in paths]


def emit_diversity(
    summary: DiversitySummary, out_dir: Path, stem: str
) -> list[EmittedFile]:
    ensure_dir(out_dir)
    paths = [
        write_diversity_csv(summary, out_dir / f"{stem}.csv"),
        write_json(summary, out_dir / f"{stem}.json"),
    ]
    for path in paths:
        logger.info(f"Wrote {path}")
    return [_emitted(path) for path in paths]


def write_manifest(manifest: RunManifest, out_dir: Path) -> Path:
    ensure_dir(out_dir)
    path = write_json(manifest, out_dir / "manifest.json")
    logger.info(f"Wrote {path}")
    return path


def finish_run(manifest: RunManifest, files: list[EmittedFile]) -> Path:
    """Record emitted files in the manifest and write it beside them."""
    manifest.files.extend(files)
    return write_manifest(manifest, Path(manifest.output_dir))
