"""Text outputs of a scenario run: report, series CSV and plot data."""

import logging
from pathlib import Path

from .schemas import PlotFamily, RunReport

logger = logging.getLogger(__name__)

NUMBER_FORMAT = "%.12e"


def _number(value: float) -> str:
    return NUMBER_FORMAT % value


def scenario_dir(report: RunReport, out_dir: Path) -> Path:
    return Path(out_dir) / report.name


def render_report(report: RunReport) -> str:
    """Self-describing key = value report; only generated_at varies between reruns."""
    prov = report.provenance
    lines = [
        f"# qgauss run report: {report.name}",
        "[provenance]",
        f"scenario = {report.name}",
        f"kind = {report.kind}",
        f"config_sha256 = {prov.config_sha256}",
        f"version = {prov.version}",
        f"seed = {prov.seed}",
        f"generated_at = {prov.generated_at}",
        "",
        "[checks]",
        "# name | status | value | threshold | detail",
    ]
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        lines.append(
            f"{check.name} | {status} | {_number(check.value)} | "
            f"{_number(check.threshold)} | {check.detail}"
        )
    passed = sum(check.passed for check in report.checks)
    lines += [
        "",
        "[summary]",
        f"samples = {len(report.rows)}",
        f"checks_passed = {passed}",
        f"checks_total = {len(report.checks)}",
        f"status = {'error' if report.error else 'pass' if report.passed else 'fail'}",
        f"exit_code = {report.exit_code}",
    ]
    if report.error is not None:
        lines += [
            "",
            "[error]",
            f"type = {report.error.type}",
            f"message = {report.error.message}",
        ]
    return "\n".join(lines) + "\n"


def render_series(report: RunReport) -> str:
    lines = [
        f"# qgauss series: {report.name} ({report.kind})",
        f"# config_sha256: {report.provenance.config_sha256}",
        f"# columns: {len(report.columns)}",
    ]
    for name in report.columns:
        lines.append(f"#   {name}: {report.column_notes.get(name, '')}")
    lines.append(",".join(report.columns))
    for row in report.rows:
        lines.append(",".join(_number(value) for value in row))
    return "\n".join(lines) + "\n"


def render_plot_family(report: RunReport, name: str, family: PlotFamily) -> str:
    lines = [
        f"# qgauss plot data: {report.name} / {name}",
        f"# {family.description}",
        f"# columns: {len(family.columns)}",
    ]
    for index, column in enumerate(family.columns, start=1):
        lines.append(f"#   {index}: {column}")
    lines.append(" ".join(family.columns))
    for row in family.rows:
        lines.append(" ".join(_number(value) for value in row))
    return "\n".join(lines) + "\n"


def write_report(report: RunReport, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_report(report), encoding="utf-8")
    return path


def write_series(report: RunReport, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_series(report), encoding="utf-8")
    return path


def emit_plot_data(report: RunReport, directory: Path) -> list[Path]:
    """One file per observable family; the primary family gets <name>.plot.dat."""
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, family in report.families.items():
        if name == report.primary_family:
            path = directory / f"{report.name}.plot.dat"
        else:
            path = directory / f"{report.name}.{name}.plot.dat"
        path.write_text(render_plot_family(report, name, family), encoding="utf-8")
        written.append(path)
    return written


def write_outputs(report: RunReport, out_dir: Path) -> list[Path]:
    """Write every artifact of a run under out_dir/<name>/."""
    directory = scenario_dir(report, out_dir)
    written = [
        write_report(report, directory / f"{report.name}.report.txt"),
        write_series(report, directory / f"{report.name}.series.csv"),
    ]
    written += emit_plot_data(report, directory)
    logger.info("Wrote %d files to %s", len(written), directory)
    return written
