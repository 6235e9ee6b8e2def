"""Figure builders for the nonlocal-Burgers CLI output files.

Three figure kinds: a time-stacked waterfall of u(x, t_i) snapshots from
fields.csv, a probe-gradient overlay against the pair-oracle table with the
predicted singular time marked, and the blow-up-location trend of an
h-sweep summary. Readers validate the file schemas and name the offending
column on mismatch; nothing here ever mutates an input file.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

RECORD_COLUMNS = ["t", "max_u", "max_ux", "argmax_ux", "h1", "h2", "h3"]
SUMMARY_COLUMNS = ["h", "t_estimate", "blowup_location"]


class SchemaError(ValueError):
    """An input file does not match the CLI's documented schema."""


class FigureKind(enum.Enum):
    WATERFALL = "waterfall"
    GRADIENT_OVERLAY = "gradient-overlay"
    SWEEP_TREND = "sweep-trend"


@dataclass(frozen=True)
class FigureSpec:
    kind: FigureKind
    inputs: dict
    output: str
    snapshot_stride: int = 1
    probe_index: int = 0
    period: float | None = None


def _read_csv(path, expected_prefix, name):
    lines = Path(path).read_text().strip().splitlines()
    if not lines:
        raise SchemaError(f"{name} file {path} is empty")
    header = lines[0].split(",")
    for wanted, got in zip(expected_prefix, header):
        if wanted != got:
            raise SchemaError(
                f"{name} file {path}: expected column {wanted!r}, found {got!r}"
            )
    if len(header) < len(expected_prefix):
        missing = expected_prefix[len(header):]
        raise SchemaError(f"{name} file {path}: missing column {missing[0]!r}")
    try:
        data = np.array([[float(c) for c in line.split(",")] for line in lines[1:]])
    except ValueError as exc:
        raise SchemaError(f"{name} file {path}: non-numeric cell ({exc})") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise SchemaError(f"{name} file {path}: ragged rows")
    return header, data


def read_record(path):
    """record.csv: fixed leading columns, then u_at_*/ux_at_* probe pairs."""
    header, data = _read_csv(path, RECORD_COLUMNS, "record")
    probe_cols = header[len(RECORD_COLUMNS):]
    for i, col in enumerate(probe_cols):
        wanted = "u_at_" if i % 2 == 0 else "ux_at_"
        if not col.startswith(wanted):
            raise SchemaError(f"record file {path}: expected a {wanted}* column, "
                              f"found {col!r}")
    return header, data


def read_fields(path):
    """fields.csv: t then one column per grid node."""
    header, data = _read_csv(path, ["t"], "fields")
    if len(header) < 2:
        raise SchemaError(f"fields file {path}: missing column 'u0'")
    if header[1] != "u0":
        raise SchemaError(f"fields file {path}: expected column 'u0', "
                          f"found {header[1]!r}")
    return data[:, 0], data[:, 1:]


def read_summary(path):
    header, data = _read_csv(path, SUMMARY_COLUMNS, "summary")
    if len(header) != 3:
        raise SchemaError(f"summary file {path}: expected exactly 3 columns")
    return data


def read_report(path):
    report = json.loads(Path(path).read_text())
    for key in ("config", "blowup", "violations"):
        if key not in report:
            raise SchemaError(f"report file {path}: missing key {key!r}")
    return report


def read_oracle(path):
    """Oracle table: `# t_star = ...` comment line, then t,F1,F2 rows."""
    lines = Path(path).read_text().strip().splitlines()
    if not lines or not lines[0].startswith("# t_star"):
        raise SchemaError(f"oracle file {path}: missing '# t_star' header line")
    raw = lines[0].split("=", 1)[1].strip()
    t_star = None if raw == "none" else float(raw)
    header = lines[1].split(",")
    if header != ["t", "F1", "F2"]:
        for wanted, got in zip(["t", "F1", "F2"], header + ["<absent>"] * 3):
            if wanted != got:
                raise SchemaError(f"oracle file {path}: expected column "
                                  f"{wanted!r}, found {got!r}")
    data = np.array([[float(c) for c in line.split(",")] for line in lines[2:]])
    return t_star, data


def waterfall_figure(fields_path, report_path=None, stride: int = 1):
    """Overlay u(x, t_i) snapshots, one curve per stride-th dumped frame."""
    times, frames = read_fields(fields_path)
    period = None
    if report_path is not None:
        period = read_report(report_path)["config"]["L"]
    n = frames.shape[1]
    x = np.arange(n) / n * (period if period is not None else 1.0)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    picks = range(0, len(times), max(1, stride))
    colors = plt.cm.viridis(np.linspace(0, 1, len(list(picks)) or 1))
    for color, i in zip(colors, range(0, len(times), max(1, stride))):
        ax.plot(x, frames[i], color=color, lw=1.0, label=f"t={times[i]:.4g}")
    ax.set_xlabel("x" if period is not None else "x / L")
    ax.set_ylabel("u")
    ax.set_title("solution snapshots")
    if len(times) <= 12:
        ax.legend(fontsize=7)
    fig.tight_layout()
    return fig


def gradient_overlay_figure(record_path, oracle_path, probe_index: int = 0):
    """Probe u_x series against the oracle F1(t), singular time marked."""
    header, data = read_record(record_path)
    col = len(RECORD_COLUMNS) + 2 * probe_index + 1
    if col >= len(header):
        raise SchemaError(
            f"record file {record_path}: no column 'ux_at_*' for probe index "
            f"{probe_index}")
    t_star, oracle = read_oracle(oracle_path)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(data[:, 0], data[:, col], "o", ms=2.5,
            label=f"simulation {header[col]}")
    ax.plot(oracle[:, 0], oracle[:, 1], "-", lw=1.2, label="oracle F1(t)")
    if t_star is not None:
        ax.axvline(t_star, color="crimson", ls="--", lw=1.0,
                   label=f"t* = {t_star:.5g}")
        lo, hi = ax.get_xlim()
        ax.set_xlim(lo, max(hi, 1.05 * t_star))
    ax.set_xlabel("t")
    ax.set_ylabel("u_x at probe")
    ax.set_title("probe gradient vs oracle")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def sweep_trend_figure(summary_path, period: float | None = None):
    """Blow-up location (folded to distance from the origin when the domain
    period is supplied) against the shift distance."""
    data = read_summary(summary_path)
    h = data[:, 0]
    loc = data[:, 2]
    if period is not None:
        loc = np.minimum(loc % period, period - loc % period)

    fig, ax = plt.subplots(figsize=(6, 4))
    order = np.argsort(h)
    ax.plot(h[order], loc[order], "o-", ms=5)
    ax.set_xlabel("shift h")
    ax.set_ylabel("distance of blow-up from origin" if period is not None
                  else "blow-up location")
    ax.set_title("blow-up location vs shift")
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> Path:
    """Build the requested figure and write it as a raster image."""
    if spec.kind is FigureKind.WATERFALL:
        fig = waterfall_figure(spec.inputs["fields"], spec.inputs.get("report"),
                               spec.snapshot_stride)
    elif spec.kind is FigureKind.GRADIENT_OVERLAY:
        fig = gradient_overlay_figure(spec.inputs["record"],
                                      spec.inputs["oracle"], spec.probe_index)
    else:
        fig = sweep_trend_figure(spec.inputs["summary"], spec.period)
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=140)
    plt.close(fig)
    return out
