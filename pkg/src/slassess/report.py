"""Run reports and their CSV/JSON serialization.

Numbers are written with 9 significant digits so that two runs of the same
configuration produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParseError

RECORD_COLUMNS = ("step", "t", "system", "reference", "delta", "uncertainty", "flagged")
PLOT_COLUMNS = ("step", "t", "delta", "uncertainty", "threshold", "flagged")
MANIFEST = "manifest.json"
PAIRS_DIR = "pairs"
PLOTDATA_DIR = "plotdata"


def fmt(value: float) -> str:
    return format(float(value), ".9g")


def atomic_write(path, text: str):
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def pair_name(system: str, reference: str) -> str:
    return f"{system}__vs__{reference}"


@dataclass
class PairSeries:
    """Assessment time series of one ordered pair."""

    system: str
    reference: str
    step: np.ndarray
    t: np.ndarray
    delta: np.ndarray
    uncertainty: np.ndarray
    flagged: np.ndarray

    def __len__(self):
        return self.step.size

    def flagged_fraction(self, mask=None) -> float:
        flags = self.flagged if mask is None else self.flagged[mask]
        return float(np.mean(flags)) if flags.size else 0.0


@dataclass
class RunReport:
    pairs: dict[tuple[str, str], PairSeries]
    event_threshold: float
    metadata: dict = field(default_factory=dict)
    timing: float | None = None

    def pair(self, system: str, reference: str) -> PairSeries:
        return self.pairs[(system, reference)]


def _records_csv(series: PairSeries) -> str:
    lines = [",".join(RECORD_COLUMNS)]
    for i in range(len(series)):
        lines.append(
            f"{int(series.step[i])},{fmt(series.t[i])},{series.system},{series.reference},"
            f"{fmt(series.delta[i])},{fmt(series.uncertainty[i])},{int(series.flagged[i])}"
        )
    return "\n".join(lines) + "\n"


def _plot_csv(series: PairSeries, threshold: float) -> str:
    lines = [",".join(PLOT_COLUMNS)]
    thr = fmt(threshold)
    for i in range(len(series)):
        lines.append(
            f"{int(series.step[i])},{fmt(series.t[i])},{fmt(series.delta[i])},"
            f"{fmt(series.uncertainty[i])},{thr},{int(series.flagged[i])}"
        )
    return "\n".join(lines) + "\n"


def write_report(report: RunReport, out_dir) -> list[Path]:
    """Write one record CSV per ordered pair and the run manifest."""
    out_dir = Path(out_dir)
    written = []
    files = {}
    for (system, ref), series in report.pairs.items():
        path = out_dir / PAIRS_DIR / f"{pair_name(system, ref)}.csv"
        atomic_write(path, _records_csv(series))
        files[pair_name(system, ref)] = f"{PAIRS_DIR}/{path.name}"
        written.append(path)
    manifest = dict(report.metadata)
    manifest["event_threshold"] = report.event_threshold
    manifest["pair_files"] = files
    path = out_dir / MANIFEST
    atomic_write(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    written.append(path)
    return written


def emit_plotdata(report: RunReport, out_dir) -> list[Path]:
    """One wide CSV per pair with the delta, uncertainty and threshold series."""
    out_dir = Path(out_dir)
    written = []
    for (system, ref), series in report.pairs.items():
        path = out_dir / f"{pair_name(system, ref)}.csv"
        atomic_write(path, _plot_csv(series, report.event_threshold))
        written.append(path)
    return written


def read_report(report_dir) -> RunReport:
    """Load a report written by :func:`write_report`."""
    report_dir = Path(report_dir)
    manifest_path = report_dir / MANIFEST
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", manifest_path) from None
    pairs = {}
    for rel in manifest["pair_files"].values():
        path = report_dir / rel
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if tuple(header or ()) != RECORD_COLUMNS:
                raise ParseError("unexpected header", path, 1)
            rows = list(reader)
        if not rows:
            raise ParseError("no records", path)
        try:
            step = np.array([int(r[0]) for r in rows])
            t = np.array([float(r[1]) for r in rows])
            delta = np.array([float(r[4]) for r in rows])
            u = np.array([float(r[5]) for r in rows])
            flagged = np.array([r[6] == "1" for r in rows])
        except (ValueError, IndexError) as exc:
            raise ParseError(f"malformed record: {exc}", path) from None
        system, ref = rows[0][2], rows[0][3]
        pairs[(system, ref)] = PairSeries(system, ref, step, t, delta, u, flagged)
    metadata = {k: v for k, v in manifest.items() if k not in ("pair_files", "event_threshold")}
    return RunReport(pairs, float(manifest["event_threshold"]), metadata)
