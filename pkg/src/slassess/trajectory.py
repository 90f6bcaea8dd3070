"""Trajectory ingestion, resampling onto a common grid and step deltas.

Trajectory files are CSV with a ``t,x,y`` header (``t,dx,dy`` for relative
systems such as wheel odometry), ``#`` comment lines and ``.`` decimals.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import (
    MissingOverlap,
    NonMonotonicTime,
    OutOfRange,
    ParseError,
    RelativeKindUnsupported,
    TooFewSamples,
)

ABSOLUTE = "absolute"
RELATIVE = "relative"
KINDS = (ABSOLUTE, RELATIVE)

_HEADERS = {ABSOLUTE: ("t", "x", "y"), RELATIVE: ("t", "dx", "dy")}


class TrajectorySample(NamedTuple):
    t: float
    x: float
    y: float


class Deltas(NamedTuple):
    """Per-step displacements; ``t`` is the end time of each step."""

    t: np.ndarray
    dx: np.ndarray
    dy: np.ndarray


def _readonly(values):
    arr = np.array(values, dtype=np.float64).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-stamped planar positions of one system.

    For ``kind == "relative"`` the ``x``/``y`` columns hold per-sample
    displacements rather than positions.
    """

    system_id: str
    kind: str
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown trajectory kind {self.kind!r}")
        t, x, y = _readonly(self.t), _readonly(self.x), _readonly(self.y)
        if not (t.size == x.size == y.size):
            raise ValueError("t, x and y must have equal length")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("trajectory values must be finite")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            bad = int(np.flatnonzero(np.diff(t) <= 0)[0]) + 1
            raise NonMonotonicTime(
                f"{self.system_id}: time not strictly increasing at sample {bad}"
            )
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self):
        return self.t.size

    @property
    def samples(self) -> list[TrajectorySample]:
        return [TrajectorySample(*row) for row in zip(self.t.tolist(), self.x.tolist(), self.y.tolist())]

    def __iter__(self) -> Iterator[TrajectorySample]:
        return iter(self.samples)

    @property
    def span(self) -> tuple[float, float]:
        return float(self.t[0]), float(self.t[-1])

    def with_positions(self, x, y) -> "Trajectory":
        return Trajectory(self.system_id, self.kind, self.t, x, y)

    def equals(self, other: "Trajectory") -> bool:
        return (
            self.kind == other.kind
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
        )


def load_trajectory(path, system_id: str, kind: str = ABSOLUTE) -> Trajectory:
    path = Path(path)
    if kind not in KINDS:
        raise ValueError(f"unknown trajectory kind {kind!r}")
    expected = _HEADERS[kind]
    rows = []
    header = None
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            cells = [c.strip() for c in row]
            if header is None:
                header = tuple(cells)
                if header != expected:
                    raise ParseError(
                        f"expected header {','.join(expected)}, got {','.join(cells)}",
                        path, lineno,
                    )
                continue
            if len(cells) != 3:
                raise ParseError(f"expected 3 columns, got {len(cells)}", path, lineno)
            try:
                values = [float(c) for c in cells]
            except ValueError:
                raise ParseError(f"non-numeric value in row {cells}", path, lineno) from None
            if not all(math.isfinite(v) for v in values):
                raise ParseError("non-finite value", path, lineno)
            if rows and values[0] <= rows[-1][0]:
                raise NonMonotonicTime(
                    f"{path}:{lineno}: time {values[0]} does not increase"
                )
            rows.append(values)
    if len(rows) < 2:
        raise TooFewSamples(f"{path}: need at least 2 samples, got {len(rows)}")
    data = np.array(rows)
    return Trajectory(system_id, kind, data[:, 0], data[:, 1], data[:, 2])


def write_trajectory(traj: Trajectory, path):
    """Write ``traj`` in the CSV format :func:`load_trajectory` reads."""
    from .report import atomic_write, fmt

    header = ",".join(_HEADERS[traj.kind])
    lines = [header]
    for t, x, y in zip(traj.t.tolist(), traj.x.tolist(), traj.y.tolist()):
        lines.append(f"{fmt(t)},{fmt(x)},{fmt(y)}")
    atomic_write(path, "\n".join(lines) + "\n")


def time_grid(rate_hz: float, t_start: float, t_end: float) -> np.ndarray:
    if not rate_hz > 0:
        raise ValueError(f"rate must be positive, got {rate_hz}")
    n = int(math.floor((t_end - t_start) * rate_hz + 1e-6)) + 1
    return t_start + np.arange(n) / rate_hz


def common_window(trajectories: Sequence[Trajectory], rate_hz: float) -> tuple[float, float]:
    """Intersection of all spans, rounded inward onto the ``1/rate_hz`` grid."""
    start = max(tr.span[0] for tr in trajectories)
    end = min(tr.span[1] for tr in trajectories)
    t_start = math.ceil(start * rate_hz - 1e-6) / rate_hz
    t_end = math.floor(end * rate_hz + 1e-6) / rate_hz
    if t_end <= t_start:
        names = ", ".join(tr.system_id for tr in trajectories)
        raise MissingOverlap(f"systems share no common time span: {names}")
    return t_start, t_end


def resample(traj: Trajectory, rate_hz: float, t_start: float, t_end: float) -> Trajectory:
    """Linearly interpolate positions at ``t_start + i / rate_hz``."""
    if traj.kind != ABSOLUTE:
        raise RelativeKindUnsupported(
            f"{traj.system_id}: relative trajectories are aggregated by to_deltas"
        )
    t0, t1 = traj.span
    slack = 1e-9 * max(1.0, abs(t0), abs(t1))
    if t_start < t0 - slack or t_end > t1 + slack or t_end < t_start:
        raise OutOfRange(
            f"{traj.system_id}: [{t_start}, {t_end}] not within [{t0}, {t1}]"
        )
    grid = time_grid(rate_hz, t_start, t_end)
    grid = np.clip(grid, t0, t1)
    x = np.interp(grid, traj.t, traj.x)
    y = np.interp(grid, traj.t, traj.y)
    return Trajectory(traj.system_id, ABSOLUTE, grid, x, y)


def to_deltas(traj: Trajectory, grid: np.ndarray | None = None) -> Deltas:
    """Per-step displacements.

    Absolute trajectories are differenced.  Relative ones pass through, or,
    when ``grid`` is given, are summed over each interval
    ``(grid[i-1], grid[i]]``.
    """
    if traj.kind == ABSOLUTE:
        if len(traj) < 2:
            raise TooFewSamples(f"{traj.system_id}: need at least 2 samples")
        return Deltas(traj.t[1:].copy(), np.diff(traj.x), np.diff(traj.y))

    if grid is None:
        if len(traj) < 1:
            raise TooFewSamples(f"{traj.system_id}: no samples")
        return Deltas(traj.t.copy(), traj.x.copy(), traj.y.copy())

    grid = np.asarray(grid, dtype=np.float64)
    if grid.size < 2:
        raise TooFewSamples("grid needs at least 2 points")
    step = float(np.min(np.diff(grid)))
    idx = np.searchsorted(grid, traj.t - 1e-6 * step, side="left")
    keep = (idx >= 1) & (idx < grid.size)
    n = grid.size - 1
    dx = np.bincount(idx[keep] - 1, weights=traj.x[keep], minlength=n)
    dy = np.bincount(idx[keep] - 1, weights=traj.y[keep], minlength=n)
    return Deltas(grid[1:].copy(), dx, dy)


def relative_from_absolute(traj: Trajectory) -> Trajectory:
    """Convert positions to per-sample displacements (first sample moves 0)."""
    dx = np.diff(traj.x, prepend=traj.x[0])
    dy = np.diff(traj.y, prepend=traj.y[0])
    return Trajectory(traj.system_id, RELATIVE, traj.t, dx, dy)
