"""Deterministic error injection on trajectories.

Every injector keeps timestamps and sample count unchanged and returns a new
trajectory.  Faults listed in a run configuration are applied in list order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, OutOfRange, RelativeKindUnsupported
from .trajectory import ABSOLUTE, Trajectory

FAULT_KINDS = ("freeze", "jump", "drift", "noise")


@dataclass(frozen=True)
class FaultSpec:
    """One fault.

    ``dx``/``dy`` mean the jump offset for ``jump``, the drift rate in m/s
    for ``drift`` and the noise standard deviation for ``noise``.  ``t_to``
    is ignored by ``jump``.  ``seed`` is only used by ``noise``; ``None``
    falls back to the run seed.
    """

    kind: str
    t_from: float
    t_to: float = math.inf
    dx: float = 0.0
    dy: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in FAULT_KINDS:
            raise ConfigError(f"unknown fault kind {self.kind!r}; expected one of {FAULT_KINDS}")
        if not math.isfinite(self.t_from):
            raise ConfigError("fault t_from must be finite")
        if not (math.isfinite(self.dx) and math.isfinite(self.dy)):
            raise ConfigError("fault magnitudes must be finite")
        if self.kind != "jump" and self.t_to < self.t_from:
            raise ConfigError(f"fault span [{self.t_from}, {self.t_to}] is reversed")
        if self.kind == "noise" and (self.dx < 0 or self.dy < 0):
            raise ConfigError("noise standard deviations must be non-negative")


def _require_absolute(traj: Trajectory, what: str):
    if traj.kind != ABSOLUTE:
        raise RelativeKindUnsupported(f"{what} needs an absolute trajectory ({traj.system_id})")


def _check_span(traj: Trajectory, t_from: float, t_to: float):
    t0, t1 = traj.span
    if t_from < t0 or t_from > t1 or t_to < t_from:
        raise OutOfRange(
            f"{traj.system_id}: fault span [{t_from}, {t_to}] outside [{t0}, {t1}]"
        )


def inject_freeze(traj: Trajectory, t_from: float, t_to: float) -> Trajectory:
    """Hold the position at ``t_from`` for all samples in ``[t_from, t_to)``.

    Samples from ``t_to`` on keep their original values, so the release is a
    jump back onto the true path.
    """
    _require_absolute(traj, "freeze")
    _check_span(traj, t_from, t_to)
    held_x = float(np.interp(t_from, traj.t, traj.x))
    held_y = float(np.interp(t_from, traj.t, traj.y))
    mask = (traj.t >= t_from) & (traj.t < t_to)
    x = np.where(mask, held_x, traj.x)
    y = np.where(mask, held_y, traj.y)
    return traj.with_positions(x, y)


def inject_jump(traj: Trajectory, t_at: float, dx: float, dy: float) -> Trajectory:
    """Offset every sample with ``t >= t_at`` by ``(dx, dy)``."""
    _require_absolute(traj, "jump")
    if not math.isfinite(t_at) or t_at < traj.t[0]:
        raise OutOfRange(f"{traj.system_id}: jump time {t_at} precedes the trajectory")
    mask = traj.t >= t_at
    return traj.with_positions(traj.x + mask * dx, traj.y + mask * dy)


def inject_drift(
    traj: Trajectory, t_from: float, t_to: float, rate_dx: float, rate_dy: float
) -> Trajectory:
    """Linearly growing offset inside ``[t_from, t_to]``, held afterwards."""
    _require_absolute(traj, "drift")
    _check_span(traj, t_from, t_to)
    elapsed = np.clip(traj.t, t_from, t_to) - t_from
    return traj.with_positions(traj.x + elapsed * rate_dx, traj.y + elapsed * rate_dy)


def inject_noise(
    traj: Trajectory, t_from: float, t_to: float, sigma_x: float, sigma_y: float, seed: int
) -> Trajectory:
    """Add seeded zero-mean Gaussian noise to samples in ``[t_from, t_to)``.

    Uses numpy's PCG64 generator; the same seed always gives the same output.
    Works on relative trajectories too, where it perturbs the displacements.
    """
    _check_span(traj, t_from, t_to)
    if sigma_x < 0 or sigma_y < 0:
        raise OutOfRange("noise standard deviation must be non-negative")
    mask = (traj.t >= t_from) & (traj.t < t_to)
    n = int(mask.sum())
    rng = np.random.Generator(np.random.PCG64(seed))
    noise = rng.standard_normal((n, 2))
    x = traj.x.copy()
    y = traj.y.copy()
    x[mask] += sigma_x * noise[:, 0]
    y[mask] += sigma_y * noise[:, 1]
    return traj.with_positions(x, y)


def apply_fault(traj: Trajectory, fault: FaultSpec, default_seed: int = 0) -> Trajectory:
    if fault.kind == "freeze":
        return inject_freeze(traj, fault.t_from, fault.t_to)
    if fault.kind == "jump":
        return inject_jump(traj, fault.t_from, fault.dx, fault.dy)
    if fault.kind == "drift":
        return inject_drift(traj, fault.t_from, fault.t_to, fault.dx, fault.dy)
    seed = default_seed if fault.seed is None else fault.seed
    return inject_noise(traj, fault.t_from, fault.t_to, fault.dx, fault.dy, seed)


def apply_faults(traj: Trajectory, faults, default_seed: int = 0) -> Trajectory:
    for fault in faults:
        traj = apply_fault(traj, fault, default_seed)
    return traj
