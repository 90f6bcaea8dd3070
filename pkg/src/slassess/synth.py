"""Synthetic ground-truth paths standing in for a recorded drive."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigError
from .trajectory import ABSOLUTE, Trajectory

SHAPES = ("straight", "arc", "sine")


@dataclass(frozen=True)
class SynthSpec:
    """Constant-speed path sampled at ``rate_hz`` from ``t = 0`` to ``duration``.

    ``straight`` follows ``heading_deg``; ``arc`` turns on a circle of
    ``radius`` (positive turns left); ``sine`` weaves laterally around the
    heading with ``amplitude`` and ``wavelength`` (meters of travel).
    """

    duration: float = 300.0
    rate_hz: float = 10.0
    shape: str = "straight"
    speed: float = 14.0
    heading_deg: float = 45.0
    x0: float = 0.0
    y0: float = 0.0
    radius: float = 500.0
    amplitude: float = 5.0
    wavelength: float = 400.0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ConfigError(f"synth.shape must be one of {SHAPES}, got {self.shape!r}")
        if not self.duration > 0:
            raise ConfigError("synth.duration must be positive")
        if not self.rate_hz > 0:
            raise ConfigError("synth.rate_hz must be positive")
        if self.shape == "arc" and self.radius == 0:
            raise ConfigError("synth.radius must be non-zero")
        if self.shape == "sine" and not self.wavelength > 0:
            raise ConfigError("synth.wavelength must be positive")

    def to_dict(self):
        return asdict(self)


def ground_truth(spec: SynthSpec, system_id: str = "truth") -> Trajectory:
    n = int(math.floor(spec.duration * spec.rate_hz + 1e-6))
    t = np.arange(n + 1) / spec.rate_hz
    s = spec.speed * t
    h = math.radians(spec.heading_deg)
    if spec.shape == "straight":
        along, lateral = s, np.zeros_like(s)
    elif spec.shape == "arc":
        phi = s / spec.radius
        along = spec.radius * np.sin(phi)
        lateral = spec.radius * (1.0 - np.cos(phi))
    else:
        along = s
        lateral = spec.amplitude * np.sin(2.0 * np.pi * s / spec.wavelength)
    x = spec.x0 + along * math.cos(h) - lateral * math.sin(h)
    y = spec.y0 + along * math.sin(h) + lateral * math.cos(h)
    return Trajectory(system_id, ABSOLUTE, t, x, y)
